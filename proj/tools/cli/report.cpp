#include "report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace fleetcarbon::cli {

using Json = nlohmann::ordered_json;

namespace {

constexpr Stage kStages[] = {Stage::Baseline, Stage::Public, Stage::Interpolated};

double round2(double v) {
  const double r = std::round(v * 100.0) / 100.0;
  return r == 0.0 ? 0.0 : r;
}

std::string_view method_code(Method m) {
  switch (m) {
    case Method::MeasuredEnergy: return "ME";
    case Method::ReportedPower: return "RP";
    case Method::DerivedPower: return "DP";
    case Method::ComponentModel: return "CM";
    case Method::ProxyAccelerator: return "PX";
    case Method::Interpolated: return "IN";
    case Method::NotEstimable: return "NE";
  }
  return "NE";
}

constexpr std::string_view kMethodLegend =
    "methods: ME measured energy, RP reported power, DP derived power, CM component model, "
    "PX proxy accelerator, IN interpolated, NE not estimable\n";

std::string join_row(const std::vector<std::string>& cells, char delim) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += delim;
    out += csv_escape(cells[i], delim);
  }
  out += '\n';
  return out;
}

std::string stage_label(Stage s) {
  switch (s) {
    case Stage::Baseline: return "list";
    case Stage::Public: return "+public";
    case Stage::Interpolated: return "+interp";
  }
  return "";
}

Json value_json(const Estimate& e) {
  Json j;
  j["value_mt"] = e.value_kg ? Json(round2(e.value_mt())) : Json(nullptr);
  j["method"] = std::string(to_string(e.method));
  j["scenario"] = std::string(to_string(e.scenario));
  return j;
}

// Each distinct message once per kind, labelled with the stages it came from.
std::vector<std::string> row_warnings(const EstimateReport& r, std::size_t i) {
  std::vector<std::string> out;
  for (const auto& k : r.kinds) {
    std::vector<std::pair<std::string, std::string>> seen;  // message, stages
    for (Stage s : kStages) {
      const auto& col = k.stage(s);
      if (!col) continue;
      for (const auto& w : (*col)[i].warnings) {
        auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& p) { return p.first == w; });
        if (it == seen.end()) {
          seen.emplace_back(w, std::string(stage_key(s)));
        } else if (!it->second.ends_with(stage_key(s))) {
          it->second += fmt::format("+{}", stage_key(s));
        }
      }
    }
    for (const auto& [msg, stages] : seen) {
      out.push_back(fmt::format("{} {}: {}", kind_key(k.kind), stages, msg));
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string bucket_label(const RankBucket& b) { return fmt::format("{}-{}", b.first, b.last); }

std::string status_of(const SystemDelta& d) {
  if (d.newly_estimable) return "newly_estimable";
  if (d.no_longer_estimable) return "no_longer_estimable";
  if (!d.a_mt && !d.b_mt) return "not_estimable";
  return "estimable";
}

std::string opt_mt(const std::optional<double>& v) { return v ? format_mt(*v) : ""; }

Json opt_json(const std::optional<double>& v) { return v ? Json(round2(*v)) : Json(nullptr); }

}  // namespace

std::string_view stage_key(Stage s) {
  switch (s) {
    case Stage::Baseline: return "baseline";
    case Stage::Public: return "public";
    case Stage::Interpolated: return "interpolated";
  }
  return "";
}

const std::optional<std::vector<Estimate>>& KindColumns::stage(Stage s) const {
  switch (s) {
    case Stage::Baseline: return baseline;
    case Stage::Public: return with_public;
    case Stage::Interpolated: return interpolated;
  }
  return baseline;
}

std::string kind_key(CarbonKind k) {
  return k == CarbonKind::Operational ? "operational" : "embodied";
}

std::string format_mt(double mt) { return fmt::format("{:.2f}", round2(mt)); }

std::string csv_escape(std::string_view cell, char delim) {
  if (cell.find_first_of(std::string{delim, '"', '\n', '\r'}) == std::string_view::npos) {
    return std::string(cell);
  }
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// ---- estimate ---------------------------------------------------------------

std::string estimate_csv(const EstimateReport& r, char delim) {
  std::vector<std::string> header{"rank", "name"};
  for (const auto& k : r.kinds) {
    for (Stage s : kStages) {
      const auto prefix = fmt::format("{}_{}", kind_key(k.kind), stage_key(s));
      header.push_back(prefix + "_mt");
      header.push_back(prefix + "_method");
      header.push_back(prefix + "_scenario");
    }
  }
  header.push_back("warnings");
  std::string out = join_row(header, delim);

  for (std::size_t i = 0; i < r.systems.size(); ++i) {
    std::vector<std::string> cells{std::to_string(r.systems[i].rank), r.systems[i].name};
    for (const auto& k : r.kinds) {
      for (Stage s : kStages) {
        const auto& col = k.stage(s);
        if (!col) {
          cells.insert(cells.end(), {"", "", ""});
          continue;
        }
        const auto& e = (*col)[i];
        cells.push_back(e.value_kg ? format_mt(e.value_mt()) : "");
        cells.emplace_back(to_string(e.method));
        cells.emplace_back(to_string(e.scenario));
      }
    }
    cells.push_back(join(row_warnings(r, i), "; "));
    out += join_row(cells, delim);
  }
  return out;
}

std::string estimate_json(const EstimateReport& r, const CarbonFactorTable& factors) {
  Json doc;
  doc["schema_version"] = 1;
  doc["unit"] = "MT CO2e";
  Json totals = Json::object();
  for (const auto& k : r.kinds) {
    Json per = Json::object();
    for (Stage s : kStages) {
      const auto& col = k.stage(s);
      if (!col) {
        per[std::string(stage_key(s))] = nullptr;
        continue;
      }
      const auto a = aggregate(*col, factors);
      Json t;
      t["total_mt"] = round2(a.total_mt);
      t["estimated"] = a.estimated_count;
      t["systems"] = a.total_count;
      t["scenario"] = std::string(to_string(a.scenario));
      t["vehicles"] = std::round(a.equivalence.vehicles);
      t["miles"] = std::round(a.equivalence.miles);
      per[std::string(stage_key(s))] = t;
    }
    totals[kind_key(k.kind)] = per;
  }
  doc["totals"] = totals;

  Json systems = Json::array();
  for (std::size_t i = 0; i < r.systems.size(); ++i) {
    Json row;
    row["rank"] = r.systems[i].rank;
    row["name"] = r.systems[i].name;
    for (const auto& k : r.kinds) {
      Json per;
      for (Stage s : kStages) {
        const auto& col = k.stage(s);
        per[std::string(stage_key(s))] = col ? value_json((*col)[i]) : Json(nullptr);
      }
      row[kind_key(k.kind)] = per;
    }
    row["warnings"] = row_warnings(r, i);
    systems.push_back(std::move(row));
  }
  doc["systems"] = std::move(systems);
  return doc.dump(2) + "\n";
}

std::string estimate_table(const EstimateReport& r, const CarbonFactorTable& factors) {
  std::string out = fmt::format("{:>5}  {:<28}", "rank", "name");
  for (const auto& k : r.kinds) {
    for (Stage s : kStages) {
      out += fmt::format("  {:>17}", fmt::format("{} {}", kind_key(k.kind).substr(0, 3),
                                                   stage_label(s)));
    }
  }
  out += '\n';
  for (std::size_t i = 0; i < r.systems.size(); ++i) {
    out += fmt::format("{:>5}  {:<28.28}", r.systems[i].rank, r.systems[i].name);
    for (const auto& k : r.kinds) {
      for (Stage s : kStages) {
        const auto& col = k.stage(s);
        std::string cell;
        if (col) {
          const auto& e = (*col)[i];
          cell = e.value_kg ? fmt::format("{} {}", format_mt(e.value_mt()), method_code(e.method))
                            : std::string(method_code(e.method));
        }
        out += fmt::format("  {:>17}", cell);
      }
    }
    out += '\n';
  }
  out += '\n';
  for (const auto& k : r.kinds) {
    for (Stage s : kStages) {
      const auto& col = k.stage(s);
      if (!col) continue;
      const auto a = aggregate(*col, factors);
      out += fmt::format("{:<12} {:<13} {:>16} MT  ({}/{} systems, {})\n", kind_key(k.kind),
                         stage_label(s), format_mt(a.total_mt), a.estimated_count,
                         a.total_count, to_string(a.scenario));
    }
  }
  out += kMethodLegend;
  return out;
}

// ---- coverage ---------------------------------------------------------------

std::string coverage_headline(const CoverageReport& r) {
  return fmt::format("{}/{} ({:.1f}%)", r.estimable_count, r.total_count, 100.0 * r.fraction());
}

std::string coverage_table(const std::vector<CoverageReport>& reports) {
  std::string out;
  for (const auto& r : reports) {
    out += fmt::format("{} coverage, {}: {}\n", kind_key(r.kind), to_string(r.scenario),
                       coverage_headline(r));
    out += fmt::format("  {:<9} {:>9} {:>6} {:>8}\n", "ranks", "estimable", "total", "percent");
    for (const auto& b : r.per_bucket) {
      const double pct = b.total ? 100.0 * b.estimable / b.total : 0.0;
      out += fmt::format("  {:<9} {:>9} {:>6} {:>7.1f}%\n", bucket_label(b.bucket), b.estimable,
                         b.total, pct);
    }
  }
  return out;
}

std::string coverage_csv(const std::vector<CoverageReport>& reports, char delim) {
  std::string out = join_row({"kind", "scenario", "first_rank", "last_rank", "estimable", "total",
                              "fraction"},
                             delim);
  for (const auto& r : reports) {
    for (const auto& b : r.per_bucket) {
      out += join_row({kind_key(r.kind), std::string(to_string(r.scenario)),
                       std::to_string(b.bucket.first), std::to_string(b.bucket.last),
                       std::to_string(b.estimable), std::to_string(b.total),
                       fmt::format("{:.4f}", b.total ? double(b.estimable) / b.total : 0.0)},
                      delim);
    }
  }
  return out;
}

std::string coverage_json(const std::vector<CoverageReport>& reports) {
  Json doc = Json::array();
  for (const auto& r : reports) {
    Json j;
    j["kind"] = kind_key(r.kind);
    j["scenario"] = std::string(to_string(r.scenario));
    j["estimable"] = r.estimable_count;
    j["total"] = r.total_count;
    j["percent"] = std::round(1000.0 * r.fraction()) / 10.0;
    Json buckets = Json::array();
    for (const auto& b : r.per_bucket) {
      buckets.push_back({{"first_rank", b.bucket.first},
                         {"last_rank", b.bucket.last},
                         {"estimable", b.estimable},
                         {"total", b.total}});
    }
    j["buckets"] = std::move(buckets);
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

// ---- summary ----------------------------------------------------------------

std::string summary_table(const Summary& s) {
  std::string out = "incomplete records per metric\n";
  out += fmt::format("  {:<28} {:>11} {:>9}\n", "metric", "Top500.org", "+public");
  for (std::size_t i = 0; i < s.baseline.size(); ++i) {
    out += fmt::format("  {:<28} {:>11} {:>9}\n", display_name(s.baseline[i].first),
                       s.baseline[i].second,
                       s.with_public ? std::to_string((*s.with_public)[i].second) : "-");
  }
  out += "\nfleet totals\n";
  for (const auto& t : s.totals) {
    const auto& a = t.assessment;
    const auto label = fmt::format("{}{}", to_string(t.scenario), t.interpolated ? " +interp" : "");
    out += fmt::format("  {:<12} {:<27} {:>14} MT  {:>3}/{} systems  avg {:>10} MT  "
                       "{:.0f} vehicles  {:.3e} miles\n",
                       kind_key(t.kind), label,
                       format_mt(a.total_mt), a.estimated_count, a.total_count,
                       format_mt(a.average_mt), a.equivalence.vehicles, a.equivalence.miles);
  }
  return out;
}

std::string summary_csv(const Summary& s, char delim) {
  std::string out = join_row({"metric", "key", "baseline_incomplete", "public_incomplete"}, delim);
  for (std::size_t i = 0; i < s.baseline.size(); ++i) {
    out += join_row({std::string(display_name(s.baseline[i].first)),
                     std::string(field_key(s.baseline[i].first)),
                     std::to_string(s.baseline[i].second),
                     s.with_public ? std::to_string((*s.with_public)[i].second) : ""},
                    delim);
  }
  return out;
}

std::string summary_json(const Summary& s) {
  Json doc;
  Json metrics = Json::array();
  for (std::size_t i = 0; i < s.baseline.size(); ++i) {
    Json m;
    m["metric"] = std::string(display_name(s.baseline[i].first));
    m["key"] = std::string(field_key(s.baseline[i].first));
    m["baseline_incomplete"] = s.baseline[i].second;
    m["public_incomplete"] = s.with_public ? Json((*s.with_public)[i].second) : Json(nullptr);
    metrics.push_back(std::move(m));
  }
  doc["completeness"] = std::move(metrics);
  Json totals = Json::array();
  for (const auto& t : s.totals) {
    const auto& a = t.assessment;
    Json j;
    j["kind"] = kind_key(t.kind);
    j["scenario"] = std::string(to_string(t.scenario));
    j["interpolated"] = t.interpolated;
    j["total_mt"] = round2(a.total_mt);
    j["average_mt"] = round2(a.average_mt);
    j["estimated"] = a.estimated_count;
    j["systems"] = a.total_count;
    Json methods = Json::object();
    for (const auto& [m, n] : a.counts_by_method) methods[std::string(to_string(m))] = n;
    j["methods"] = std::move(methods);
    j["vehicles"] = std::round(a.equivalence.vehicles);
    j["miles"] = std::round(a.equivalence.miles);
    totals.push_back(std::move(j));
  }
  doc["totals"] = std::move(totals);
  return doc.dump(2) + "\n";
}

// ---- delta ------------------------------------------------------------------

std::string delta_table(const std::vector<ScenarioDelta>& deltas) {
  std::string out;
  for (const auto& d : deltas) {
    const auto newly = std::count_if(d.systems.begin(), d.systems.end(),
                                     [](const SystemDelta& s) { return s.newly_estimable; });
    const auto lost = std::count_if(d.systems.begin(), d.systems.end(),
                                    [](const SystemDelta& s) { return s.no_longer_estimable; });
    const auto changed = std::count_if(d.systems.begin(), d.systems.end(),
                                       [](const SystemDelta& s) { return s.delta_mt != 0.0; });
    out += fmt::format("{} {} -> {}\n", kind_key(d.kind), to_string(d.a_scenario),
                       to_string(d.b_scenario));
    out += fmt::format("  total a      {:>16} MT\n", format_mt(d.total_a_mt));
    out += fmt::format("  total b      {:>16} MT\n", format_mt(d.total_b_mt));
    out += fmt::format("  delta        {:>16} MT  ({})\n", format_mt(d.total_delta_mt),
                       d.percent ? fmt::format("{:+.2f}%", *d.percent) : "n/a");
    out += fmt::format("  systems changed {}, newly estimable {}, no longer estimable {}\n",
                       changed, newly, lost);
  }
  return out;
}

std::string delta_csv(const std::vector<ScenarioDelta>& deltas, char delim) {
  std::string out = join_row({"kind", "rank", "a_mt", "a_method", "a_scenario", "b_mt", "b_method",
                              "b_scenario", "delta_mt", "status"},
                             delim);
  for (const auto& d : deltas) {
    for (const auto& s : d.systems) {
      out += join_row({kind_key(d.kind), std::to_string(s.rank), opt_mt(s.a_mt),
                       std::string(to_string(s.a_method)), std::string(to_string(d.a_scenario)),
                       opt_mt(s.b_mt), std::string(to_string(s.b_method)),
                       std::string(to_string(d.b_scenario)), format_mt(s.delta_mt), status_of(s)},
                      delim);
    }
  }
  return out;
}

std::string delta_json(const std::vector<ScenarioDelta>& deltas) {
  Json doc = Json::array();
  for (const auto& d : deltas) {
    Json j;
    j["kind"] = kind_key(d.kind);
    j["a_scenario"] = std::string(to_string(d.a_scenario));
    j["b_scenario"] = std::string(to_string(d.b_scenario));
    j["total_a_mt"] = round2(d.total_a_mt);
    j["total_b_mt"] = round2(d.total_b_mt);
    j["total_delta_mt"] = round2(d.total_delta_mt);
    j["percent"] = d.percent ? Json(std::round(*d.percent * 100.0) / 100.0) : Json(nullptr);
    Json systems = Json::array();
    for (const auto& s : d.systems) {
      Json row;
      row["rank"] = s.rank;
      row["a_mt"] = opt_json(s.a_mt);
      row["a_method"] = std::string(to_string(s.a_method));
      row["b_mt"] = opt_json(s.b_mt);
      row["b_method"] = std::string(to_string(s.b_method));
      row["delta_mt"] = round2(s.delta_mt);
      row["status"] = status_of(s);
      systems.push_back(std::move(row));
    }
    j["systems"] = std::move(systems);
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

// ---- projection -------------------------------------------------------------

std::string projection_table(const Projection& p) {
  std::string out = fmt::format("annual growth {:.2f}% ({})\n", 100.0 * p.annual_rate,
                                p.rate_source);
  out += fmt::format("  {:<6} {:>16}\n", "year", "MT CO2e");
  for (const auto& yv : p.series) {
    out += fmt::format("  {:<6} {:>16}\n", yv.year, format_mt(yv.value));
  }
  return out;
}

std::string projection_csv(const Projection& p, char delim) {
  std::string out = join_row({"year", "value_mt", "method", "annual_rate"}, delim);
  for (const auto& yv : p.series) {
    out += join_row({std::to_string(yv.year), format_mt(yv.value), "projected:" + p.rate_source,
                     fmt::format("{:.6f}", p.annual_rate)},
                    delim);
  }
  return out;
}

std::string projection_json(const Projection& p) {
  Json doc;
  doc["annual_rate"] = p.annual_rate;
  doc["rate_source"] = p.rate_source;
  Json series = Json::array();
  for (const auto& yv : p.series) {
    series.push_back({{"year", yv.year}, {"value_mt", round2(yv.value)}});
  }
  doc["series"] = std::move(series);
  return doc.dump(2) + "\n";
}

std::string trend_table(const PerfPerCarbon& t) {
  std::string out = fmt::format("performance per carbon (PFlop/s per kMT): slope {:+.4f}/year\n",
                                t.slope_per_year);
  out += fmt::format("  {:<6} {:>12} {:>12} {:>12}\n", "year", "ratio", "fitted", "2x/18mo");
  for (std::size_t i = 0; i < t.ratio.size(); ++i) {
    const double fitted = t.intercept + t.slope_per_year * (t.ratio[i].year - t.ratio[0].year);
    out += fmt::format("  {:<6} {:>12.4f} {:>12.4f} {:>12.4f}\n", t.ratio[i].year,
                       t.ratio[i].value, fitted, t.doubling[i].value);
  }
  return out;
}

std::string trend_csv(const PerfPerCarbon& t, char delim) {
  std::string out = join_row({"year", "ratio", "fitted", "doubling_reference"}, delim);
  for (std::size_t i = 0; i < t.ratio.size(); ++i) {
    const double fitted = t.intercept + t.slope_per_year * (t.ratio[i].year - t.ratio[0].year);
    out += join_row({std::to_string(t.ratio[i].year), fmt::format("{:.6f}", t.ratio[i].value),
                     fmt::format("{:.6f}", fitted), fmt::format("{:.6f}", t.doubling[i].value)},
                    delim);
  }
  return out;
}

std::string trend_json(const PerfPerCarbon& t) {
  Json doc;
  doc["slope_per_year"] = t.slope_per_year;
  doc["intercept"] = t.intercept;
  Json rows = Json::array();
  for (std::size_t i = 0; i < t.ratio.size(); ++i) {
    rows.push_back({{"year", t.ratio[i].year},
                    {"ratio", t.ratio[i].value},
                    {"doubling_reference", t.doubling[i].value}});
  }
  doc["series"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace fleetcarbon::cli
