#include "app.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "fleetcarbon/catalog.hpp"
#include "fleetcarbon/embodied.hpp"
#include "fleetcarbon/errors.hpp"
#include "fleetcarbon/fleet.hpp"
#include "fleetcarbon/ingest.hpp"
#include "fleetcarbon/projection.hpp"
#include "report.hpp"
#include "settings.hpp"

namespace fleetcarbon::cli {

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config, factors, catalog, fleet, overlay, fleet_b, format, delimiter;
  std::string output, series;
  unsigned threads = 1;
  bool verbose = false;
  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_common(CLI::App* cmd, CommonFlags& f, bool fleet_inputs) {
  f.opts["config"] = cmd->add_option("--config", f.config, "YAML file with default settings");
  f.opts["factors"] =
      cmd->add_option("--factors", f.factors, "carbon factor table (else $FLEETCARBON_FACTORS)");
  f.opts["catalog"] =
      cmd->add_option("--catalog", f.catalog, "device catalog (else the one the factors name)");
  if (fleet_inputs) {
    f.opts["fleet"] = cmd->add_option("--fleet", f.fleet, "fleet file");
    f.opts["overlay"] = cmd->add_option("--overlay", f.overlay, "public-information overlay");
    f.opts["threads"] = cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores");
    f.opts["delimiter"] =
        cmd->add_option("--delimiter", f.delimiter, "fleet and report delimiter (default ',')");
  }
  f.opts["format"] = cmd->add_option("--format", f.format, "table, csv or json")
                         ->check(CLI::IsMember({"table", "csv", "json"}));
  f.opts["output"] = cmd->add_option("-o,--output", f.output, "write the report here");
  cmd->add_flag("-v,--verbose", f.verbose, "print the effective configuration");
}

Settings resolve_settings(const CommonFlags& f, std::ostream& err) {
  Settings flags;
  auto path_flag = [&](Setting<fs::path>& s, const std::string& name, const std::string& v) {
    if (f.given(name)) s.offer(fs::path(v), Source::Flag);
  };
  path_flag(flags.factors, "factors", f.factors);
  path_flag(flags.catalog, "catalog", f.catalog);
  path_flag(flags.fleet, "fleet", f.fleet);
  path_flag(flags.overlay, "overlay", f.overlay);
  path_flag(flags.fleet_b, "fleet-b", f.fleet_b);
  if (f.given("threads")) flags.threads.offer(f.threads, Source::Flag);
  if (f.given("format")) flags.format.offer(f.format, Source::Flag);
  if (f.given("delimiter")) flags.delimiter.offer(f.delimiter, Source::Flag);

  std::optional<ConfigFile> config;
  if (f.given("config")) config = load_config(f.config);
  auto s = resolve(flags, config);
  if (s.format.value && *s.format.value != "table" && *s.format.value != "csv" &&
      *s.format.value != "json") {
    throw ConfigError(f.config, 0, fmt::format("unknown format '{}'", *s.format.value));
  }
  if (f.verbose) print_settings(s, err);
  return s;
}

char delimiter_of(const Settings& s) {
  const auto& d = *s.delimiter.value;
  if (d == "\\t" || d == "tab") return '\t';
  if (d.size() != 1 || d == "\"" || d == "\n") {
    throw ConfigError("", 0, fmt::format("delimiter must be a single character, got '{}'", d));
  }
  return d[0];
}

struct Reference {
  CarbonFactorTable factors;
  DeviceCatalog catalog;
};

Reference load_reference(const Settings& s) {
  if (!s.factors.value) {
    throw ConfigError("", 0,
                      fmt::format("no factor table: pass --factors or set {}", kFactorsEnv));
  }
  Reference r{load_factors(*s.factors.value), {}};
  if (auto bad = check_invariants(r.factors); !bad.empty()) {
    throw ConfigError(s.factors.value->string(), 0, bad.front());
  }
  fs::path catalog;
  if (s.catalog.value) {
    catalog = *s.catalog.value;
  } else if (r.factors.catalog_path) {
    catalog = s.factors.value->parent_path() / *r.factors.catalog_path;
  } else {
    throw ConfigError(s.factors.value->string(), 0,
                      "no device catalog: name one under 'catalog' or pass --catalog");
  }
  r.catalog = load_catalog(catalog);
  return r;
}

struct Fleets {
  Fleet baseline;
  std::optional<Fleet> with_public;
};

Fleet load_fleet(const fs::path& path, char delim, std::ostream& err) {
  auto f = parse_fleet(path, delim);
  for (const auto& w : f.warnings) err << "warning: " << w << '\n';
  return f;
}

Fleet overlay_onto(const Fleet& base, const fs::path& overlay, std::ostream& err) {
  auto patches = load_overlay(overlay);
  auto f = apply_overlay(base, patches, overlay.string());
  for (std::size_t i = base.warnings.size(); i < f.warnings.size(); ++i) {
    err << "warning: " << f.warnings[i] << '\n';
  }
  return f;
}

Fleets load_fleets(const Settings& s, std::ostream& err) {
  if (!s.fleet.value) throw ConfigError("", 0, "no fleet file: pass --fleet");
  const char delim = delimiter_of(s);
  Fleets out{load_fleet(*s.fleet.value, delim, err), std::nullopt};
  if (s.overlay.value) out.with_public = overlay_onto(out.baseline, *s.overlay.value, err);
  return out;
}

std::vector<CarbonKind> kinds_of(const std::string& kind) {
  if (kind == "operational") return {CarbonKind::Operational};
  if (kind == "embodied") return {CarbonKind::Embodied};
  return {CarbonKind::Operational, CarbonKind::Embodied};
}

bool want_public(const std::string& scenario, const Fleets& f) {
  if (scenario == "baseline") return false;
  if (scenario == "overlay") {
    if (!f.with_public) throw ConfigError("", 0, "--scenario overlay needs --overlay");
    return true;
  }
  return f.with_public.has_value();
}

void emit(const CommonFlags& f, const std::string& text, std::ostream& out) {
  if (f.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(f.output, std::ios::binary);
  if (!file) throw ConfigError(f.output, 0, "cannot write file");
  file << text;
}

void write_series(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError(path, 0, "cannot write file");
  file << text;
}

EstimateOptions estimate_options(const Settings& s) {
  EstimateOptions o;
  o.threads = *s.threads.value;
  return o;
}

// ---- small delimited-table reader for history and trend files ----------------

struct Table {
  std::vector<std::string> header;
  std::vector<std::pair<int, std::vector<std::string>>> rows;  // (line, cells)

  std::size_t column(const std::string& file, const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError(file, 1, fmt::format("missing column '{}'", name));
    return static_cast<std::size_t>(it - header.begin());
  }
};

Table read_table(const fs::path& path, char delim) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string(), 0, "cannot open file");
  Table t;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, delim)) cells.push_back(cell);
    if (t.header.empty()) {
      t.header = std::move(cells);
    } else {
      if (cells.size() != t.header.size()) {
        throw InputError(path.string(), n,
                         fmt::format("expected {} cells, found {}", t.header.size(), cells.size()));
      }
      t.rows.emplace_back(n, std::move(cells));
    }
  }
  if (t.header.empty()) throw InputError(path.string(), 0, "file is empty");
  return t;
}

double number_at(const fs::path& path, int line, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError(path.string(), line, fmt::format("'{}' is not a number", text));
}

// ---- commands ---------------------------------------------------------------

struct EstimateFlags {
  std::string kind = "both";
  std::string scenario = "auto";
  bool no_interpolate = false;
};

int cmd_estimate(const CommonFlags& f, const EstimateFlags& e, std::ostream& out,
                 std::ostream& err) {
  const auto s = resolve_settings(f, err);
  const auto ref = load_reference(s);
  const auto fleets = load_fleets(s, err);
  const bool pub = want_public(e.scenario, fleets);
  const auto opts = estimate_options(s);

  EstimateReport report;
  for (const auto& r : fleets.baseline.records) report.systems.push_back({r.rank, r.name});
  for (CarbonKind k : kinds_of(e.kind)) {
    KindColumns col;
    col.kind = k;
    col.baseline = estimate_fleet(fleets.baseline, k, ref.factors, ref.catalog, opts);
    if (pub) {
      col.with_public = estimate_fleet(*fleets.with_public, k, ref.factors, ref.catalog, opts);
      if (!e.no_interpolate) col.interpolated = interpolate_missing(*col.with_public);
    }
    report.kinds.push_back(std::move(col));
  }

  std::size_t flagged = 0;
  for (std::size_t i = 0; i < report.systems.size(); ++i) {
    for (const auto& k : report.kinds) {
      const auto& last = k.interpolated ? k.interpolated : k.with_public ? k.with_public : k.baseline;
      if (!(*last)[i].warnings.empty()) {
        ++flagged;
        break;
      }
    }
  }
  if (flagged) err << fmt::format("{} systems carry warnings (see the warnings column)\n", flagged);

  const auto format = s.format.value.value_or("csv");
  if (format == "json") emit(f, estimate_json(report, ref.factors), out);
  else if (format == "table") emit(f, estimate_table(report, ref.factors), out);
  else emit(f, estimate_csv(report, delimiter_of(s)), out);
  return kExitOk;
}

struct CoverageFlags {
  std::string kind = "both";
  std::string scenario = "auto";
};

int cmd_coverage(const CommonFlags& f, const CoverageFlags& c, std::ostream& out,
                 std::ostream& err) {
  const auto s = resolve_settings(f, err);
  const auto ref = load_reference(s);
  const auto fleets = load_fleets(s, err);
  const bool pub = want_public(c.scenario, fleets);
  const Fleet& fleet = pub ? *fleets.with_public : fleets.baseline;
  int max_rank = 0;
  for (const auto& r : fleet.records) max_rank = std::max(max_rank, r.rank);
  const auto buckets = default_buckets(max_rank);

  std::vector<CoverageReport> reports;
  for (CarbonKind k : kinds_of(c.kind)) {
    const auto est = estimate_fleet(fleet, k, ref.factors, ref.catalog, estimate_options(s));
    reports.push_back(coverage(est, buckets));
  }
  const char delim = delimiter_of(s);
  const auto format = s.format.value.value_or("table");
  if (format == "json") emit(f, coverage_json(reports), out);
  else if (format == "csv") emit(f, coverage_csv(reports, delim), out);
  else emit(f, coverage_table(reports), out);
  write_series(f.series, coverage_csv(reports, delim));
  return kExitOk;
}

int cmd_summary(const CommonFlags& f, bool no_interpolate, std::ostream& out, std::ostream& err) {
  const auto s = resolve_settings(f, err);
  const auto ref = load_reference(s);
  const auto fleets = load_fleets(s, err);
  const auto opts = estimate_options(s);

  Summary sum;
  sum.baseline = completeness_summary(fleets.baseline.records);
  if (fleets.with_public) sum.with_public = completeness_summary(fleets.with_public->records);
  for (CarbonKind k : kinds_of("both")) {
    auto base = estimate_fleet(fleets.baseline, k, ref.factors, ref.catalog, opts);
    sum.totals.push_back({k, Scenario::Baseline, false, aggregate(base, ref.factors)});
    if (fleets.with_public) {
      auto pub = estimate_fleet(*fleets.with_public, k, ref.factors, ref.catalog, opts);
      sum.totals.push_back({k, Scenario::BaselinePlusPublic, false, aggregate(pub, ref.factors)});
      if (!no_interpolate) {
        sum.totals.push_back({k, Scenario::BaselinePlusPublic, true,
                              aggregate(interpolate_missing(pub), ref.factors)});
      }
    }
  }
  const auto format = s.format.value.value_or("table");
  if (format == "json") emit(f, summary_json(sum), out);
  else if (format == "csv") emit(f, summary_csv(sum, delimiter_of(s)), out);
  else emit(f, summary_table(sum), out);
  return kExitOk;
}

int cmd_delta(const CommonFlags& f, const std::string& kind, std::ostream& out,
              std::ostream& err) {
  const auto s = resolve_settings(f, err);
  const auto ref = load_reference(s);
  if (!s.fleet.value) throw ConfigError("", 0, "no fleet file: pass --fleet");
  const char delim = delimiter_of(s);
  const Fleet a = load_fleet(*s.fleet.value, delim, err);
  Fleet b = s.fleet_b.value ? load_fleet(*s.fleet_b.value, delim, err) : a;
  if (s.overlay.value) b = overlay_onto(b, *s.overlay.value, err);

  std::vector<ScenarioDelta> deltas;
  for (CarbonKind k : kinds_of(kind)) {
    const auto ea = estimate_fleet(a, k, ref.factors, ref.catalog, estimate_options(s));
    const auto eb = estimate_fleet(b, k, ref.factors, ref.catalog, estimate_options(s));
    try {
      deltas.push_back(scenario_delta(ea, eb));
    } catch (const RankMismatch& m) {
      throw InputError(s.fleet_b.value ? s.fleet_b.value->string() : "", 0, m.what());
    }
  }
  const auto format = s.format.value.value_or("table");
  if (format == "json") emit(f, delta_json(deltas), out);
  else if (format == "csv") emit(f, delta_csv(deltas, delim), out);
  else emit(f, delta_table(deltas), out);
  write_series(f.series, delta_csv(deltas, delim));
  return kExitOk;
}

struct ProjectFlags {
  double base = 0.0;
  double rate = 0.0;
  int from = 2024;
  int to = 2030;
  bool include_base = false;
  std::string history;
  std::string history_kind = "operational";
  bool fit = false;
  std::string perf_carbon;
  double doubling_years = 1.5;
  std::map<std::string, CLI::Option*> opts;
};

int cmd_project(const CommonFlags& f, const ProjectFlags& p, std::ostream& out,
                std::ostream& err) {
  Settings s;
  std::optional<ConfigFile> config;
  if (f.given("config")) config = load_config(f.config);
  s = resolve({}, config);
  if (f.given("format")) s.format.offer(f.format, Source::Flag);
  if (f.verbose) print_settings(s, err);
  const char delim = ',';
  const auto format = s.format.value.value_or("table");

  if (!p.perf_carbon.empty()) {
    const fs::path path = p.perf_carbon;
    const auto t = read_table(path, delim);
    const auto cy = t.column(path.string(), "year");
    const auto cp = t.column(path.string(), "rmax_pflops");
    const auto cc = t.column(path.string(), "operational_kmt");
    std::vector<YearValue> perf, carbon;
    for (const auto& [line, cells] : t.rows) {
      const int year = static_cast<int>(number_at(path, line, cells[cy]));
      perf.push_back({year, number_at(path, line, cells[cp])});
      carbon.push_back({year, number_at(path, line, cells[cc])});
    }
    PerfPerCarbon trend;
    try {
      trend = perf_per_carbon(perf, carbon, p.doubling_years);
    } catch (const std::invalid_argument& e) {
      throw InputError(path.string(), 0, e.what());
    }
    if (format == "json") emit(f, trend_json(trend), out);
    else if (format == "csv") emit(f, trend_csv(trend, delim), out);
    else emit(f, trend_table(trend), out);
    write_series(f.series, trend_csv(trend, delim));
    return kExitOk;
  }

  const bool has_rate = p.opts.at("rate")->count() > 0;
  if (has_rate == !p.history.empty()) {
    throw ConfigError("", 0, "give exactly one of --rate or --history");
  }
  if (p.opts.at("base")->count() == 0) throw ConfigError("", 0, "--base is required");

  Projection proj;
  if (has_rate) {
    proj.annual_rate = p.rate;
    proj.rate_source = "flag";
  } else {
    const fs::path path = p.history;
    const auto t = read_table(path, delim);
    const auto cc = t.column(path.string(), "cycle");
    const auto co = t.column(path.string(), "operational_mt");
    const auto ce = t.column(path.string(), "embodied_mt");
    std::vector<ListCycle> cycles;
    for (const auto& [line, cells] : t.rows) {
      cycles.push_back({static_cast<int>(number_at(path, line, cells[cc])),
                        number_at(path, line, cells[co]), number_at(path, line, cells[ce])});
    }
    GrowthRates rates;
    try {
      rates = p.fit ? fit_rates(cycles) : derive_rates(cycles);
    } catch (const std::invalid_argument& e) {
      throw InputError(path.string(), 0, e.what());
    }
    proj.annual_rate = p.history_kind == "embodied" ? rates.embodied : rates.operational;
    proj.rate_source = p.fit ? "fitted" : "derived";
  }
  try {
    proj.series = project({p.from, p.base, proj.annual_rate, p.to - p.from});
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", 0, e.what());
  }
  if (!p.include_base) proj.series.erase(proj.series.begin());

  if (format == "json") emit(f, projection_json(proj), out);
  else if (format == "csv") emit(f, projection_csv(proj, delim), out);
  else emit(f, projection_table(proj), out);
  write_series(f.series, projection_csv(proj, delim));
  return kExitOk;
}

int cmd_validate(const CommonFlags& f, std::ostream& out, std::ostream& err) {
  const auto s = resolve_settings(f, err);
  const auto ref = load_reference(s);
  out << fmt::format("ok  factors  {}\n", s.factors.value->string());
  out << fmt::format("ok  catalog  {} devices\n", ref.catalog.devices().size());
  if (s.fleet.value) {
    const auto fleets = load_fleets(s, err);
    out << fmt::format("ok  fleet    {} ({} systems)\n", s.fleet.value->string(),
                       fleets.baseline.records.size());
    if (fleets.with_public) {
      out << fmt::format("ok  overlay  {}\n", s.overlay.value->string());
    }
  } else if (s.overlay.value) {
    const auto patches = load_overlay(*s.overlay.value);
    out << fmt::format("ok  overlay  {} ({} patches)\n", s.overlay.value->string(),
                       patches.size());
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operational and embodied carbon estimates for HPC system fleets", "fleetcarbon"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fleetcarbon 0.1.0");

  CommonFlags est_c, cov_c, sum_c, delta_c, proj_c, val_c;
  EstimateFlags est;
  CoverageFlags cov;
  ProjectFlags proj;
  std::string delta_kind = "both";
  bool summary_no_interp = false;
  std::function<int()> action;

  auto* estimate = app.add_subcommand("estimate", "per-system carbon report");
  add_common(estimate, est_c, true);
  estimate->add_option("--kind", est.kind, "operational, embodied or both")
      ->check(CLI::IsMember({"operational", "embodied", "both"}));
  estimate->add_option("--scenario", est.scenario, "baseline or overlay (default: overlay if given)")
      ->check(CLI::IsMember({"baseline", "overlay", "auto"}));
  estimate->add_flag("--no-interpolate", est.no_interpolate, "leave gaps unfilled");
  estimate->callback([&] { action = [&] { return cmd_estimate(est_c, est, out, err); }; });

  auto* cov_cmd = app.add_subcommand("coverage", "estimable systems per rank bucket");
  add_common(cov_cmd, cov_c, true);
  cov_cmd->add_option("--kind", cov.kind, "operational, embodied or both")->check(CLI::IsMember({"operational", "embodied", "both"}));
  cov_cmd->add_option("--scenario", cov.scenario, "baseline or overlay (default: overlay if given)")
      ->check(CLI::IsMember({"baseline", "overlay", "auto"}));
  cov_cmd->add_option("--series", cov_c.series, "write plot-ready bucket series (CSV)");
  cov_cmd->callback([&] { action = [&] { return cmd_coverage(cov_c, cov, out, err); }; });

  auto* summary = app.add_subcommand("summary", "data completeness and fleet totals");
  add_common(summary, sum_c, true);
  summary->add_flag("--no-interpolate", summary_no_interp, "omit interpolated totals");
  summary->callback(
      [&] { action = [&] { return cmd_summary(sum_c, summary_no_interp, out, err); }; });

  auto* delta = app.add_subcommand("delta", "per-system change between two scenarios");
  add_common(delta, delta_c, true);
  delta_c.opts["fleet-b"] =
      delta->add_option("--fleet-b", delta_c.fleet_b, "second fleet (default: --fleet)");
  delta->add_option("--kind", delta_kind, "operational, embodied or both")->check(CLI::IsMember({"operational", "embodied", "both"}));
  delta->add_option("--series", delta_c.series, "write plot-ready per-system deltas (CSV)");
  delta->callback([&] { action = [&] { return cmd_delta(delta_c, delta_kind, out, err); }; });

  auto* project_cmd = app.add_subcommand("project", "compound-growth projection");
  proj_c.opts["config"] = project_cmd->add_option("--config", proj_c.config, "YAML file with default settings");
  proj_c.opts["format"] = project_cmd->add_option("--format", proj_c.format, "table, csv or json")
                              ->check(CLI::IsMember({"table", "csv", "json"}));
  proj_c.opts["output"] = project_cmd->add_option("-o,--output", proj_c.output, "write the report here");
  project_cmd->add_flag("-v,--verbose", proj_c.verbose, "print the effective configuration");
  proj.opts["base"] = project_cmd->add_option("--base", proj.base, "MT CO2e in the base year");
  proj.opts["rate"] = project_cmd->add_option("--rate", proj.rate, "annual growth, e.g. 0.103");
  project_cmd->add_option("--from", proj.from, "base year");
  project_cmd->add_option("--to", proj.to, "last projected year");
  project_cmd->add_flag("--include-base", proj.include_base, "also emit the base-year row");
  project_cmd->add_option("--history", proj.history, "list-cycle totals to derive the rate from");
  project_cmd->add_option("--history-kind", proj.history_kind, "which history column sets the rate (default operational)")
      ->check(CLI::IsMember({"operational", "embodied"}));
  project_cmd->add_flag("--fit", proj.fit, "least-squares rate instead of endpoint rate");
  project_cmd->add_option("--perf-carbon", proj.perf_carbon,
                          "performance and carbon series; prints the per-carbon trend");
  project_cmd->add_option("--doubling-years", proj.doubling_years, "doubling period of the reference line (default 1.5)")->check(CLI::PositiveNumber);
  project_cmd->add_option("--series", proj_c.series, "write plot-ready series (CSV)");
  project_cmd->callback([&] { action = [&] { return cmd_project(proj_c, proj, out, err); }; });

  auto* validate = app.add_subcommand("validate", "check factor, catalog, fleet and overlay files");
  add_common(validate, val_c, true);
  validate->callback([&] { action = [&] { return cmd_validate(val_c, out, err); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    return action();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ProxyUnconfigured& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace fleetcarbon::cli
