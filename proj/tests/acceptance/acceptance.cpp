// Acceptance run over the reference fixture. One PASS/FAIL line per
// criterion; exit status is the number of failures (capped at 1).

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "fleetcarbon/fleet.hpp"
#include "fleetcarbon/ingest.hpp"
#include "fleetcarbon/operational.hpp"
#include "fleetcarbon/projection.hpp"
#include "properties.hpp"

namespace fc = fleetcarbon;
namespace ft = fleetcarbon::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;  // 0 = untimed
  std::function<Outcome()> body;
};

class Checker {
 public:
  void near(const std::string& what, double got, double want, double tol) {
    const bool ok = std::abs(got - want) <= tol;
    add(ok, fmt::format("{} {:.6g} (want {:.6g} +/- {:.3g})", what, got, want, tol));
  }
  void within(const std::string& what, double got, double lo, double hi) {
    add(got >= lo && got <= hi, fmt::format("{} {:.6g} in [{}, {}]", what, got, lo, hi));
  }
  void equal(const std::string& what, long long got, long long want) {
    add(got == want, fmt::format("{} {} (want {})", what, got, want));
  }
  void truth(const std::string& what, bool ok) { add(ok, what); }

  Outcome outcome() const { return {pass_, detail_}; }

 private:
  void add(bool ok, const std::string& text) {
    pass_ = pass_ && ok;
    if (!detail_.empty()) detail_ += "; ";
    detail_ += ok ? text : "!! " + text;
  }
  bool pass_ = true;
  std::string detail_;
};

std::vector<fc::Estimate> estimates(const fc::Fleet& f, fc::CarbonKind k) {
  return fc::estimate_fleet(f, k, ft::shipped_factors(), ft::shipped_catalog());
}

double total_mt(const std::vector<fc::Estimate>& e) {
  return fc::aggregate(e, ft::shipped_factors()).total_mt;
}

int estimable(const std::vector<fc::Estimate>& e) {
  return fc::coverage(e, fc::default_buckets(500)).estimable_count;
}

Outcome table_one() {
  Checker c;
  const auto base = fc::parse_fleet(ft::fixture_path("top500_baseline.csv"));
  const auto overlay_path = ft::fixture_path("public_overlay.yaml");
  const auto with_public =
      fc::apply_overlay(base, fc::load_overlay(overlay_path), overlay_path.string());
  const std::vector<int> want_base{0, 209, 209, 0, 499, 500, 500, 500, 500};
  const std::vector<int> want_pub{0, 86, 86, 0, 292, 292, 450, 497, 492};
  auto counts = [](const fc::Fleet& f) {
    std::vector<int> out;
    for (const auto& [field, n] : fc::completeness_summary(f.records)) out.push_back(n);
    return out;
  };
  const auto got_base = counts(base);
  const auto got_pub = counts(with_public);
  c.truth(fmt::format("baseline ({})", fmt::join(got_base, ",")), got_base == want_base);
  c.truth(fmt::format("overlay ({})", fmt::join(got_pub, ",")), got_pub == want_pub);
  return c.outcome();
}

Outcome coverage_counts() {
  Checker c;
  using K = fc::CarbonKind;
  c.equal("baseline operational", estimable(estimates(ft::baseline_fleet(), K::Operational)), 391);
  c.equal("baseline embodied", estimable(estimates(ft::baseline_fleet(), K::Embodied)), 283);
  const auto op = fc::coverage(estimates(ft::overlay_fleet(), K::Operational), fc::default_buckets(500));
  const auto em = fc::coverage(estimates(ft::overlay_fleet(), K::Embodied), fc::default_buckets(500));
  c.equal("overlay operational", op.estimable_count, 490);
  c.truth(fmt::format("operational {:.1f}%", 100 * op.fraction()),
          fmt::format("{:.1f}", 100 * op.fraction()) == "98.0");
  c.equal("overlay embodied", em.estimable_count, 404);
  c.truth(fmt::format("embodied {:.1f}%", 100 * em.fraction()),
          fmt::format("{:.1f}", 100 * em.fraction()) == "80.8");
  return c.outcome();
}

Outcome interpolation_uplift() {
  Checker c;
  using K = fc::CarbonKind;
  struct Want {
    K kind;
    const char* name;
    int gaps;
    double uplift_pct, tol_pp, landing;
  };
  for (const auto& w : {Want{K::Operational, "operational", 10, 1.74, 0.1, 1.39e6},
                        Want{K::Embodied, "embodied", 96, 23.18, 0.5, 1.88e6}}) {
    const auto before = estimates(ft::overlay_fleet(), w.kind);
    const auto after = fc::interpolate_missing(before);
    const double t0 = total_mt(before);
    const double t1 = total_mt(after);
    c.equal(fmt::format("{} gaps", w.name), 500 - estimable(before), w.gaps);
    c.near(fmt::format("{} uplift %", w.name), 100 * (t1 - t0) / t0, w.uplift_pct, w.tol_pp);
    c.near(fmt::format("{} total MT", w.name), t1, w.landing, 0.01 * w.landing);
  }
  return c.outcome();
}

Outcome scenario_delta() {
  Checker c;
  using K = fc::CarbonKind;
  const auto op = fc::scenario_delta(estimates(ft::baseline_fleet(), K::Operational),
                                     estimates(ft::overlay_fleet(), K::Operational));
  c.near("operational change %", op.percent.value_or(NAN), 2.85, 0.1);
  c.truth(fmt::format("operational change {:.0f} MT", op.total_delta_mt), true);
  const auto em = fc::scenario_delta(estimates(ft::baseline_fleet(), K::Embodied),
                                     estimates(ft::overlay_fleet(), K::Embodied));
  c.near("embodied change MT", em.total_delta_mt, 670e3, 0.02 * 670e3);
  c.truth(fmt::format("embodied change {:.1f}%", em.percent.value_or(NAN)), true);
  return c.outcome();
}

Outcome projection() {
  Checker c;
  const auto op = fc::project({2024, 1.0, 0.103, 6});
  const auto em = fc::project({2024, 1.0, 0.02, 6});
  c.within("1.103^6", op.back().value, 1.79, 1.81);
  c.within("1.02^6", em.back().value, 1.12, 1.13);

  std::vector<fc::ListCycle> history;
  for (int k = 0; k < 5; ++k) {
    history.push_back({k, 1.0e6 * std::pow(1.05, k), 1.5e6 * std::pow(1.01, k)});
  }
  const auto rates = fc::derive_rates(history);
  // The bound is inclusive; 1e-12 absorbs binary rounding of 1.05^2 - 1.
  c.near("derived operational rate", rates.operational, 0.103, 0.0005 + 1e-12);
  c.near("derived embodied rate", rates.embodied, 0.02, 0.0005);
  return c.outcome();
}

Outcome equivalence() {
  Checker c;
  const auto& t = ft::shipped_factors();
  const auto a = fc::equivalences(1.39e6, t);
  const auto b = fc::equivalences(1.88e6, t);
  c.near("1.39M vehicles", a.vehicles, 325e3, 0.01 * 325e3);
  c.near("1.39M miles", a.miles, 3.5e9, 0.02 * 3.5e9);
  c.near("1.88M vehicles", b.vehicles, 439e3, 0.01 * 439e3);
  c.near("1.88M miles", b.miles, 4.8e9, 0.02 * 4.8e9);
  return c.outcome();
}

Outcome oracle() {
  const auto r = ft::check_interpolation_oracle(20241118, 1000, 50);
  return {r.ok, r.ok ? fmt::format("{} fleets of 50 match exactly", r.cases) : r.failure};
}

Outcome invariants() {
  Checker c;
  for (const auto& r : ft::invariant_suite(7)) {
    c.truth(r.ok ? fmt::format("{} ({} cases)", r.name, r.cases)
                 : fmt::format("{}: {}", r.name, r.failure),
            r.ok);
  }
  return c.outcome();
}

Outcome hand_oracle() {
  Checker c;
  auto factors = ft::test_factors();
  factors.pue = 1.2;
  auto r = ft::minimal_record();
  r.region = "Testland";  // 400 g/kWh
  r.reported_power_kw = 1000.0;
  r.utilization = 0.8;
  fc::stamp_provenance(r, fc::Provenance::Top500Org);
  const auto e = fc::operational_carbon(r, factors, ft::test_catalog(), fc::Scenario::Baseline);
  c.truth(fmt::format("method {}", fc::to_string(e.method)), e.method == fc::Method::ReportedPower);
  const double mt = e.value_mt();
  c.truth(fmt::format("{:.2f} MT", mt), fmt::format("{:.2f}", mt) == "3363.84");
  c.near("MT", mt, 3363.84, 1e-9);
  return c.outcome();
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "completeness summary matches both table columns", 1.0, table_one},
      {2, "coverage counts", 0, coverage_counts},
      {3, "interpolation uplift", 0, interpolation_uplift},
      {4, "scenario delta", 0, scenario_delta},
      {5, "projection and rate derivation", 0, projection},
      {6, "vehicle and mile equivalences", 0, equivalence},
      {7, "interpolation matches brute-force oracle", 10.0, oracle},
      {8, "invariant suite", 60.0, invariants},
      {9, "hand-computed operational example", 0, hand_oracle},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt::format("{:.3f}s", secs);
    if (c.budget_s > 0) {
      const bool in_time = secs < c.budget_s;
      timing += fmt::format(" (limit {:.0f}s{})", c.budget_s, in_time ? "" : ", EXCEEDED");
      o.pass = o.pass && in_time;
    }
    if (!o.pass) ++failures;
    std::cout << fmt::format("[{}] {}. {}: {} [{}]\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                             o.detail, timing);
  }
  std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures ? 1 : 0;
}
