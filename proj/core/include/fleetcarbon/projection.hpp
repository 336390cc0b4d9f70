#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace fleetcarbon {

/// Compound growth from a base year.
struct GrowthModel {
  int base_year = 2024;
  double base_value_mt = 0.0;
  double annual_rate = 0.0;  // fraction, e.g. 0.103
  int horizon_years = 0;
};

struct YearValue {
  int year = 0;
  double value = 0.0;
};

/// value(year) = base * (1 + rate)^(year - base_year) for every year from
/// base_year through base_year + horizon_years. Throws std::invalid_argument
/// when rate <= -1 or horizon < 0.
std::vector<YearValue> project(const GrowthModel& model);

/// One list release with the fleet totals measured on it.
struct ListCycle {
  int cycle = 0;
  double operational_total = 0.0;
  double embodied_total = 0.0;
};

struct GrowthRates {
  double operational = 0.0;  // annual fraction
  double embodied = 0.0;
};

class InsufficientHistory : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two list releases a year (June and November).
inline constexpr int kListCyclesPerYear = 2;

/// Per-cycle geometric-mean growth between the first and last cycle,
/// annualized as (1 + per_cycle)^cycles_per_year - 1. Needs >= 2 cycles.
GrowthRates derive_rates(std::span<const ListCycle> history,
                         int cycles_per_year = kListCyclesPerYear);

/// Alternative route: least-squares slope of log(total) against cycle index,
/// annualized the same way. Agrees with derive_rates on exact geometric
/// histories.
GrowthRates fit_rates(std::span<const ListCycle> history,
                      int cycles_per_year = kListCyclesPerYear);

/// Per-cycle growth annualized.
double annualize(double per_cycle_rate, int cycles_per_year = kListCyclesPerYear);

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NonPositiveCarbon : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PerfPerCarbon {
  std::vector<YearValue> ratio;     // PFlop/s per thousand MT CO2e
  double slope_per_year = 0.0;      // least-squares linear slope of ratio
  double intercept = 0.0;           // fitted ratio at the first year
  std::vector<YearValue> doubling;  // 2x every `doubling_years` from ratio[0]
};

/// Performance-per-carbon trend with a reference line that doubles every
/// 18 months (the historical performance-per-power cadence).
PerfPerCarbon perf_per_carbon(std::span<const YearValue> perf_pflops,
                              std::span<const YearValue> carbon_kmt,
                              double doubling_years = 1.5);

}  // namespace fleetcarbon
