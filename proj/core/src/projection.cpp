#include "fleetcarbon/projection.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace fleetcarbon {

namespace {

void check_history(std::span<const ListCycle> history) {
  if (history.size() < 2) {
    throw InsufficientHistory("rate derivation needs at least two list cycles");
  }
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i].cycle <= history[i - 1].cycle) {
      throw std::invalid_argument("list cycles must be strictly increasing");
    }
  }
  for (const auto& c : history) {
    if (!(c.operational_total > 0) || !(c.embodied_total > 0)) {
      throw std::invalid_argument(
          fmt::format("cycle {} has a non-positive total", c.cycle));
    }
  }
}

// Slope of least-squares line through (x, y).
std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

}  // namespace

std::vector<YearValue> project(const GrowthModel& model) {
  if (!(model.annual_rate > -1.0)) {
    throw std::invalid_argument("annual_rate must exceed -1");
  }
  if (model.horizon_years < 0) {
    throw std::invalid_argument("horizon_years must be non-negative");
  }
  std::vector<YearValue> out;
  out.reserve(static_cast<std::size_t>(model.horizon_years) + 1);
  for (int k = 0; k <= model.horizon_years; ++k) {
    out.push_back({model.base_year + k,
                   model.base_value_mt * std::pow(1.0 + model.annual_rate, k)});
  }
  return out;
}

double annualize(double per_cycle_rate, int cycles_per_year) {
  return std::pow(1.0 + per_cycle_rate, cycles_per_year) - 1.0;
}

GrowthRates derive_rates(std::span<const ListCycle> history, int cycles_per_year) {
  check_history(history);
  const auto& first = history.front();
  const auto& last = history.back();
  const double steps = static_cast<double>(last.cycle - first.cycle);
  auto per_cycle = [&](double a, double b) { return std::pow(b / a, 1.0 / steps) - 1.0; };
  return {annualize(per_cycle(first.operational_total, last.operational_total), cycles_per_year),
          annualize(per_cycle(first.embodied_total, last.embodied_total), cycles_per_year)};
}

GrowthRates fit_rates(std::span<const ListCycle> history, int cycles_per_year) {
  check_history(history);
  std::vector<double> x, lop, lemb;
  for (const auto& c : history) {
    x.push_back(c.cycle);
    lop.push_back(std::log(c.operational_total));
    lemb.push_back(std::log(c.embodied_total));
  }
  auto rate = [&](const std::vector<double>& y) {
    return annualize(std::exp(linear_fit(x, y).first) - 1.0, cycles_per_year);
  };
  return {rate(lop), rate(lemb)};
}

PerfPerCarbon perf_per_carbon(std::span<const YearValue> perf_pflops,
                              std::span<const YearValue> carbon_kmt,
                              double doubling_years) {
  if (perf_pflops.size() != carbon_kmt.size()) {
    throw LengthMismatch(fmt::format("performance series has {} points, carbon has {}",
                                     perf_pflops.size(), carbon_kmt.size()));
  }
  if (perf_pflops.empty()) throw LengthMismatch("series are empty");
  PerfPerCarbon out;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < perf_pflops.size(); ++i) {
    if (perf_pflops[i].year != carbon_kmt[i].year) {
      throw LengthMismatch(fmt::format("series disagree on year at index {}: {} vs {}", i,
                                       perf_pflops[i].year, carbon_kmt[i].year));
    }
    if (!(carbon_kmt[i].value > 0)) {
      throw NonPositiveCarbon(fmt::format("carbon for {} is not positive", carbon_kmt[i].year));
    }
    const double r = perf_pflops[i].value / carbon_kmt[i].value;
    out.ratio.push_back({perf_pflops[i].year, r});
    x.push_back(perf_pflops[i].year - perf_pflops.front().year);
    y.push_back(r);
  }
  const auto [slope, intercept] = linear_fit(x, y);
  out.slope_per_year = slope;
  out.intercept = intercept;
  const double r0 = out.ratio.front().value;
  const int y0 = out.ratio.front().year;
  for (const auto& p : out.ratio) {
    out.doubling.push_back({p.year, r0 * std::exp2((p.year - y0) / doubling_years)});
  }
  return out;
}

}  // namespace fleetcarbon
