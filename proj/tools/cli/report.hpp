#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fleetcarbon/domain.hpp"
#include "fleetcarbon/fleet.hpp"
#include "fleetcarbon/ingest.hpp"
#include "fleetcarbon/projection.hpp"

namespace fleetcarbon::cli {

enum class Stage { Baseline, Public, Interpolated };
std::string_view stage_key(Stage s);  // baseline, public, interpolated

/// Estimates for one kind, one optional list per stage. A missing list means
/// the stage was not run and its columns stay empty.
struct KindColumns {
  CarbonKind kind = CarbonKind::Operational;
  std::optional<std::vector<Estimate>> baseline;
  std::optional<std::vector<Estimate>> with_public;
  std::optional<std::vector<Estimate>> interpolated;

  const std::optional<std::vector<Estimate>>& stage(Stage s) const;
};

struct SystemLabel {
  int rank = 0;
  std::string name;
};

struct EstimateReport {
  std::vector<SystemLabel> systems;  // rank order
  std::vector<KindColumns> kinds;
};

std::string kind_key(CarbonKind k);  // operational, embodied
std::string format_mt(double mt);    // fixed, 2 decimals

std::string csv_escape(std::string_view cell, char delim);

std::string estimate_csv(const EstimateReport& r, char delim);
std::string estimate_json(const EstimateReport& r, const CarbonFactorTable& factors);
std::string estimate_table(const EstimateReport& r, const CarbonFactorTable& factors);

std::string coverage_table(const std::vector<CoverageReport>& reports);
std::string coverage_csv(const std::vector<CoverageReport>& reports, char delim);
std::string coverage_json(const std::vector<CoverageReport>& reports);
/// "490/500 (98.0%)"
std::string coverage_headline(const CoverageReport& r);

struct SummaryTotals {
  CarbonKind kind;
  Scenario scenario;
  bool interpolated = false;
  FleetAssessment assessment;
};

struct Summary {
  CompletenessSummary baseline;
  std::optional<CompletenessSummary> with_public;
  std::vector<SummaryTotals> totals;
};

std::string summary_table(const Summary& s);
std::string summary_csv(const Summary& s, char delim);
std::string summary_json(const Summary& s);

std::string delta_table(const std::vector<ScenarioDelta>& deltas);
std::string delta_csv(const std::vector<ScenarioDelta>& deltas, char delim);
std::string delta_json(const std::vector<ScenarioDelta>& deltas);

struct Projection {
  std::vector<YearValue> series;
  double annual_rate = 0.0;
  std::string rate_source;  // "flag", "derived", "fitted"
};

std::string projection_table(const Projection& p);
std::string projection_csv(const Projection& p, char delim);
std::string projection_json(const Projection& p);

std::string trend_table(const PerfPerCarbon& t);
std::string trend_csv(const PerfPerCarbon& t, char delim);
std::string trend_json(const PerfPerCarbon& t);

}  // namespace fleetcarbon::cli
