#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fleetcarbon/catalog.hpp"
#include "fleetcarbon/domain.hpp"
#include "fleetcarbon/ingest.hpp"
#include "fleetcarbon/operational.hpp"

namespace fleetcarbon {

struct EstimateOptions {
  unsigned threads = 1;  // 0 = hardware concurrency
  OperationalOptions operational;
};

/// Per-record estimates for one kind, in the fleet's rank order. Records are
/// evaluated on a worker pool; the result does not depend on thread count.
std::vector<Estimate> estimate_fleet(const Fleet& fleet, CarbonKind kind,
                                     const CarbonFactorTable& factors,
                                     const DeviceCatalog& catalog,
                                     const EstimateOptions& options = {});

/// True when every device the record needs resolves (catalog or proxy).
bool devices_resolvable(const SystemRecord& r, const DeviceCatalog& catalog,
                        const CarbonFactorTable& factors);

// ---- coverage -------------------------------------------------------------

struct RankBucket {
  int first = 1;
  int last = 1;  // inclusive
  friend bool operator==(const RankBucket&, const RankBucket&) = default;
};

class BucketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class OverlappingBuckets : public BucketError {
 public:
  using BucketError::BucketError;
};

/// 1-25, 26-50, 51-75, 76-100, then steps of 50 up to `fleet_size`.
std::vector<RankBucket> default_buckets(int fleet_size = 500);

struct BucketCoverage {
  RankBucket bucket;
  int estimable = 0;
  int total = 0;
};

struct CoverageReport {
  Scenario scenario = Scenario::Baseline;
  CarbonKind kind = CarbonKind::Operational;
  int estimable_count = 0;
  int total_count = 0;
  std::vector<BucketCoverage> per_bucket;

  double fraction() const {
    return total_count ? static_cast<double>(estimable_count) / total_count : 0.0;
  }
};

/// Counts estimable systems per bucket. Throws OverlappingBuckets, or
/// BucketError when a rank falls in no bucket.
CoverageReport coverage(std::span<const Estimate> estimates,
                        std::span<const RankBucket> buckets);

// ---- interpolation --------------------------------------------------------

class InsufficientPeers : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kInterpolationPeers = 10;

/// Indices (into the rank-ordered estimate list) of the peers used to fill
/// the gap at `gap_index`: the `peer_count` estimable systems closest in rank,
/// ties going to the lower rank. With enough estimable systems this is five
/// on each side, reaching further out past gaps and list ends.
std::vector<std::size_t> select_peers(std::span<const Estimate> estimates,
                                      std::size_t gap_index,
                                      int peer_count = kInterpolationPeers);

/// Fills every NotEstimable entry with the mean of its peers. Existing
/// estimates are returned unchanged. Throws InsufficientPeers when fewer than
/// `peer_count` systems are estimable. Input must be sorted by rank.
std::vector<Estimate> interpolate_missing(std::span<const Estimate> estimates,
                                          int peer_count = kInterpolationPeers);

// ---- aggregation ----------------------------------------------------------

struct Equivalences {
  double vehicles = 0.0;  // passenger vehicles driven for one year
  double miles = 0.0;     // vehicle miles
};

Equivalences equivalences(double total_mt, const CarbonFactorTable& factors);

struct FleetAssessment {
  Scenario scenario = Scenario::Baseline;
  CarbonKind kind = CarbonKind::Operational;
  double total_mt = 0.0;
  double average_mt = 0.0;
  int estimated_count = 0;
  int total_count = 0;
  std::map<Method, int> counts_by_method;
  Equivalences equivalence;
};

/// Totals and averages over systems that carry a value. Summation runs in
/// rank order so the result is independent of input order.
FleetAssessment aggregate(std::span<const Estimate> estimates,
                          const CarbonFactorTable& factors);

// ---- scenario sensitivity -------------------------------------------------

class RankMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SystemDelta {
  int rank = 0;
  std::optional<double> a_mt;
  std::optional<double> b_mt;
  Method a_method = Method::NotEstimable;
  Method b_method = Method::NotEstimable;
  double delta_mt = 0.0;  // b - a, a missing side counts as 0
  bool newly_estimable = false;
  bool no_longer_estimable = false;
};

struct ScenarioDelta {
  CarbonKind kind = CarbonKind::Operational;
  Scenario a_scenario = Scenario::Baseline;
  Scenario b_scenario = Scenario::BaselinePlusPublic;
  std::vector<SystemDelta> systems;
  double total_a_mt = 0.0;
  double total_b_mt = 0.0;
  double total_delta_mt = 0.0;
  std::optional<double> percent;  // relative to total_a; empty when a is 0
};

/// Per-system and total change from scenario `a` to `b`. Both lists must
/// cover the same ranks (any order); throws RankMismatch otherwise.
ScenarioDelta scenario_delta(std::span<const Estimate> a, std::span<const Estimate> b);

}  // namespace fleetcarbon
