#include "fleetcarbon/fleet.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <thread>

#include "fleetcarbon/embodied.hpp"

namespace fleetcarbon {

bool devices_resolvable(const SystemRecord& r, const DeviceCatalog& catalog,
                        const CarbonFactorTable& factors) {
  return resolve_devices(r, catalog, factors).complete(r);
}

std::vector<Estimate> estimate_fleet(const Fleet& fleet, CarbonKind kind,
                                     const CarbonFactorTable& factors,
                                     const DeviceCatalog& catalog,
                                     const EstimateOptions& options) {
  const auto& recs = fleet.records;
  std::vector<Estimate> out(recs.size());
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = kind == CarbonKind::Operational
                   ? operational_carbon(recs[i], factors, catalog, fleet.scenario,
                                        options.operational)
                   : embodied_carbon(recs[i], factors, catalog, fleet.scenario);
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(recs.size())));
  if (threads <= 1) {
    run(0, recs.size());
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (recs.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < recs.size(); begin += chunk) {
      pool.emplace_back(run, begin, std::min(recs.size(), begin + chunk));
    }
  }  // joined
  return out;
}

std::vector<RankBucket> default_buckets(int fleet_size) {
  std::vector<RankBucket> out;
  int first = 1;
  for (int last : {25, 50, 75, 100}) {
    if (first > fleet_size) return out;
    out.push_back({first, std::min(last, fleet_size)});
    first = last + 1;
  }
  for (; first <= fleet_size; first += 50) {
    out.push_back({first, std::min(first + 49, fleet_size)});
  }
  return out;
}

CoverageReport coverage(std::span<const Estimate> estimates,
                        std::span<const RankBucket> buckets) {
  std::vector<RankBucket> sorted(buckets.begin(), buckets.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].first > sorted[i].last) {
      throw BucketError(fmt::format("bucket {}-{} is empty", sorted[i].first, sorted[i].last));
    }
    if (i && sorted[i].first <= sorted[i - 1].last) {
      throw OverlappingBuckets(fmt::format("buckets {}-{} and {}-{} overlap",
                                           sorted[i - 1].first, sorted[i - 1].last,
                                           sorted[i].first, sorted[i].last));
    }
  }

  CoverageReport rep;
  if (!estimates.empty()) {
    rep.scenario = estimates.front().scenario;
    rep.kind = estimates.front().kind;
  }
  for (const auto& b : buckets) rep.per_bucket.push_back({b, 0, 0});

  for (const auto& e : estimates) {
    auto it = std::find_if(rep.per_bucket.begin(), rep.per_bucket.end(), [&](const auto& bc) {
      return e.rank >= bc.bucket.first && e.rank <= bc.bucket.last;
    });
    if (it == rep.per_bucket.end()) {
      throw BucketError(fmt::format("rank {} falls in no bucket", e.rank));
    }
    ++it->total;
    ++rep.total_count;
    if (e.estimable()) {
      ++it->estimable;
      ++rep.estimable_count;
    }
  }
  return rep;
}

std::vector<std::size_t> select_peers(std::span<const Estimate> estimates,
                                      std::size_t gap_index, int peer_count) {
  std::vector<std::size_t> peers;
  const long rank = estimates[gap_index].rank;
  // Signed cursors walking outward; each points at the next candidate slot.
  long lo = static_cast<long>(gap_index) - 1;
  long hi = static_cast<long>(gap_index) + 1;
  const long n = static_cast<long>(estimates.size());
  auto skip_down = [&] {
    while (lo >= 0 && !estimates[lo].estimable()) --lo;
  };
  auto skip_up = [&] {
    while (hi < n && !estimates[hi].estimable()) ++hi;
  };
  skip_down();
  skip_up();
  while (static_cast<int>(peers.size()) < peer_count && (lo >= 0 || hi < n)) {
    bool take_low;
    if (lo < 0) {
      take_low = false;
    } else if (hi >= n) {
      take_low = true;
    } else {
      take_low = rank - estimates[lo].rank <= estimates[hi].rank - rank;
    }
    if (take_low) {
      peers.push_back(static_cast<std::size_t>(lo--));
      skip_down();
    } else {
      peers.push_back(static_cast<std::size_t>(hi++));
      skip_up();
    }
  }
  std::sort(peers.begin(), peers.end());
  return peers;
}

std::vector<Estimate> interpolate_missing(std::span<const Estimate> estimates,
                                          int peer_count) {
  const auto estimable = std::count_if(estimates.begin(), estimates.end(),
                                       [](const auto& e) { return e.estimable(); });
  if (estimable < peer_count) {
    throw InsufficientPeers(fmt::format(
        "interpolation needs {} estimable systems, fleet has {}", peer_count, estimable));
  }
  for (std::size_t i = 1; i < estimates.size(); ++i) {
    if (estimates[i - 1].rank >= estimates[i].rank) {
      throw std::invalid_argument("estimates must be strictly rank-ordered");
    }
  }

  std::vector<Estimate> out(estimates.begin(), estimates.end());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (estimates[i].estimable()) continue;
    const auto peers = select_peers(estimates, i, peer_count);
    double sum = 0.0;
    std::string ranks;
    for (auto p : peers) {
      sum += *estimates[p].value_kg;
      if (!ranks.empty()) ranks += ' ';
      ranks += std::to_string(estimates[p].rank);
    }
    auto& e = out[i];
    e.method = Method::Interpolated;
    e.value_kg = sum / static_cast<double>(peers.size());
    e.breakdown.reset();
    e.warnings = {"interpolated from ranks " + ranks};
  }
  return out;
}

Equivalences equivalences(double total_mt, const CarbonFactorTable& factors) {
  return {total_mt / (factors.vehicle_kg_per_year / kKgPerMetricTon),
          total_mt * 1e6 / factors.grams_per_mile};
}

FleetAssessment aggregate(std::span<const Estimate> estimates,
                          const CarbonFactorTable& factors) {
  std::vector<const Estimate*> ordered;
  ordered.reserve(estimates.size());
  for (const auto& e : estimates) ordered.push_back(&e);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return a->rank < b->rank; });

  FleetAssessment a;
  if (!estimates.empty()) {
    a.scenario = estimates.front().scenario;
    a.kind = estimates.front().kind;
  }
  a.total_count = static_cast<int>(estimates.size());
  double total_kg = 0.0;
  for (const auto* e : ordered) {
    ++a.counts_by_method[e->method];
    if (!e->value_kg) continue;
    total_kg += *e->value_kg;
    ++a.estimated_count;
  }
  a.total_mt = kg_to_mt(total_kg);
  a.average_mt = a.estimated_count ? a.total_mt / a.estimated_count : 0.0;
  a.equivalence = equivalences(a.total_mt, factors);
  return a;
}

ScenarioDelta scenario_delta(std::span<const Estimate> a, std::span<const Estimate> b) {
  auto index = [](std::span<const Estimate> list, const char* side) {
    std::map<int, const Estimate*> m;
    for (const auto& e : list) {
      if (!m.emplace(e.rank, &e).second) {
        throw RankMismatch(fmt::format("rank {} repeated in scenario {}", e.rank, side));
      }
    }
    return m;
  };
  const auto ma = index(a, "a");
  const auto mb = index(b, "b");
  if (ma.size() != mb.size() ||
      !std::equal(ma.begin(), ma.end(), mb.begin(),
                  [](const auto& x, const auto& y) { return x.first == y.first; })) {
    throw RankMismatch("scenarios cover different rank sets");
  }

  ScenarioDelta d;
  if (!a.empty()) {
    d.kind = a.front().kind;
    d.a_scenario = a.front().scenario;
    d.b_scenario = b.front().scenario;
  }
  double total_a = 0.0, total_b = 0.0, total_delta = 0.0;
  for (const auto& [rank, ea] : ma) {
    const auto* eb = mb.at(rank);
    SystemDelta s;
    s.rank = rank;
    s.a_method = ea->method;
    s.b_method = eb->method;
    if (ea->value_kg) s.a_mt = kg_to_mt(*ea->value_kg);
    if (eb->value_kg) s.b_mt = kg_to_mt(*eb->value_kg);
    s.delta_mt = s.b_mt.value_or(0.0) - s.a_mt.value_or(0.0);
    s.newly_estimable = !s.a_mt && s.b_mt;
    s.no_longer_estimable = s.a_mt && !s.b_mt;
    total_a += s.a_mt.value_or(0.0);
    total_b += s.b_mt.value_or(0.0);
    total_delta += s.delta_mt;
    d.systems.push_back(s);
  }
  d.total_a_mt = total_a;
  d.total_b_mt = total_b;
  d.total_delta_mt = total_delta;
  if (total_a != 0.0) d.percent = 100.0 * total_delta / total_a;
  return d;
}

}  // namespace fleetcarbon
