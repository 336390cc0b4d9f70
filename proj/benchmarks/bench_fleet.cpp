#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fleetcarbon/catalog.hpp"
#include "fleetcarbon/fleet.hpp"
#include "fleetcarbon/ingest.hpp"

namespace fc = fleetcarbon;

namespace {

const std::filesystem::path kData = FLEETCARBON_BENCH_DATA_DIR;

struct Shared {
  fc::CarbonFactorTable factors = fc::load_factors(kData / "factors.yaml");
  fc::DeviceCatalog catalog = fc::load_catalog(kData / "catalog.yaml");
  fc::Fleet fleet = [] {
    const auto base = fc::parse_fleet(kData / "fixture/top500_baseline.csv");
    const auto path = kData / "fixture/public_overlay.yaml";
    return fc::apply_overlay(base, fc::load_overlay(path), path.string());
  }();
};

const Shared& shared() {
  static const Shared s;
  return s;
}

void BM_ParseFleet(benchmark::State& state) {
  std::ifstream in(kData / "fixture/top500_baseline.csv");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  for (auto _ : state) {
    std::istringstream s(text);
    benchmark::DoNotOptimize(fc::parse_fleet(s));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) * text.size());
}
BENCHMARK(BM_ParseFleet);

void BM_EstimateFleet(benchmark::State& state) {
  const auto& s = shared();
  const auto kind = state.range(1) ? fc::CarbonKind::Embodied : fc::CarbonKind::Operational;
  fc::EstimateOptions opts;
  opts.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fc::estimate_fleet(s.fleet, kind, s.factors, s.catalog, opts));
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * s.fleet.records.size());
}
BENCHMARK(BM_EstimateFleet)->ArgsProduct({{1, 2, 4}, {0, 1}})->UseRealTime();

void BM_Interpolate(benchmark::State& state) {
  const auto& s = shared();
  const auto est = fc::estimate_fleet(s.fleet, fc::CarbonKind::Embodied, s.factors, s.catalog);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fc::interpolate_missing(est));
  }
}
BENCHMARK(BM_Interpolate);

void BM_Aggregate(benchmark::State& state) {
  const auto& s = shared();
  const auto est = fc::estimate_fleet(s.fleet, fc::CarbonKind::Operational, s.factors, s.catalog);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fc::aggregate(est, s.factors));
  }
}
BENCHMARK(BM_Aggregate);

}  // namespace

BENCHMARK_MAIN();
