#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "fleetcarbon/embodied.hpp"
#include "generators.hpp"

namespace fleetcarbon {
namespace {

using testing::minimal_record;
using testing::test_catalog;
using testing::test_factors;

Estimate emb(const SystemRecord& r, const CarbonFactorTable& t = test_factors(),
             const DeviceCatalog& c = test_catalog()) {
  return embodied_carbon(r, t, c, Scenario::Baseline);
}

SystemRecord configured(std::int64_t nodes = 10, std::int64_t cpus = 20) {
  auto r = minimal_record();
  r.num_nodes = nodes;
  r.num_cpus = cpus;
  stamp_provenance(r, Provenance::Top500Org);
  return r;
}

TEST(Embodied, SingleCpuHandExample) {
  auto t = test_factors();
  t.node_overhead_kg = 0.0;
  t.die_kg_per_mm2[ProcessNode::N7] = 0.5;
  const auto c = parse_catalog(R"(schema_version: 1
devices:
  - {model_id: Small CPU, kind: CPU, tdp_w: 10, die_area_mm2: 100, process_node: N7}
)",
                               "c");
  auto r = minimal_record(1, "Small CPU");
  r.num_nodes = 1;
  r.num_cpus = 1;
  stamp_provenance(r, Provenance::Top500Org);
  const auto e = emb(r, t, c);
  ASSERT_EQ(e.method, Method::ComponentModel);
  EXPECT_DOUBLE_EQ(*e.value_kg, 50.0);
  EXPECT_EQ(*e.breakdown, (EmbodiedBreakdown{50.0, 0.0, 0.0, 0.0, 0.0}));
  EXPECT_EQ(e.warnings.size(), 2u);  // memory and SSD unknown
}

TEST(Embodied, FullBreakdown) {
  auto r = configured();
  r.num_gpus = 40;
  r.accelerator_model = "TGPU";
  r.memory_capacity_gb = 1000.0;
  r.memory_type = MemoryType::HBM3;
  r.ssd_capacity_gb = 2000.0;
  stamp_provenance(r, Provenance::Top500Org);
  const auto e = emb(r);
  ASSERT_EQ(e.method, Method::ComponentModel);
  const EmbodiedBreakdown want{20 * 500 * 0.02, 40 * 1000 * 0.03, 1000 * 0.5, 2000 * 0.1,
                               10 * 1000.0};
  EXPECT_EQ(*e.breakdown, want);
  EXPECT_DOUBLE_EQ(*e.value_kg, want.total());
  EXPECT_TRUE(e.warnings.empty());
  EXPECT_TRUE(check_invariants(e).empty());
}

TEST(Embodied, YearSelectsNodeWhenCatalogLacksOne) {
  auto r = minimal_record(1, "Yearless CPU 16C");
  r.num_nodes = 1;
  r.num_cpus = 1;
  stamp_provenance(r, Provenance::Top500Org);
  const double no_year = emb(r).breakdown->cpu_dies;
  EXPECT_DOUBLE_EQ(no_year, 300 * 0.015);
  for (auto [year, factor] : {std::pair{2012, 0.01}, {2018, 0.02}, {2024, 0.03}}) {
    r.operation_year = year;
    stamp_provenance(r, Provenance::Top500Org);
    EXPECT_DOUBLE_EQ(emb(r).breakdown->cpu_dies, 300 * factor) << year;
  }
}

TEST(Embodied, MemoryTypeFallbackWarns) {
  auto r = configured();
  r.memory_capacity_gb = 100.0;
  stamp_provenance(r, Provenance::Top500Org);
  const auto e = emb(r);
  EXPECT_DOUBLE_EQ(e.breakdown->memory, 100 * 0.4);
  EXPECT_NE(std::find(e.warnings.begin(), e.warnings.end(),
                      "memory type unknown, priced with the Other factor"),
            e.warnings.end());
}

TEST(Embodied, ProxyAccelerator) {
  auto r = configured();
  r.num_gpus = 8;
  r.accelerator_model = "Novel Accel";
  stamp_provenance(r, Provenance::Top500Org);
  const auto e = emb(r);
  EXPECT_EQ(e.method, Method::ProxyAccelerator);
  EXPECT_DOUBLE_EQ(e.breakdown->accelerator_dies, 8 * 800 * 0.02);
  EXPECT_NE(e.warnings.front().find("systematic underestimate"), std::string::npos);

  auto no_proxy = test_factors();
  no_proxy.proxy_accelerator.reset();
  EXPECT_EQ(emb(r, no_proxy).method, Method::NotEstimable);
}

TEST(Embodied, UnnamedAcceleratorUsesProxy) {
  auto r = configured();
  r.num_gpus = 4;
  stamp_provenance(r, Provenance::Top500Org);
  const auto e = emb(r);
  EXPECT_EQ(e.method, Method::ProxyAccelerator);
  EXPECT_EQ(e.warnings.front().rfind("unnamed accelerator", 0), 0u);
}

TEST(Embodied, CpuOnlyNeedsNoGpuCount) {
  const auto e = emb(configured());
  EXPECT_EQ(e.method, Method::ComponentModel);
  EXPECT_DOUBLE_EQ(e.breakdown->accelerator_dies, 0.0);
}

TEST(Embodied, NotEstimableCases) {
  auto r = minimal_record();
  EXPECT_EQ(emb(r).warnings.at(0), "node, CPU, or GPU count missing");
  auto g = configured();
  g.accelerator_model = "TGPU";
  stamp_provenance(g, Provenance::Top500Org);
  EXPECT_EQ(emb(g).method, Method::NotEstimable);
  auto u = minimal_record(1, "Mystery");
  u.num_nodes = 1;
  u.num_cpus = 1;
  stamp_provenance(u, Provenance::Top500Org);
  const auto e = emb(u);
  EXPECT_EQ(e.method, Method::NotEstimable);
  EXPECT_EQ(e.warnings.at(0), "processor 'Mystery' not in catalog");
  EXPECT_TRUE(check_invariants(e).empty());
}

TEST(Embodied, SmallerProxyNeverIncreasesAcceleratorDies) {
  auto r = configured();
  r.num_gpus = 16;
  r.accelerator_model = "Novel Accel";
  stamp_provenance(r, Provenance::Top500Org);
  auto t = test_factors();
  double prev = emb(r, t).breakdown->accelerator_dies;
  for (double area : {700.0, 500.0, 200.0, 1.0}) {
    t.proxy_accelerator->die_area_mm2 = area;
    const double now = emb(r, t).breakdown->accelerator_dies;
    EXPECT_LE(now, prev) << area;
    prev = now;
  }
}

TEST(Embodied, StrictlyMonotoneInAcceleratorDieAndStorage) {
  auto r = configured();
  r.num_gpus = 16;
  r.accelerator_model = "Novel Accel";
  r.ssd_capacity_gb = 1000.0;
  stamp_provenance(r, Provenance::Top500Org);
  auto t = test_factors();
  const double base = *emb(r, t).value_kg;
  t.proxy_accelerator->die_area_mm2 *= 1.3;
  const double bigger_die = *emb(r, t).value_kg;
  r.ssd_capacity_gb = 3000.0;
  const double bigger_both = *emb(r, t).value_kg;
  EXPECT_GT(bigger_die, base);
  EXPECT_GT(bigger_both, bigger_die);
}

TEST(Embodied, MonotoneInCountsAndCapacities) {
  testing::Gen g(97);
  const auto& t = testing::shipped_factors();
  const auto& c = testing::shipped_catalog();
  int checked = 0;
  for (int i = 0; i < 3000; ++i) {
    auto r = testing::random_record(g, 1, c);
    const auto before = embodied_carbon(r, t, c, Scenario::Baseline);
    if (!before.estimable()) continue;
    auto bigger = r;
    switch (g.integer(0, 4)) {
      case 0: bigger.num_nodes = *r.num_nodes + g.integer(0, 100); break;
      case 1: bigger.num_cpus = std::min<std::int64_t>(r.total_cores, *r.num_cpus + g.integer(0, 100)); break;
      case 2: bigger.num_gpus = r.num_gpus.value_or(0) + g.integer(0, 100); break;
      case 3: bigger.memory_capacity_gb = r.memory_capacity_gb.value_or(1.0) * g.real(1.0, 3.0); break;
      case 4: bigger.ssd_capacity_gb = r.ssd_capacity_gb.value_or(0.0) + g.real(0.0, 1e5); break;
    }
    stamp_provenance(bigger, Provenance::Top500Org);
    const auto after = embodied_carbon(bigger, t, c, Scenario::Baseline);
    ASSERT_TRUE(after.estimable()) << "case " << i;
    EXPECT_GE(*after.value_kg, *before.value_kg) << "case " << i;
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

TEST(Embodied, ProxyUnderestimatesLargerNovelDie) {
  const char* with_entry = R"(schema_version: 1
devices:
  - {model_id: Test CPU 32C, kind: CPU, tdp_w: 200, die_area_mm2: 500, process_node: N7}
  - {model_id: Novel Accel, kind: Accelerator, tdp_w: 700, die_area_mm2: 1200, process_node: N7}
)";
  const char* without_entry = R"(schema_version: 1
devices:
  - {model_id: Test CPU 32C, kind: CPU, tdp_w: 200, die_area_mm2: 500, process_node: N7}
)";
  auto r = configured();
  r.num_gpus = 32;
  r.accelerator_model = "Novel Accel";
  stamp_provenance(r, Provenance::Top500Org);
  const auto truth = emb(r, test_factors(), parse_catalog(with_entry, "a"));
  const auto proxied = emb(r, test_factors(), parse_catalog(without_entry, "b"));
  EXPECT_EQ(truth.method, Method::ComponentModel);
  EXPECT_EQ(proxied.method, Method::ProxyAccelerator);
  EXPECT_LT(*proxied.value_kg, *truth.value_kg);
}

TEST(Embodied, Amortization) {
  const auto e = emb(configured());
  EXPECT_DOUBLE_EQ(amortized_kg_per_year(e, 4.0), *e.value_kg / 4.0);
  EXPECT_DOUBLE_EQ(amortized_kg_per_year(Estimate{}, 4.0), 0.0);
}

}  // namespace
}  // namespace fleetcarbon
