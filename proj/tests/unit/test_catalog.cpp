#include <gtest/gtest.h>

#include <functional>
#include <string>

#include "fixtures.hpp"
#include "fleetcarbon/catalog.hpp"
#include "fleetcarbon/errors.hpp"

namespace fleetcarbon {
namespace {

using testing::kTestCatalogYaml;
using testing::kTestFactorsYaml;
using testing::minimal_record;
using testing::test_catalog;
using testing::test_factors;

// Runs `f`, expects a ConfigError, returns its line.
int config_error_line(const std::function<void()>& f, const std::string& needle = {}) {
  try {
    f();
  } catch (const ConfigError& e) {
    if (!needle.empty()) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
    return e.line();
  }
  ADD_FAILURE() << "no ConfigError";
  return -1;
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  return s.replace(at, from.size(), to);
}

TEST(Factors, ShippedTableLoadsClean) {
  const auto& t = testing::shipped_factors();
  EXPECT_TRUE(check_invariants(t).empty());
  EXPECT_DOUBLE_EQ(t.pue, 1.2);
  EXPECT_DOUBLE_EQ(t.default_utilization, 0.8);
  EXPECT_DOUBLE_EQ(t.node_overhead_kg, 1100.0);
  ASSERT_TRUE(t.proxy_accelerator);
  EXPECT_EQ(t.proxy_accelerator->kind, DeviceKind::Accelerator);
  ASSERT_TRUE(t.catalog_path);
  EXPECT_EQ(*t.catalog_path, "catalog.yaml");
}

TEST(Factors, TestTableValues) {
  const auto& t = test_factors();
  EXPECT_DOUBLE_EQ(t.pue, 1.5);
  EXPECT_DOUBLE_EQ(t.global_default_aci, 500.0);
  EXPECT_DOUBLE_EQ(t.vehicle_kg_per_year, 4000.0);
  EXPECT_DOUBLE_EQ(t.grams_per_mile, 400.0);
  EXPECT_DOUBLE_EQ(t.lifetime_years, 4.0);
}

TEST(Factors, AciLookupIsCaseInsensitiveWithFallback) {
  const auto& t = test_factors();
  auto a = aci_for("testland", t);
  EXPECT_DOUBLE_EQ(a.g_per_kwh, 400.0);
  EXPECT_FALSE(a.warning);
  auto b = aci_for("Nowhere", t);
  EXPECT_DOUBLE_EQ(b.g_per_kwh, 500.0);
  ASSERT_TRUE(b.warning);
  EXPECT_EQ(*b.warning, "region 'Nowhere' not in ACI table, using global default");
}

TEST(Factors, SitePueAndFallbacks) {
  const auto& t = test_factors();
  EXPECT_DOUBLE_EQ(t.pue_for_site("Cold Site"), 1.1);
  EXPECT_DOUBLE_EQ(t.pue_for_site("cold site"), 1.5);  // site names are exact
  EXPECT_DOUBLE_EQ(t.die_factor(ProcessNode::N7), 0.02);
  EXPECT_DOUBLE_EQ(t.die_factor(ProcessNode::N3), 0.015);
  EXPECT_DOUBLE_EQ(t.memory_factor(MemoryType::HBM3), 0.5);
  EXPECT_DOUBLE_EQ(t.memory_factor(MemoryType::DDR5), 0.4);
  EXPECT_DOUBLE_EQ(t.memory_factor(std::nullopt), 0.4);
}

TEST(Factors, NodeForYear) {
  const auto& t = test_factors();
  EXPECT_EQ(t.node_for_year(2010), ProcessNode::N14);
  EXPECT_EQ(t.node_for_year(2015), ProcessNode::N14);
  EXPECT_EQ(t.node_for_year(2016), ProcessNode::N7);
  EXPECT_EQ(t.node_for_year(2021), ProcessNode::N7);
  EXPECT_EQ(t.node_for_year(2022), ProcessNode::N5);
  EXPECT_EQ(t.node_for_year(std::nullopt), ProcessNode::Other);
}

TEST(Factors, ProcessNodeParsing) {
  EXPECT_EQ(parse_process_node("7nm"), ProcessNode::N7);
  EXPECT_EQ(parse_process_node("n5"), ProcessNode::N5);
  EXPECT_EQ(parse_process_node("other"), ProcessNode::Other);
  EXPECT_FALSE(parse_process_node("N2"));
  EXPECT_FALSE(parse_process_node("nm"));
}

TEST(Factors, ErrorsCarryLineNumbers) {
  const std::string base = kTestFactorsYaml;
  // line 2 is "pue: 1.5"
  EXPECT_EQ(config_error_line([&] { parse_factors(replace_once(base, "pue: 1.5", "pue: 0.9"), "f"); },
                              "pue must be at least 1.0"),
            2);
  EXPECT_EQ(config_error_line(
                [&] { parse_factors(replace_once(base, "Testland: 400", "Testland: -4"), "f"); },
                "ACI of Testland must be positive"),
            8);
  EXPECT_EQ(config_error_line(
                [&] { parse_factors(replace_once(base, "  N14: 0.01", "  N2: 0.01"), "f"); },
                "unknown process node"),
            15);
  EXPECT_EQ(config_error_line([&] { parse_factors(base + "bogus: 1\n", "f"); },
                              "unknown key 'bogus'"),
            35);
  config_error_line(
      [&] { parse_factors(replace_once(base, "  Other: 0.015\n", ""), "f"); },
      "needs an 'Other' entry");
  config_error_line(
      [&] {
        parse_factors(replace_once(base, "{until: 2021, node: N7}", "{until: 2010, node: N7}"),
                      "f");
      },
      "strictly ascending");
  config_error_line([&] { parse_factors(replace_once(base, "ssd_kg_per_gb: 0.1\n", ""), "f"); },
                    "missing required key 'ssd_kg_per_gb'");
  config_error_line(
      [&] { parse_factors(replace_once(base, "schema_version: 1", "schema_version: 7"), "f"); },
      "schema_version");
  config_error_line([&] { parse_factors("pue: [1\n", "f"); });
  config_error_line(
      [&] { parse_factors(replace_once(base, "default_utilization: 0.5", "default_utilization: 2"), "f"); },
      "default_utilization");
}

TEST(Factors, ErrorMessageFormat) {
  try {
    parse_factors(replace_once(kTestFactorsYaml, "pue: 1.5", "pue: abc"), "factors.yaml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()), "factors.yaml:2: pue must be a number, got 'abc'");
    EXPECT_EQ(e.file(), "factors.yaml");
  }
}

TEST(Factors, MissingFileIsConfigError) {
  EXPECT_THROW(load_factors("/nonexistent/factors.yaml"), ConfigError);
}

TEST(Factors, TableInvariantsCatchHandEdits) {
  auto t = test_factors();
  t.pue = 0.5;
  t.aci_g_per_kwh["x"] = 0.0;
  t.ssd_kg_per_gb = 0.0;
  EXPECT_EQ(check_invariants(t).size(), 3u);
}

TEST(Proxy, ConfiguredAndUnconfigured) {
  const auto& t = test_factors();
  EXPECT_EQ(proxy_accelerator(t).model_id, "Proxy GPU");
  auto no_proxy = t;
  no_proxy.proxy_accelerator.reset();
  EXPECT_THROW(proxy_accelerator(no_proxy), ProxyUnconfigured);
  EXPECT_EQ(proxy_warning("Novel X", proxy_accelerator(t)),
            "accelerator 'Novel X' not in catalog, approximated by proxy 'Proxy GPU'; "
            "systematic underestimate of silicon size");
  EXPECT_EQ(proxy_warning("", proxy_accelerator(t)).rfind("unnamed accelerator", 0), 0u);
}

TEST(Catalog, NormalizeStripsDecorations) {
  const auto& c = test_catalog();
  EXPECT_EQ(c.normalize("  Test(R) CPU   32C 2.4GHz "), "test cpu 32c");
  EXPECT_EQ(c.normalize("Test CPU(TM) 32C 3 GHz"), "test cpu 32c");
  EXPECT_EQ(c.normalize(""), "");
}

TEST(Catalog, LookupByModelAliasAndKind) {
  const auto& c = test_catalog();
  auto cpu = c.lookup("TEST CPU 32C, 2.0GHz");
  ASSERT_FALSE(cpu);  // the comma is not stripped by the test rules
  cpu = c.lookup("TEST CPU 32C 2.0GHz");
  ASSERT_TRUE(cpu);
  EXPECT_EQ(cpu->model_id, "Test CPU 32C");
  auto gpu = c.lookup("tgpu");
  ASSERT_TRUE(gpu);
  EXPECT_EQ(gpu->model_id, "Test GPU");
  EXPECT_FALSE(c.lookup("Test GPU", DeviceKind::CPU));
  EXPECT_TRUE(c.lookup("Test GPU", DeviceKind::Accelerator));
  EXPECT_FALSE(c.lookup(""));
  EXPECT_FALSE(lookup_device("Unknown", c));
  EXPECT_FALSE(c.lookup("Yearless CPU 16C")->process_node);
}

TEST(Catalog, ShippedCatalogSpellings) {
  const auto& c = testing::shipped_catalog();
  for (const char* s : {"NVIDIA Tesla A100 SXM4 40GB", "NVIDIA A100", "nvidia a100 pcie 80 gb",
                        "NVIDIA Tesla A100"}) {
    auto d = c.lookup(s, DeviceKind::Accelerator);
    ASSERT_TRUE(d) << s;
    EXPECT_EQ(d->model_id, "NVIDIA A100") << s;
  }
  auto x = c.lookup("Intel(R) Xeon(R) Platinum 8480+ 56C 2GHz", DeviceKind::CPU);
  ASSERT_TRUE(x);
  EXPECT_EQ(x->model_id, "Intel Xeon Platinum 8480+ 56C");
  auto alias = c.lookup("AMD EPYC 7A53 64C 2GHz");
  ASSERT_TRUE(alias);
  EXPECT_EQ(alias->model_id, "AMD Optimized 3rd Generation EPYC 64C");
}

TEST(Catalog, ErrorsCarryLineNumbers) {
  const std::string base = kTestCatalogYaml;
  EXPECT_EQ(config_error_line(
                [&] { parse_catalog(replace_once(base, "tdp_w: 500", "tdp_w: -1"), "c"); },
                "tdp_w must be positive"),
            17);
  EXPECT_EQ(config_error_line(
                [&] { parse_catalog(replace_once(base, "aliases: [TGPU]", "aliases: [Test CPU 32C 3GHz]"), "c"); },
                "collides with catalog entry 'Test CPU 32C'"),
            20);
  config_error_line(
      [&] { parse_catalog(replace_once(base, "kind: Accelerator", "kind: FPGA"), "c"); },
      "kind must be CPU or Accelerator");
  config_error_line(
      [&] { parse_catalog(replace_once(base, "'\\((r|tm)\\)'", "'(unclosed'"), "c"); },
      "invalid pattern");
  config_error_line([&] { parse_catalog("schema_version: 1\n", "c"); },
                    "missing required key 'devices'");
  config_error_line(
      [&] { parse_catalog(replace_once(base, "model_id: Yearless CPU 16C", "model_id: Test CPU 32C"), "c"); },
      "collides");
  // same spelling twice under one model is fine for aliases
  EXPECT_NO_THROW(parse_catalog(replace_once(base, "aliases: [TGPU]", "aliases: [TGPU, tgpu]"), "c"));
}

TEST(Resolve, Devices) {
  const auto& t = test_factors();
  const auto& c = test_catalog();
  auto r = minimal_record();
  auto d = resolve_devices(r, c, t);
  EXPECT_TRUE(d.complete(r));
  EXPECT_FALSE(d.accelerator);

  r.accelerator_model = "TGPU";
  d = resolve_devices(r, c, t);
  ASSERT_TRUE(d.accelerator);
  EXPECT_FALSE(d.accelerator_is_proxy);

  r.accelerator_model = "Mystery";
  d = resolve_devices(r, c, t);
  ASSERT_TRUE(d.accelerator);
  EXPECT_TRUE(d.accelerator_is_proxy);
  ASSERT_EQ(d.warnings.size(), 1u);

  auto no_proxy = t;
  no_proxy.proxy_accelerator.reset();
  d = resolve_devices(r, c, no_proxy);
  EXPECT_FALSE(d.complete(r));
  EXPECT_NE(d.warnings.back().find("no proxy configured"), std::string::npos);

  auto unknown_cpu = minimal_record(1, "Mystery CPU");
  d = resolve_devices(unknown_cpu, c, t);
  EXPECT_FALSE(d.complete(unknown_cpu));
  EXPECT_EQ(d.warnings.front(), "processor 'Mystery CPU' not in catalog");
}

}  // namespace
}  // namespace fleetcarbon
