#include "fixtures.hpp"

#include <fstream>
#include <random>

namespace fleetcarbon::testing {

std::filesystem::path data_dir() { return FLEETCARBON_TEST_DATA_DIR; }

std::filesystem::path fixture_path(const std::string& name) {
  return data_dir() / "fixture" / name;
}

const CarbonFactorTable& shipped_factors() {
  static const auto t = load_factors(data_dir() / "factors.yaml");
  return t;
}

const DeviceCatalog& shipped_catalog() {
  static const auto c = load_catalog(data_dir() / "catalog.yaml");
  return c;
}

const Fleet& baseline_fleet() {
  static const auto f = parse_fleet(fixture_path("top500_baseline.csv"));
  return f;
}

const Fleet& overlay_fleet() {
  static const auto f = [] {
    const auto path = fixture_path("public_overlay.yaml");
    return apply_overlay(baseline_fleet(), load_overlay(path), path.string());
  }();
  return f;
}

const char* const kTestFactorsYaml = R"(schema_version: 1
pue: 1.5
default_utilization: 0.5
lifetime_years: 4
aci_g_per_kwh:
  global_default: 500
  regions:
    Testland: 400
    Cleanland: 50
site_pue:
  Cold Site: 1.1
die_kg_per_mm2:
  N7: 0.02
  N5: 0.03
  N14: 0.01
  Other: 0.015
memory_kg_per_gb:
  DDR4: 0.3
  HBM3: 0.5
  Other: 0.4
ssd_kg_per_gb: 0.1
node_overhead_kg: 1000
process_node_by_year:
  - {until: 2015, node: N14}
  - {until: 2021, node: N7}
  - {until: 9999, node: N5}
proxy_accelerator:
  model_id: Proxy GPU
  tdp_w: 400
  die_area_mm2: 800
  process_node: N7
equivalence:
  vehicle_kg_per_year: 4000
  grams_per_mile: 400
)";

const char* const kTestCatalogYaml = R"(schema_version: 1
normalization:
  - {pattern: '\s*\b\d+(\.\d+)?\s*ghz\b', replace: ''}
  - {pattern: '\((r|tm)\)', replace: ''}
devices:
  - model_id: Test CPU 32C
    kind: CPU
    tdp_w: 200
    die_area_mm2: 500
    process_node: N7
  - model_id: Yearless CPU 16C
    kind: CPU
    tdp_w: 100
    die_area_mm2: 300
  - model_id: Test GPU
    kind: Accelerator
    tdp_w: 500
    die_area_mm2: 1000
    process_node: N5
    aliases: [TGPU]
)";

const CarbonFactorTable& test_factors() {
  static const auto t = parse_factors(kTestFactorsYaml, "<test factors>");
  return t;
}

const DeviceCatalog& test_catalog() {
  static const auto c = parse_catalog(kTestCatalogYaml, "<test catalog>");
  return c;
}

SystemRecord minimal_record(int rank, std::string processor) {
  SystemRecord r;
  r.rank = rank;
  r.name = "System " + std::to_string(rank);
  r.site = "Test Site";
  r.region = "Testland";
  r.rmax_tflops = 1000.0;
  r.rpeak_tflops = 1500.0;
  r.total_cores = 100000;
  r.processor_model = std::move(processor);
  stamp_provenance(r, Provenance::Top500Org);
  return r;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  static std::mt19937_64 rng(std::random_device{}());
  const auto dir = std::filesystem::temp_directory_path() /
                   ("fleetcarbon-test-" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

}  // namespace fleetcarbon::testing
