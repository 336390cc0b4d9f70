#pragma once

#include <filesystem>
#include <string>

#include "fleetcarbon/catalog.hpp"
#include "fleetcarbon/ingest.hpp"

namespace fleetcarbon::testing {

std::filesystem::path data_dir();
std::filesystem::path fixture_path(const std::string& name);

/// Shipped reference data, loaded once.
const CarbonFactorTable& shipped_factors();
const DeviceCatalog& shipped_catalog();
const Fleet& baseline_fleet();
const Fleet& overlay_fleet();

/// Small hand-checkable factor table and catalog for unit tests.
extern const char* const kTestFactorsYaml;
extern const char* const kTestCatalogYaml;
const CarbonFactorTable& test_factors();
const DeviceCatalog& test_catalog();

/// A record that passes validation: rank, name, site, region, Rmax/Rpeak,
/// cores and processor set; everything optional left empty.
SystemRecord minimal_record(int rank = 1, std::string processor = "Test CPU 32C");

/// Writes `text` to a fresh file under the temp directory.
std::filesystem::path write_temp(const std::string& name, const std::string& text);

}  // namespace fleetcarbon::testing
