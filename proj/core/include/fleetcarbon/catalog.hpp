#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fleetcarbon/domain.hpp"

namespace fleetcarbon {

inline constexpr int kFactorSchemaVersion = 1;
inline constexpr int kCatalogSchemaVersion = 1;

enum class DeviceKind { CPU, Accelerator };
enum class ProcessNode { N3, N4, N5, N6, N7, N10, N12, N14, N16, N22, N28, N40, Other };

std::string_view to_string(DeviceKind k);
std::string_view to_string(ProcessNode n);
std::optional<ProcessNode> parse_process_node(std::string_view s);

struct DeviceSpec {
  std::string model_id;
  DeviceKind kind = DeviceKind::CPU;
  double tdp_w = 0.0;
  double die_area_mm2 = 0.0;
  // Missing node falls back to the operation-year table of the factor file.
  std::optional<ProcessNode> process_node;

  friend bool operator==(const DeviceSpec&, const DeviceSpec&) = default;
};

struct YearNodeRule {
  int until_year = 0;  // inclusive
  ProcessNode node = ProcessNode::Other;
};

/// Reference factors converting energy, counts and capacities into CO2e.
/// Loaded from an editable data file; nothing here is compiled in except the
/// defaults used when a key is omitted.
struct CarbonFactorTable {
  std::map<std::string, double> aci_g_per_kwh;  // keyed by case-folded region
  double global_default_aci = 480.0;
  double pue = 1.2;
  std::map<std::string, double> site_pue;
  std::map<ProcessNode, double> die_kg_per_mm2;
  std::map<MemoryType, double> memory_kg_per_gb;
  double ssd_kg_per_gb = 0.0;
  double node_overhead_kg = 0.0;
  double default_utilization = 0.8;
  double vehicle_kg_per_year = 4280.0;
  double grams_per_mile = 394.4;
  double lifetime_years = 5.0;
  std::vector<YearNodeRule> process_node_by_year;  // ascending until_year
  std::optional<DeviceSpec> proxy_accelerator;
  // Path of the device catalog relative to the factor file, if named there.
  std::optional<std::filesystem::path> catalog_path;

  /// PUE for a site, falling back to the fleet-wide value.
  double pue_for_site(const std::string& site) const;
  /// Carbon per mm2 of good die; unknown nodes use the Other entry.
  double die_factor(ProcessNode node) const;
  /// Memory factor for a type; missing type uses the Other fallback.
  double memory_factor(std::optional<MemoryType> type) const;
  /// Node implied by the operation year when the catalog entry lacks one.
  ProcessNode node_for_year(std::optional<int> year) const;
};

/// Throws ConfigError (line-precise) on schema violations.
CarbonFactorTable load_factors(const std::filesystem::path& path);
CarbonFactorTable parse_factors(std::string_view yaml_text,
                                const std::string& source_name = "<factors>");
/// Returns the list of violated factor-table invariants.
std::vector<std::string> check_invariants(const CarbonFactorTable& t);

struct AciLookup {
  double g_per_kwh = 0.0;
  std::optional<std::string> warning;
};

/// Regional average carbon intensity; unknown regions get the global default
/// together with a warning.
AciLookup aci_for(std::string_view region, const CarbonFactorTable& factors);

class ProxyUnconfigured : public std::runtime_error {
 public:
  ProxyUnconfigured()
      : std::runtime_error("no proxy accelerator configured in factor table") {}
};

/// The mainstream-GPU stand-in for accelerators missing from the catalog.
/// Throws ProxyUnconfigured when the factor table has none.
const DeviceSpec& proxy_accelerator(const CarbonFactorTable& factors);

/// Warning attached to every estimate that used the proxy.
std::string proxy_warning(std::string_view raw_model, const DeviceSpec& proxy);

struct RewriteRule {
  std::string pattern;
  std::string replacement;
  std::regex compiled;
};

class DeviceCatalog {
 public:
  DeviceCatalog() = default;
  DeviceCatalog(std::vector<RewriteRule> rules, std::vector<DeviceSpec> devices,
                std::vector<std::pair<std::string, std::string>> aliases);

  /// Case-folds, applies the rewrite list until it reaches a fixpoint, then
  /// collapses whitespace.
  std::string normalize(std::string_view raw) const;

  /// Canonical match after normalization; nullopt when no entry matches (or
  /// the entry is of a different kind).
  std::optional<DeviceSpec> lookup(std::string_view raw) const;
  std::optional<DeviceSpec> lookup(std::string_view raw, DeviceKind kind) const;

  const std::vector<DeviceSpec>& devices() const { return devices_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }

 private:
  std::vector<RewriteRule> rules_;
  std::vector<DeviceSpec> devices_;
  std::map<std::string, std::size_t> index_;  // normalized key -> device
};

DeviceCatalog load_catalog(const std::filesystem::path& path);
DeviceCatalog parse_catalog(std::string_view yaml_text,
                            const std::string& source_name = "<catalog>");

/// Free-function form of DeviceCatalog::lookup.
std::optional<DeviceSpec> lookup_device(std::string_view raw_model,
                                        const DeviceCatalog& catalog);

/// Devices a record uses, resolved against catalog and proxy.
struct ResolvedDevices {
  std::optional<DeviceSpec> cpu;
  std::optional<DeviceSpec> accelerator;  // set only when the record uses one
  bool accelerator_is_proxy = false;
  std::vector<std::string> warnings;

  /// Every device the record needs was resolved.
  bool complete(const SystemRecord& r) const;
};

ResolvedDevices resolve_devices(const SystemRecord& r,
                                const DeviceCatalog& catalog,
                                const CarbonFactorTable& factors);

}  // namespace fleetcarbon
