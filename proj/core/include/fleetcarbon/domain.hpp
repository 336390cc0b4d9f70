#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fleetcarbon {

// Units: power kW, energy kWh, carbon kg CO2e internally. Reports use MT CO2e.
inline constexpr double kKgPerMetricTon = 1000.0;
inline constexpr double kHoursPerYear = 8760.0;

inline constexpr double kg_to_mt(double kg) { return kg / kKgPerMetricTon; }
inline constexpr double mt_to_kg(double mt) { return mt * kKgPerMetricTon; }

enum class MemoryType { DDR3, DDR4, DDR5, HBM2, HBM2e, HBM3, Other };

std::string_view to_string(MemoryType t);
std::optional<MemoryType> parse_memory_type(std::string_view s);

enum class Provenance { Top500Org, PublicOverlay, Absent };

std::string_view to_string(Provenance p);

/// Every optional field of a SystemRecord that carries provenance. The first
/// nine are the data metrics counted in the completeness summary.
enum class Field {
  OperationYear,
  ComputeNodes,
  Gpus,
  Cpus,
  MemoryCapacity,
  MemoryType,
  SsdCapacity,
  Utilization,
  AnnualEnergy,
  ReportedPower,
  Region,
  ProcessorModel,
  AcceleratorModel,
};

inline constexpr std::array<Field, 9> kTableMetrics = {
    Field::OperationYear, Field::ComputeNodes,   Field::Gpus,
    Field::Cpus,          Field::MemoryCapacity, Field::MemoryType,
    Field::SsdCapacity,   Field::Utilization,    Field::AnnualEnergy,
};

inline constexpr std::array<Field, 13> kAllFields = {
    Field::OperationYear,  Field::ComputeNodes,   Field::Gpus,
    Field::Cpus,           Field::MemoryCapacity, Field::MemoryType,
    Field::SsdCapacity,    Field::Utilization,    Field::AnnualEnergy,
    Field::ReportedPower,  Field::Region,         Field::ProcessorModel,
    Field::AcceleratorModel,
};

/// Human label, e.g. "# of Compute Nodes".
std::string_view display_name(Field f);
/// Machine key used in overlay files and JSON, e.g. "num_nodes".
std::string_view field_key(Field f);
std::optional<Field> parse_field_key(std::string_view key);

enum class Scenario { Baseline, BaselinePlusPublic };
enum class CarbonKind { Operational, Embodied };
enum class Method {
  MeasuredEnergy,
  ReportedPower,
  DerivedPower,
  ComponentModel,
  ProxyAccelerator,
  Interpolated,
  NotEstimable,
};

std::string_view to_string(Scenario s);
std::string_view to_string(CarbonKind k);
std::string_view to_string(Method m);

/// Violated record or estimate invariant.
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One fleet entry. Optional members are the fields that may be missing from
/// the public record; `provenance` says where each present one came from.
struct SystemRecord {
  int rank = 0;
  std::string name;
  std::string site;
  std::string region;
  double rmax_tflops = 0.0;
  double rpeak_tflops = 0.0;
  std::int64_t total_cores = 0;
  std::string processor_model;
  std::optional<std::string> accelerator_model;

  std::optional<int> operation_year;
  std::optional<double> reported_power_kw;
  std::optional<std::int64_t> num_nodes;
  std::optional<std::int64_t> num_gpus;
  std::optional<std::int64_t> num_cpus;
  std::optional<double> memory_capacity_gb;
  std::optional<MemoryType> memory_type;
  std::optional<double> ssd_capacity_gb;
  std::optional<double> utilization;
  std::optional<double> annual_energy_kwh;

  std::map<Field, Provenance> provenance;

  bool has(Field f) const;
  Provenance provenance_of(Field f) const;

  friend bool operator==(const SystemRecord&, const SystemRecord&) = default;
};

/// Sets provenance for every field from presence: present fields get
/// `source`, missing ones Absent. Fields already tagged keep their tag.
void stamp_provenance(SystemRecord& r, Provenance source);

/// Returns the list of violated invariants (empty when well-formed).
std::vector<std::string> check_invariants(const SystemRecord& r);
/// Throws InvariantError with the first violation.
void validate(const SystemRecord& r);

struct EmbodiedBreakdown {
  double cpu_dies = 0.0;
  double accelerator_dies = 0.0;
  double memory = 0.0;
  double ssd = 0.0;
  double node_overhead = 0.0;

  double total() const {
    return cpu_dies + accelerator_dies + memory + ssd + node_overhead;
  }
  friend bool operator==(const EmbodiedBreakdown&,
                         const EmbodiedBreakdown&) = default;
};

struct Estimate {
  int rank = 0;
  CarbonKind kind = CarbonKind::Operational;
  Scenario scenario = Scenario::Baseline;
  Method method = Method::NotEstimable;
  std::optional<double> value_kg;
  std::optional<EmbodiedBreakdown> breakdown;
  std::vector<std::string> warnings;

  bool estimable() const { return method != Method::NotEstimable; }
  double value_mt() const { return value_kg ? kg_to_mt(*value_kg) : 0.0; }

  static Estimate not_estimable(int rank, CarbonKind kind, Scenario scenario,
                                std::vector<std::string> warnings = {});

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

std::vector<std::string> check_invariants(const Estimate& e);

struct MetricPresence {
  std::map<Field, bool> present;  // keyed by the nine table metrics
  bool operational_estimable = false;
  bool embodied_estimable = false;

  friend bool operator==(const MetricPresence&, const MetricPresence&) = default;
};

/// Pure classification of a record. `catalog_has_devices` means every device
/// the record names resolves in the catalog (directly or through the proxy).
MetricPresence classify(const SystemRecord& record, bool catalog_has_devices);

/// Node and CPU counts present, plus the GPU count when an accelerator model
/// is named. Shared input floor of derived power and the component model.
bool has_configuration_counts(const SystemRecord& r);
/// True when the record runs accelerators (named model or GPUs counted).
bool uses_accelerators(const SystemRecord& r);

}  // namespace fleetcarbon
