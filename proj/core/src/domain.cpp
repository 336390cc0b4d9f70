#include "fleetcarbon/domain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace fleetcarbon {

namespace {

struct FieldInfo {
  Field field;
  std::string_view key;
  std::string_view display;
};

constexpr std::array<FieldInfo, 13> kFieldInfo = {{
    {Field::OperationYear, "operation_year", "Operation Year"},
    {Field::ComputeNodes, "num_nodes", "# of Compute Nodes"},
    {Field::Gpus, "num_gpus", "# of GPUs"},
    {Field::Cpus, "num_cpus", "# of CPUs"},
    {Field::MemoryCapacity, "memory_capacity_gb", "Memory Capacity"},
    {Field::MemoryType, "memory_type", "Memory Type"},
    {Field::SsdCapacity, "ssd_capacity_gb", "SSD Capacity"},
    {Field::Utilization, "utilization", "System Util (opt.)"},
    {Field::AnnualEnergy, "annual_energy_kwh", "Annual Power Consumed (opt.)"},
    {Field::ReportedPower, "reported_power_kw", "Power (kW)"},
    {Field::Region, "region", "Region"},
    {Field::ProcessorModel, "processor_model", "Processor"},
    {Field::AcceleratorModel, "accelerator_model", "Accelerator"},
}};

const FieldInfo& info(Field f) {
  return kFieldInfo[static_cast<std::size_t>(f)];
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view to_string(MemoryType t) {
  switch (t) {
    case MemoryType::DDR3: return "DDR3";
    case MemoryType::DDR4: return "DDR4";
    case MemoryType::DDR5: return "DDR5";
    case MemoryType::HBM2: return "HBM2";
    case MemoryType::HBM2e: return "HBM2e";
    case MemoryType::HBM3: return "HBM3";
    case MemoryType::Other: return "Other";
  }
  return "Other";
}

std::optional<MemoryType> parse_memory_type(std::string_view s) {
  const auto l = lower(s);
  for (auto t : {MemoryType::DDR3, MemoryType::DDR4, MemoryType::DDR5,
                 MemoryType::HBM2, MemoryType::HBM2e, MemoryType::HBM3,
                 MemoryType::Other}) {
    if (lower(to_string(t)) == l) return t;
  }
  return std::nullopt;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Top500Org: return "Top500Org";
    case Provenance::PublicOverlay: return "PublicOverlay";
    case Provenance::Absent: return "Absent";
  }
  return "Absent";
}

std::string_view display_name(Field f) { return info(f).display; }
std::string_view field_key(Field f) { return info(f).key; }

std::optional<Field> parse_field_key(std::string_view key) {
  for (const auto& fi : kFieldInfo) {
    if (fi.key == key) return fi.field;
  }
  return std::nullopt;
}

std::string_view to_string(Scenario s) {
  return s == Scenario::Baseline ? "Baseline" : "BaselinePlusPublic";
}

std::string_view to_string(CarbonKind k) {
  return k == CarbonKind::Operational ? "Operational" : "Embodied";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::MeasuredEnergy: return "MeasuredEnergy";
    case Method::ReportedPower: return "ReportedPower";
    case Method::DerivedPower: return "DerivedPower";
    case Method::ComponentModel: return "ComponentModel";
    case Method::ProxyAccelerator: return "ProxyAccelerator";
    case Method::Interpolated: return "Interpolated";
    case Method::NotEstimable: return "NotEstimable";
  }
  return "NotEstimable";
}

bool SystemRecord::has(Field f) const {
  switch (f) {
    case Field::OperationYear: return operation_year.has_value();
    case Field::ComputeNodes: return num_nodes.has_value();
    case Field::Gpus: return num_gpus.has_value();
    case Field::Cpus: return num_cpus.has_value();
    case Field::MemoryCapacity: return memory_capacity_gb.has_value();
    case Field::MemoryType: return memory_type.has_value();
    case Field::SsdCapacity: return ssd_capacity_gb.has_value();
    case Field::Utilization: return utilization.has_value();
    case Field::AnnualEnergy: return annual_energy_kwh.has_value();
    case Field::ReportedPower: return reported_power_kw.has_value();
    case Field::Region: return !region.empty();
    case Field::ProcessorModel: return !processor_model.empty();
    case Field::AcceleratorModel: return accelerator_model.has_value();
  }
  return false;
}

Provenance SystemRecord::provenance_of(Field f) const {
  auto it = provenance.find(f);
  return it == provenance.end() ? Provenance::Absent : it->second;
}

void stamp_provenance(SystemRecord& r, Provenance source) {
  for (auto f : kAllFields) {
    if (!r.has(f)) {
      r.provenance[f] = Provenance::Absent;
    } else if (r.provenance_of(f) == Provenance::Absent) {
      r.provenance[f] = source;
    }
  }
}

std::vector<std::string> check_invariants(const SystemRecord& r) {
  std::vector<std::string> out;
  if (r.rank <= 0) out.push_back("rank must be positive");
  if (r.rmax_tflops < 0 || r.rpeak_tflops < 0)
    out.push_back("Rmax/Rpeak must be non-negative");
  if (r.rmax_tflops > r.rpeak_tflops) out.push_back("Rmax exceeds Rpeak");
  if (r.total_cores <= 0) out.push_back("total cores must be positive");
  if (r.num_cpus && *r.num_cpus > r.total_cores)
    out.push_back("CPU count exceeds total cores");
  if (r.num_cpus && *r.num_cpus <= 0) out.push_back("CPU count must be positive");
  if (r.num_nodes && *r.num_nodes <= 0)
    out.push_back("node count must be positive");
  if (r.num_gpus && *r.num_gpus < 0) out.push_back("GPU count must be non-negative");
  if (r.memory_capacity_gb && !(*r.memory_capacity_gb > 0))
    out.push_back("memory capacity must be positive");
  if (r.ssd_capacity_gb && !(*r.ssd_capacity_gb >= 0))
    out.push_back("SSD capacity must be non-negative");
  if (r.utilization && !(*r.utilization >= 0 && *r.utilization <= 1))
    out.push_back("utilization must lie in [0,1]");
  if (r.annual_energy_kwh && !(*r.annual_energy_kwh >= 0))
    out.push_back("annual energy must be non-negative");
  if (r.reported_power_kw && !(*r.reported_power_kw > 0))
    out.push_back("reported power must be positive");
  for (auto f : kTableMetrics) {
    if (!r.provenance.contains(f)) {
      out.push_back("provenance missing for " + std::string(display_name(f)));
    }
  }
  for (const auto& [f, p] : r.provenance) {
    if (r.has(f) != (p != Provenance::Absent)) {
      out.push_back("provenance of " + std::string(display_name(f)) +
                    " disagrees with field presence");
    }
  }
  return out;
}

void validate(const SystemRecord& r) {
  auto v = check_invariants(r);
  if (!v.empty()) {
    throw InvariantError("rank " + std::to_string(r.rank) + ": " + v.front());
  }
}

Estimate Estimate::not_estimable(int rank, CarbonKind kind, Scenario scenario,
                                 std::vector<std::string> warnings) {
  Estimate e;
  e.rank = rank;
  e.kind = kind;
  e.scenario = scenario;
  e.method = Method::NotEstimable;
  e.warnings = std::move(warnings);
  return e;
}

std::vector<std::string> check_invariants(const Estimate& e) {
  std::vector<std::string> out;
  if (e.method == Method::NotEstimable) {
    if (e.value_kg) out.push_back("NotEstimable estimate carries a value");
  } else if (!e.value_kg || !(*e.value_kg >= 0)) {
    out.push_back("estimable estimate needs a non-negative value");
  }
  if (e.breakdown && e.value_kg) {
    const double sum = e.breakdown->total();
    const double scale = std::max(std::abs(*e.value_kg), 1e-300);
    if (std::abs(sum - *e.value_kg) / scale > 1e-9)
      out.push_back("breakdown does not sum to value");
  }
  if (e.kind == CarbonKind::Operational && e.breakdown)
    out.push_back("operational estimate carries a breakdown");
  if (e.kind == CarbonKind::Embodied && e.method == Method::ComponentModel &&
      !e.breakdown)
    out.push_back("component-model estimate lacks a breakdown");
  return out;
}

bool uses_accelerators(const SystemRecord& r) {
  return r.accelerator_model.has_value() || (r.num_gpus && *r.num_gpus > 0);
}

bool has_configuration_counts(const SystemRecord& r) {
  if (!r.num_nodes || !r.num_cpus) return false;
  if (r.accelerator_model && !r.num_gpus) return false;
  return true;
}

MetricPresence classify(const SystemRecord& record, bool catalog_has_devices) {
  MetricPresence mp;
  for (auto f : kTableMetrics) mp.present[f] = record.has(f);
  const bool configured = has_configuration_counts(record) && catalog_has_devices;
  mp.operational_estimable = record.annual_energy_kwh.has_value() ||
                             record.reported_power_kw.has_value() || configured;
  mp.embodied_estimable = configured;
  return mp;
}

}  // namespace fleetcarbon
