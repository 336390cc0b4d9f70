#include "fleetcarbon/embodied.hpp"

namespace fleetcarbon {

namespace {

double die_kg(const DeviceSpec& d, const SystemRecord& r,
              const CarbonFactorTable& factors) {
  const auto node = d.process_node.value_or(factors.node_for_year(r.operation_year));
  return d.die_area_mm2 * factors.die_factor(node);
}

}  // namespace

Estimate embodied_carbon(const SystemRecord& record,
                         const CarbonFactorTable& factors,
                         const DeviceCatalog& catalog, Scenario scenario) {
  if (!has_configuration_counts(record)) {
    return Estimate::not_estimable(record.rank, CarbonKind::Embodied, scenario,
                                   {"node, CPU, or GPU count missing"});
  }
  auto devices = resolve_devices(record, catalog, factors);
  if (!devices.complete(record)) {
    return Estimate::not_estimable(record.rank, CarbonKind::Embodied, scenario,
                                   std::move(devices.warnings));
  }

  Estimate e;
  e.rank = record.rank;
  e.kind = CarbonKind::Embodied;
  e.scenario = scenario;
  e.method = devices.accelerator_is_proxy ? Method::ProxyAccelerator
                                          : Method::ComponentModel;
  e.warnings = std::move(devices.warnings);

  EmbodiedBreakdown b;
  b.cpu_dies = static_cast<double>(*record.num_cpus) * die_kg(*devices.cpu, record, factors);
  if (devices.accelerator) {
    b.accelerator_dies = static_cast<double>(record.num_gpus.value_or(0)) *
                         die_kg(*devices.accelerator, record, factors);
  }
  if (record.memory_capacity_gb) {
    if (!record.memory_type) {
      e.warnings.push_back("memory type unknown, priced with the Other factor");
    }
    b.memory = *record.memory_capacity_gb * factors.memory_factor(record.memory_type);
  } else {
    e.warnings.push_back("memory capacity unknown, memory component set to 0");
  }
  if (record.ssd_capacity_gb) {
    b.ssd = *record.ssd_capacity_gb * factors.ssd_kg_per_gb;
  } else {
    e.warnings.push_back("SSD capacity unknown, SSD component set to 0");
  }
  b.node_overhead = static_cast<double>(*record.num_nodes) * factors.node_overhead_kg;

  e.value_kg = b.total();
  e.breakdown = b;
  return e;
}

double amortized_kg_per_year(const Estimate& embodied, double lifetime_years) {
  return embodied.value_kg.value_or(0.0) / lifetime_years;
}

}  // namespace fleetcarbon
