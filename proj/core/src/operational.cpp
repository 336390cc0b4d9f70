#include "fleetcarbon/operational.hpp"

namespace fleetcarbon {

std::optional<AnnualEnergy> annual_energy_kwh(const SystemRecord& record,
                                              const CarbonFactorTable& factors,
                                              const DeviceCatalog& catalog,
                                              const OperationalOptions& options) {
  if (record.annual_energy_kwh) {
    return AnnualEnergy{*record.annual_energy_kwh, Method::MeasuredEnergy, {}};
  }

  const double util = record.utilization.value_or(factors.default_utilization);
  if (record.reported_power_kw) {
    return AnnualEnergy{*record.reported_power_kw * util * options.hours,
                        Method::ReportedPower, {}};
  }

  if (!has_configuration_counts(record)) return std::nullopt;
  auto devices = resolve_devices(record, catalog, factors);
  if (!devices.complete(record)) return std::nullopt;

  double watts = static_cast<double>(*record.num_cpus) * devices.cpu->tdp_w;
  if (devices.accelerator) {
    watts += static_cast<double>(record.num_gpus.value_or(0)) * devices.accelerator->tdp_w;
  }
  AnnualEnergy out{watts / 1000.0 * util * options.hours, Method::DerivedPower,
                   std::move(devices.warnings)};
  return out;
}

Estimate operational_carbon(const SystemRecord& record,
                            const CarbonFactorTable& factors,
                            const DeviceCatalog& catalog, Scenario scenario,
                            const OperationalOptions& options) {
  auto energy = annual_energy_kwh(record, factors, catalog, options);
  if (!energy) {
    return Estimate::not_estimable(
        record.rank, CarbonKind::Operational, scenario,
        {"no energy, power, or resolvable node configuration"});
  }
  Estimate e;
  e.rank = record.rank;
  e.kind = CarbonKind::Operational;
  e.scenario = scenario;
  e.method = energy->method;
  e.warnings = std::move(energy->warnings);

  const auto aci = aci_for(record.region, factors);
  if (aci.warning) e.warnings.push_back(*aci.warning);
  const double pue = factors.pue_for_site(record.site);
  e.value_kg = energy->kwh * pue * aci.g_per_kwh / 1000.0;
  return e;
}

}  // namespace fleetcarbon
