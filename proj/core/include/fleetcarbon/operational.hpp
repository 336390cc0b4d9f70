#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fleetcarbon/catalog.hpp"
#include "fleetcarbon/domain.hpp"

namespace fleetcarbon {

/// Annual energy and the cascade tier that produced it.
struct AnnualEnergy {
  double kwh = 0.0;
  Method method = Method::NotEstimable;
  std::vector<std::string> warnings;
};

struct OperationalOptions {
  // Length of the accounting period; a year is 8760 h, leap days ignored.
  double hours = kHoursPerYear;
};

/// Evidence cascade, first satisfiable tier wins:
///   1. measured annual energy;
///   2. reported power x utilization x hours;
///   3. device count x TDP (CPUs plus accelerators) x utilization x hours.
/// Returns nullopt when no tier applies.
std::optional<AnnualEnergy> annual_energy_kwh(const SystemRecord& record,
                                              const CarbonFactorTable& factors,
                                              const DeviceCatalog& catalog,
                                              const OperationalOptions& options = {});

/// kg CO2e for one year: energy x PUE x regional ACI.
Estimate operational_carbon(const SystemRecord& record,
                            const CarbonFactorTable& factors,
                            const DeviceCatalog& catalog, Scenario scenario,
                            const OperationalOptions& options = {});

}  // namespace fleetcarbon
