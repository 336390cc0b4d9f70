#pragma once

#include "fleetcarbon/catalog.hpp"
#include "fleetcarbon/domain.hpp"

namespace fleetcarbon {

/// One-time manufacturing carbon from the system configuration:
///
///   cpu_dies         = CPUs x die area x carbon-per-area(node)
///   accelerator_dies = GPUs x die area x carbon-per-area(node)
///   memory           = capacity x per-GB factor(type, else Other)
///   ssd              = capacity x per-GB factor
///   node_overhead    = nodes x per-node chassis/board/PSU factor
///
/// Needs node and CPU counts (plus the GPU count when an accelerator is
/// named) and resolvable devices. Missing memory or SSD capacity contributes
/// zero with a warning. Accelerators missing from the catalog fall back to
/// the proxy and tag the estimate ProxyAccelerator.
Estimate embodied_carbon(const SystemRecord& record,
                         const CarbonFactorTable& factors,
                         const DeviceCatalog& catalog, Scenario scenario);

/// Lifetime embodied carbon spread evenly over `lifetime_years`.
double amortized_kg_per_year(const Estimate& embodied, double lifetime_years);

}  // namespace fleetcarbon
