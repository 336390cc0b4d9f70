#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fleetcarbon::testing {

struct PropertyResult {
  std::string name;
  int cases = 0;
  bool ok = true;
  std::string failure;  // first counterexample, with its seed
};

// Each check draws `cases` random inputs from `seed` and stops at the first
// counterexample.
PropertyResult check_breakdown_sums(std::uint64_t seed, int cases);
PropertyResult check_additivity(std::uint64_t seed, int cases);
PropertyResult check_averaging_identity(std::uint64_t seed, int cases);
PropertyResult check_linearity(std::uint64_t seed, int cases);
PropertyResult check_monotone_information_gain(std::uint64_t seed, int cases);
PropertyResult check_interpolation_bounds(std::uint64_t seed, int cases);
PropertyResult check_byte_identical_reruns(int repeats);
PropertyResult check_normalization_idempotent(std::uint64_t seed, int cases);
PropertyResult check_interpolation_oracle(std::uint64_t seed, int fleets, int fleet_size);

std::vector<PropertyResult> invariant_suite(std::uint64_t seed);

}  // namespace fleetcarbon::testing
