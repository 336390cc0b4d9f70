#include <gtest/gtest.h>

#include "properties.hpp"

namespace fleetcarbon::testing {
namespace {

void expect_ok(const PropertyResult& r) {
  EXPECT_TRUE(r.ok) << r.name << ": " << r.failure;
  EXPECT_GT(r.cases, 0);
}

// Seeds differ from the acceptance run so the two cover different draws.
constexpr std::uint64_t kSeed = 424242;

TEST(Properties, BreakdownSums) { expect_ok(check_breakdown_sums(kSeed, 1000)); }
TEST(Properties, Additivity) { expect_ok(check_additivity(kSeed + 1, 100)); }
TEST(Properties, AveragingIdentity) { expect_ok(check_averaging_identity(kSeed + 2, 200)); }
TEST(Properties, Linearity) { expect_ok(check_linearity(kSeed + 3, 1000)); }
TEST(Properties, MonotoneInformationGain) {
  expect_ok(check_monotone_information_gain(kSeed + 4, 200));
}
TEST(Properties, InterpolationBounds) { expect_ok(check_interpolation_bounds(kSeed + 5, 200)); }
TEST(Properties, NormalizationIdempotent) {
  expect_ok(check_normalization_idempotent(kSeed + 6, 2000));
}
TEST(Properties, InterpolationOracleSmallFleets) {
  expect_ok(check_interpolation_oracle(kSeed + 7, 300, 12));
}
TEST(Properties, InterpolationOracleSparseRanks) {
  expect_ok(check_interpolation_oracle(kSeed + 8, 200, 80));
}
TEST(Properties, ByteIdenticalReruns) { expect_ok(check_byte_identical_reruns(2)); }

}  // namespace
}  // namespace fleetcarbon::testing
