#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "fleetcarbon/domain.hpp"

namespace fleetcarbon {
namespace {

using testing::minimal_record;

TEST(Units, TonConversions) {
  EXPECT_DOUBLE_EQ(kg_to_mt(2500.0), 2.5);
  EXPECT_DOUBLE_EQ(mt_to_kg(2.5), 2500.0);
  EXPECT_DOUBLE_EQ(kHoursPerYear, 8760.0);
}

TEST(Enums, MemoryTypeRoundTripIsCaseInsensitive) {
  for (auto t : {MemoryType::DDR3, MemoryType::DDR4, MemoryType::DDR5, MemoryType::HBM2,
                 MemoryType::HBM2e, MemoryType::HBM3, MemoryType::Other}) {
    EXPECT_EQ(parse_memory_type(to_string(t)), t);
  }
  EXPECT_EQ(parse_memory_type("hbm2E"), MemoryType::HBM2e);
  EXPECT_FALSE(parse_memory_type("SDRAM"));
  EXPECT_FALSE(parse_memory_type(""));
}

TEST(Enums, FieldKeysRoundTrip) {
  for (auto f : kAllFields) {
    EXPECT_EQ(parse_field_key(field_key(f)), f);
    EXPECT_FALSE(display_name(f).empty());
  }
  EXPECT_EQ(display_name(Field::ComputeNodes), "# of Compute Nodes");
  EXPECT_FALSE(parse_field_key("Num_Nodes"));
}

TEST(Enums, MethodNames) {
  EXPECT_EQ(to_string(Method::DerivedPower), "DerivedPower");
  EXPECT_EQ(to_string(Method::NotEstimable), "NotEstimable");
  EXPECT_EQ(to_string(Scenario::BaselinePlusPublic), "BaselinePlusPublic");
  EXPECT_EQ(to_string(CarbonKind::Embodied), "Embodied");
}

TEST(Record, MinimalRecordIsValid) {
  const auto r = minimal_record();
  EXPECT_TRUE(check_invariants(r).empty());
  EXPECT_NO_THROW(validate(r));
  EXPECT_EQ(r.provenance_of(Field::ComputeNodes), Provenance::Absent);
  EXPECT_EQ(r.provenance_of(Field::ProcessorModel), Provenance::Top500Org);
}

TEST(Record, StampKeepsExistingProvenance) {
  auto r = minimal_record();
  r.num_nodes = 10;
  r.provenance[Field::ComputeNodes] = Provenance::PublicOverlay;
  r.num_cpus = 20;
  stamp_provenance(r, Provenance::Top500Org);
  EXPECT_EQ(r.provenance_of(Field::ComputeNodes), Provenance::PublicOverlay);
  EXPECT_EQ(r.provenance_of(Field::Cpus), Provenance::Top500Org);
  EXPECT_TRUE(check_invariants(r).empty());
}

TEST(Record, InvariantViolations) {
  struct Case {
    const char* what;
    void (*mutate)(SystemRecord&);
  };
  const Case cases[] = {
      {"rank", [](SystemRecord& r) { r.rank = 0; }},
      {"Rmax exceeds Rpeak", [](SystemRecord& r) { r.rmax_tflops = 2000; }},
      {"total cores", [](SystemRecord& r) { r.total_cores = 0; }},
      {"CPU count exceeds", [](SystemRecord& r) { r.num_cpus = 100001; }},
      {"node count", [](SystemRecord& r) { r.num_nodes = 0; }},
      {"GPU count", [](SystemRecord& r) { r.num_gpus = -1; }},
      {"memory capacity", [](SystemRecord& r) { r.memory_capacity_gb = 0.0; }},
      {"SSD capacity", [](SystemRecord& r) { r.ssd_capacity_gb = -1.0; }},
      {"utilization", [](SystemRecord& r) { r.utilization = 1.01; }},
      {"annual energy", [](SystemRecord& r) { r.annual_energy_kwh = -5.0; }},
      {"reported power", [](SystemRecord& r) { r.reported_power_kw = 0.0; }},
  };
  for (const auto& c : cases) {
    auto r = minimal_record();
    c.mutate(r);
    stamp_provenance(r, Provenance::Top500Org);
    const auto v = check_invariants(r);
    ASSERT_FALSE(v.empty()) << c.what;
    EXPECT_NE(v.front().find(c.what), std::string::npos) << v.front();
    EXPECT_THROW(validate(r), InvariantError) << c.what;
  }
}

TEST(Record, UtilizationBoundsAreInclusive) {
  for (double u : {0.0, 1.0}) {
    auto r = minimal_record();
    r.utilization = u;
    stamp_provenance(r, Provenance::Top500Org);
    EXPECT_TRUE(check_invariants(r).empty()) << u;
  }
}

TEST(Record, ProvenanceMustAgreeWithPresence) {
  auto r = minimal_record();
  r.num_nodes = 4;  // set after stamping
  EXPECT_FALSE(check_invariants(r).empty());
  auto r2 = minimal_record();
  r2.provenance.erase(Field::Utilization);
  EXPECT_FALSE(check_invariants(r2).empty());
}

TEST(Estimate, Invariants) {
  Estimate ne = Estimate::not_estimable(3, CarbonKind::Operational, Scenario::Baseline);
  EXPECT_TRUE(check_invariants(ne).empty());
  EXPECT_DOUBLE_EQ(ne.value_mt(), 0.0);
  ne.value_kg = 1.0;
  EXPECT_FALSE(check_invariants(ne).empty());

  Estimate e;
  e.kind = CarbonKind::Embodied;
  e.method = Method::ComponentModel;
  e.value_kg = 10.0;
  EXPECT_FALSE(check_invariants(e).empty());  // lacks a breakdown
  e.breakdown = EmbodiedBreakdown{1, 2, 3, 4, 0};
  EXPECT_TRUE(check_invariants(e).empty());
  e.value_kg = 11.0;
  EXPECT_FALSE(check_invariants(e).empty());

  Estimate op;
  op.method = Method::ReportedPower;
  op.value_kg = -1.0;
  EXPECT_FALSE(check_invariants(op).empty());
  op.value_kg = 1.0;
  op.breakdown = EmbodiedBreakdown{};
  EXPECT_FALSE(check_invariants(op).empty());
}

TEST(Classify, ConfigurationCounts) {
  auto r = minimal_record();
  EXPECT_FALSE(has_configuration_counts(r));
  r.num_nodes = 10;
  EXPECT_FALSE(has_configuration_counts(r));
  r.num_cpus = 20;
  EXPECT_TRUE(has_configuration_counts(r));
  r.accelerator_model = "Test GPU";
  EXPECT_FALSE(has_configuration_counts(r));
  r.num_gpus = 0;
  EXPECT_TRUE(has_configuration_counts(r));
}

TEST(Classify, UsesAccelerators) {
  auto r = minimal_record();
  EXPECT_FALSE(uses_accelerators(r));
  r.num_gpus = 0;
  EXPECT_FALSE(uses_accelerators(r));
  r.num_gpus = 4;
  EXPECT_TRUE(uses_accelerators(r));
  r.num_gpus.reset();
  r.accelerator_model = "X";
  EXPECT_TRUE(uses_accelerators(r));
}

TEST(Classify, Flags) {
  auto r = minimal_record();
  auto mp = classify(r, true);
  EXPECT_FALSE(mp.operational_estimable);
  EXPECT_FALSE(mp.embodied_estimable);
  EXPECT_EQ(mp.present.size(), kTableMetrics.size());

  r.reported_power_kw = 100.0;
  stamp_provenance(r, Provenance::Top500Org);
  mp = classify(r, true);
  EXPECT_TRUE(mp.operational_estimable);
  EXPECT_FALSE(mp.embodied_estimable);

  r.num_nodes = 2;
  r.num_cpus = 4;
  EXPECT_TRUE(classify(r, true).embodied_estimable);
  EXPECT_FALSE(classify(r, false).embodied_estimable);

  auto energy_only = minimal_record();
  energy_only.annual_energy_kwh = 10.0;
  stamp_provenance(energy_only, Provenance::Top500Org);
  mp = classify(energy_only, false);
  EXPECT_TRUE(mp.operational_estimable);
  EXPECT_TRUE(mp.present.at(Field::AnnualEnergy));
  EXPECT_FALSE(mp.present.at(Field::Gpus));
}

}  // namespace
}  // namespace fleetcarbon
