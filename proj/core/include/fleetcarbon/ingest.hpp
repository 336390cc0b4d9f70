#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fleetcarbon/domain.hpp"
#include "fleetcarbon/errors.hpp"

namespace fleetcarbon {

inline constexpr int kFleetSchemaVersion = 1;
inline constexpr int kOverlaySchemaVersion = 1;

class MalformedRow : public InputError {
 public:
  using InputError::InputError;
};

class DuplicateRank : public InputError {
 public:
  DuplicateRank(std::string file, int line, int rank)
      : InputError(std::move(file), line,
                   "duplicate rank " + std::to_string(rank)),
        rank_(rank) {}
  int rank() const { return rank_; }

 private:
  int rank_;
};

class UnresolvedPatch : public InputError {
 public:
  using InputError::InputError;
};

class AmbiguousMatch : public InputError {
 public:
  using InputError::InputError;
};

/// A fleet in one data scenario. Records are rank-sorted.
struct Fleet {
  Scenario scenario = Scenario::Baseline;
  std::vector<SystemRecord> records;
  std::vector<std::string> warnings;
};

struct FleetParseOptions {
  char delimiter = ',';
  std::string source_name = "<fleet>";
};

/// Parses a delimiter-separated fleet export. Present fields are tagged
/// Top500Org, blank ones Absent.
Fleet parse_fleet(const std::filesystem::path& path, char delimiter = ',');
Fleet parse_fleet(std::istream& in, const FleetParseOptions& options = {});

/// Writes records in the fleet file schema (shortest round-trip numbers).
std::string serialize_fleet(std::span<const SystemRecord> records,
                            char delimiter = ',');

/// Column header for each field in the fleet file.
std::string_view fleet_column(Field f);

using PatchValue = std::variant<std::int64_t, double, std::string, MemoryType>;

struct OverlayPatch {
  std::variant<int, std::string> match_key;  // rank, or exact system name
  std::map<Field, PatchValue> fields;
  bool override_existing = false;
  std::string source_note;
  int line = 0;  // location in the overlay file, for diagnostics
};

std::vector<OverlayPatch> load_overlay(const std::filesystem::path& path);
std::vector<OverlayPatch> parse_overlay(std::string_view yaml_text,
                                        const std::string& source_name = "<overlay>");

/// Applies public-info patches. Fields sourced from the fleet export are kept
/// unless the patch sets `override`. The result is tagged BaselinePlusPublic.
/// Throws UnresolvedPatch / AmbiguousMatch / InputError.
Fleet apply_overlay(const Fleet& fleet, std::span<const OverlayPatch> patches,
                    const std::string& source_name = "<overlay>");

/// Per-metric count of records where that metric is Absent, in table order.
using CompletenessSummary = std::vector<std::pair<Field, int>>;

CompletenessSummary completeness_summary(std::span<const SystemRecord> records);

}  // namespace fleetcarbon
