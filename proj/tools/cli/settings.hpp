#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fleetcarbon::cli {

inline constexpr const char* kFactorsEnv = "FLEETCARBON_FACTORS";

enum class Source { Default, Environment, ConfigFile, Flag };
std::string_view to_string(Source s);

template <class T>
struct Setting {
  std::optional<T> value;
  Source source = Source::Default;

  void offer(const std::optional<T>& v, Source s) {
    if (v) {
      value = v;
      source = s;
    }
  }
};

/// Values shared by every subcommand after precedence is applied.
struct Settings {
  Setting<std::filesystem::path> factors;
  Setting<std::filesystem::path> catalog;
  Setting<std::filesystem::path> fleet;
  Setting<std::filesystem::path> overlay;
  Setting<std::filesystem::path> fleet_b;
  Setting<unsigned> threads;
  Setting<std::string> format;
  Setting<std::string> delimiter;
};

/// Keys a `--config` file may set. Paths are relative to the config file.
struct ConfigFile {
  std::optional<std::filesystem::path> factors, catalog, fleet, overlay, fleet_b;
  std::optional<unsigned> threads;
  std::optional<std::string> format, delimiter;
};

/// Throws ConfigError on unreadable files, unknown keys and bad values.
ConfigFile load_config(const std::filesystem::path& path);

/// Factor file used when neither a flag, config file nor the environment
/// names one: the installed copy if present, else the source tree copy.
std::optional<std::filesystem::path> builtin_factors_path();

/// flags > config file > environment > built-in defaults.
Settings resolve(const Settings& flags, const std::optional<ConfigFile>& config);

void print_settings(const Settings& s, std::ostream& err);

}  // namespace fleetcarbon::cli
