#include "settings.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fleetcarbon/errors.hpp"

namespace fleetcarbon::cli {

std::string_view to_string(Source s) {
  switch (s) {
    case Source::Default: return "default";
    case Source::Environment: return "environment";
    case Source::ConfigFile: return "config file";
    case Source::Flag: return "flag";
  }
  return "default";
}

ConfigFile load_config(const std::filesystem::path& path) {
  const std::string file = path.string();
  std::ifstream in(path);
  if (!in) throw ConfigError(file, 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  YAML::Node root;
  try {
    root = YAML::Load(ss.str());
  } catch (const YAML::Exception& e) {
    throw ConfigError(file, e.mark.line + 1, e.msg);
  }
  ConfigFile c;
  if (!root || root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError(file, root.Mark().line + 1, "expected a mapping");

  const auto base = path.parent_path();
  auto as_path = [&](const YAML::Node& n) { return base / n.as<std::string>(); };
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    const auto& v = kv.second;
    const int line = v.Mark().line + 1;
    if (!v.IsScalar()) throw ConfigError(file, line, fmt::format("'{}' must be a scalar", key));
    try {
      if (key == "factors") c.factors = as_path(v);
      else if (key == "catalog") c.catalog = as_path(v);
      else if (key == "fleet") c.fleet = as_path(v);
      else if (key == "overlay") c.overlay = as_path(v);
      else if (key == "fleet_b") c.fleet_b = as_path(v);
      else if (key == "threads") c.threads = v.as<unsigned>();
      else if (key == "format") c.format = v.as<std::string>();
      else if (key == "delimiter") c.delimiter = v.as<std::string>();
      else throw ConfigError(file, kv.first.Mark().line + 1, fmt::format("unknown key '{}'", key));
    } catch (const YAML::Exception&) {
      throw ConfigError(file, line, fmt::format("bad value for '{}'", key));
    }
  }
  return c;
}

std::optional<std::filesystem::path> builtin_factors_path() {
  for (const char* candidate : {FLEETCARBON_INSTALLED_FACTORS, FLEETCARBON_SOURCE_FACTORS}) {
    std::error_code ec;
    if (std::filesystem::exists(candidate, ec)) return std::filesystem::path(candidate);
  }
  return std::nullopt;
}

Settings resolve(const Settings& flags, const std::optional<ConfigFile>& config) {
  Settings s;
  s.factors.offer(builtin_factors_path(), Source::Default);
  if (const char* env = std::getenv(kFactorsEnv); env && *env) {
    s.factors.offer(std::filesystem::path(env), Source::Environment);
  }
  s.threads.offer(1u, Source::Default);
  s.delimiter.offer(std::string(","), Source::Default);
  if (config) {
    s.factors.offer(config->factors, Source::ConfigFile);
    s.catalog.offer(config->catalog, Source::ConfigFile);
    s.fleet.offer(config->fleet, Source::ConfigFile);
    s.overlay.offer(config->overlay, Source::ConfigFile);
    s.fleet_b.offer(config->fleet_b, Source::ConfigFile);
    s.threads.offer(config->threads, Source::ConfigFile);
    s.format.offer(config->format, Source::ConfigFile);
    s.delimiter.offer(config->delimiter, Source::ConfigFile);
  }
  auto take = [](auto& into, const auto& from) { into.offer(from.value, from.source); };
  take(s.factors, flags.factors);
  take(s.catalog, flags.catalog);
  take(s.fleet, flags.fleet);
  take(s.overlay, flags.overlay);
  take(s.fleet_b, flags.fleet_b);
  take(s.threads, flags.threads);
  take(s.format, flags.format);
  take(s.delimiter, flags.delimiter);
  return s;
}

namespace {

template <class T>
void line(std::ostream& err, std::string_view name, const Setting<T>& s) {
  if (!s.value) {
    err << fmt::format("  {:<10} (unset)\n", name);
    return;
  }
  std::string text;
  if constexpr (std::is_same_v<T, std::filesystem::path>) {
    text = s.value->string();
  } else {
    text = fmt::format("{}", *s.value);
  }
  err << fmt::format("  {:<10} {}  [{}]\n", name, text, to_string(s.source));
}

}  // namespace

void print_settings(const Settings& s, std::ostream& err) {
  err << "effective configuration:\n";
  line(err, "factors", s.factors);
  line(err, "catalog", s.catalog);
  line(err, "fleet", s.fleet);
  line(err, "overlay", s.overlay);
  line(err, "fleet_b", s.fleet_b);
  line(err, "threads", s.threads);
  line(err, "format", s.format);
  line(err, "delimiter", s.delimiter);
}

}  // namespace fleetcarbon::cli
