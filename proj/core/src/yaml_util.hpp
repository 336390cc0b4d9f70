#pragma once

// Line-aware accessors over yaml-cpp nodes. Every failure is raised as the
// caller-chosen LocatedError subtype so loaders report "file:line: reason".

#include <yaml-cpp/yaml.h>

#include <string>
#include <string_view>

#include "fleetcarbon/errors.hpp"

namespace fleetcarbon::detail {

inline int line_of(const YAML::Node& n) {
  const auto mark = n.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

template <typename Error>
class YamlReader {
 public:
  explicit YamlReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& reason) const {
    throw Error(source_, line_of(at), reason);
  }
  [[noreturn]] void fail(int line, const std::string& reason) const {
    throw Error(source_, line, reason);
  }

  YAML::Node parse(std::string_view text) const {
    try {
      return YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
      throw Error(source_, e.mark.line + 1, e.msg);
    }
  }

  YAML::Node require(const YAML::Node& map, std::string_view key) const {
    auto n = map[std::string(key)];
    if (!n) fail(map, "missing required key '" + std::string(key) + "'");
    return n;
  }

  double number(const YAML::Node& n, std::string_view what) const {
    if (!n.IsScalar()) fail(n, std::string(what) + " must be a number");
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail(n, std::string(what) + " must be a number, got '" + n.Scalar() + "'");
    }
  }

  double positive(const YAML::Node& n, std::string_view what) const {
    const double v = number(n, what);
    if (!(v > 0)) fail(n, std::string(what) + " must be positive");
    return v;
  }

  double non_negative(const YAML::Node& n, std::string_view what) const {
    const double v = number(n, what);
    if (!(v >= 0)) fail(n, std::string(what) + " must be non-negative");
    return v;
  }

  long long integer(const YAML::Node& n, std::string_view what) const {
    if (!n.IsScalar()) fail(n, std::string(what) + " must be an integer");
    try {
      return n.as<long long>();
    } catch (const YAML::Exception&) {
      fail(n, std::string(what) + " must be an integer, got '" + n.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& n, std::string_view what) const {
    if (!n.IsScalar()) fail(n, std::string(what) + " must be a string");
    return n.Scalar();
  }

  bool boolean(const YAML::Node& n, std::string_view what) const {
    if (!n.IsScalar()) fail(n, std::string(what) + " must be true or false");
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      fail(n, std::string(what) + " must be true or false");
    }
  }

  void check_schema_version(const YAML::Node& root, int expected) const {
    if (!root || !root.IsMap()) fail(1, "top level must be a mapping");
    const auto v = integer(require(root, "schema_version"), "schema_version");
    if (v != expected) {
      fail(root["schema_version"], "unsupported schema_version " +
                                       std::to_string(v) + " (expected " +
                                       std::to_string(expected) + ")");
    }
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

}  // namespace fleetcarbon::detail
