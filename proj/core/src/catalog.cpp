#include "fleetcarbon/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "fleetcarbon/errors.hpp"
#include "yaml_util.hpp"

namespace fleetcarbon {

namespace {

using ConfigReader = detail::YamlReader<ConfigError>;

constexpr std::array<ProcessNode, 13> kNodes = {
    ProcessNode::N3,  ProcessNode::N4,  ProcessNode::N5,  ProcessNode::N6,
    ProcessNode::N7,  ProcessNode::N10, ProcessNode::N12, ProcessNode::N14,
    ProcessNode::N16, ProcessNode::N22, ProcessNode::N28, ProcessNode::N40,
    ProcessNode::Other};

constexpr int kMaxRewritePasses = 16;

std::string casefold(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DeviceKind parse_kind(const ConfigReader& rd, const YAML::Node& n) {
  const auto s = casefold(rd.text(n, "kind"));
  if (s == "cpu") return DeviceKind::CPU;
  if (s == "accelerator" || s == "gpu") return DeviceKind::Accelerator;
  rd.fail(n, "kind must be CPU or Accelerator, got '" + n.Scalar() + "'");
}

ProcessNode read_node(const ConfigReader& rd, const YAML::Node& n) {
  auto node = parse_process_node(rd.text(n, "process_node"));
  if (!node) rd.fail(n, "unknown process node '" + n.Scalar() + "'");
  return *node;
}

DeviceSpec read_device(const ConfigReader& rd, const YAML::Node& n,
                       std::optional<DeviceKind> forced_kind = std::nullopt) {
  if (!n.IsMap()) rd.fail(n, "device entry must be a mapping");
  DeviceSpec d;
  d.model_id = rd.text(rd.require(n, "model_id"), "model_id");
  if (d.model_id.empty()) rd.fail(n, "model_id must not be empty");
  d.kind = forced_kind ? *forced_kind : parse_kind(rd, rd.require(n, "kind"));
  d.tdp_w = rd.positive(rd.require(n, "tdp_w"), "tdp_w");
  d.die_area_mm2 = rd.positive(rd.require(n, "die_area_mm2"), "die_area_mm2");
  if (auto pn = n["process_node"]) d.process_node = read_node(rd, pn);
  return d;
}

}  // namespace

std::string_view to_string(DeviceKind k) {
  return k == DeviceKind::CPU ? "CPU" : "Accelerator";
}

std::string_view to_string(ProcessNode n) {
  switch (n) {
    case ProcessNode::N3: return "N3";
    case ProcessNode::N4: return "N4";
    case ProcessNode::N5: return "N5";
    case ProcessNode::N6: return "N6";
    case ProcessNode::N7: return "N7";
    case ProcessNode::N10: return "N10";
    case ProcessNode::N12: return "N12";
    case ProcessNode::N14: return "N14";
    case ProcessNode::N16: return "N16";
    case ProcessNode::N22: return "N22";
    case ProcessNode::N28: return "N28";
    case ProcessNode::N40: return "N40";
    case ProcessNode::Other: return "Other";
  }
  return "Other";
}

std::optional<ProcessNode> parse_process_node(std::string_view s) {
  auto l = casefold(s);
  if (l.size() > 2 && l.ends_with("nm")) l = "n" + l.substr(0, l.size() - 2);
  for (auto n : kNodes) {
    if (casefold(to_string(n)) == l) return n;
  }
  return std::nullopt;
}

double CarbonFactorTable::pue_for_site(const std::string& site) const {
  auto it = site_pue.find(site);
  return it == site_pue.end() ? pue : it->second;
}

double CarbonFactorTable::die_factor(ProcessNode node) const {
  if (auto it = die_kg_per_mm2.find(node); it != die_kg_per_mm2.end())
    return it->second;
  return die_kg_per_mm2.at(ProcessNode::Other);
}

double CarbonFactorTable::memory_factor(std::optional<MemoryType> type) const {
  if (type) {
    if (auto it = memory_kg_per_gb.find(*type); it != memory_kg_per_gb.end())
      return it->second;
  }
  return memory_kg_per_gb.at(MemoryType::Other);
}

ProcessNode CarbonFactorTable::node_for_year(std::optional<int> year) const {
  if (!year) return ProcessNode::Other;
  for (const auto& rule : process_node_by_year) {
    if (*year <= rule.until_year) return rule.node;
  }
  return process_node_by_year.empty() ? ProcessNode::Other
                                      : process_node_by_year.back().node;
}

std::vector<std::string> check_invariants(const CarbonFactorTable& t) {
  std::vector<std::string> out;
  if (!(t.global_default_aci > 0)) out.push_back("global ACI must be positive");
  for (const auto& [region, v] : t.aci_g_per_kwh)
    if (!(v > 0)) out.push_back("ACI of " + region + " must be positive");
  if (!(t.pue >= 1.0)) out.push_back("PUE must be at least 1");
  for (const auto& [site, v] : t.site_pue)
    if (!(v >= 1.0)) out.push_back("PUE of site " + site + " must be at least 1");
  if (!t.die_kg_per_mm2.contains(ProcessNode::Other))
    out.push_back("die_kg_per_mm2 needs an Other entry");
  for (const auto& [n, v] : t.die_kg_per_mm2)
    if (!(v > 0)) out.push_back("die factor must be positive");
  if (!t.memory_kg_per_gb.contains(MemoryType::Other))
    out.push_back("memory_kg_per_gb needs an Other entry");
  for (const auto& [m, v] : t.memory_kg_per_gb)
    if (!(v > 0)) out.push_back("memory factor must be positive");
  if (!(t.ssd_kg_per_gb > 0)) out.push_back("ssd_kg_per_gb must be positive");
  if (!(t.node_overhead_kg >= 0)) out.push_back("node_overhead_kg must be >= 0");
  if (!(t.default_utilization >= 0 && t.default_utilization <= 1))
    out.push_back("default_utilization must lie in [0,1]");
  if (!(t.vehicle_kg_per_year > 0)) out.push_back("vehicle_kg_per_year must be positive");
  if (!(t.grams_per_mile > 0)) out.push_back("grams_per_mile must be positive");
  if (!(t.lifetime_years > 0)) out.push_back("lifetime_years must be positive");
  return out;
}

CarbonFactorTable parse_factors(std::string_view yaml_text,
                                const std::string& source_name) {
  const ConfigReader rd(source_name);
  const auto root = rd.parse(yaml_text);
  rd.check_schema_version(root, kFactorSchemaVersion);

  CarbonFactorTable t;
  if (auto n = root["catalog"]) t.catalog_path = rd.text(n, "catalog");
  if (auto n = root["pue"]) {
    t.pue = rd.number(n, "pue");
    if (!(t.pue >= 1.0)) rd.fail(n, "pue must be at least 1.0");
  }
  if (auto n = root["default_utilization"]) {
    t.default_utilization = rd.number(n, "default_utilization");
    if (!(t.default_utilization >= 0 && t.default_utilization <= 1))
      rd.fail(n, "default_utilization must lie in [0,1]");
  }
  if (auto n = root["lifetime_years"]) t.lifetime_years = rd.positive(n, "lifetime_years");

  const auto aci = rd.require(root, "aci_g_per_kwh");
  if (!aci.IsMap()) rd.fail(aci, "aci_g_per_kwh must be a mapping");
  t.global_default_aci =
      rd.positive(rd.require(aci, "global_default"), "aci_g_per_kwh.global_default");
  if (auto regions = aci["regions"]) {
    if (!regions.IsMap()) rd.fail(regions, "aci_g_per_kwh.regions must be a mapping");
    for (const auto& kv : regions) {
      const auto region = rd.text(kv.first, "region name");
      const auto key = casefold(region);
      if (t.aci_g_per_kwh.contains(key))
        rd.fail(kv.first, "duplicate region '" + region + "'");
      t.aci_g_per_kwh[key] = rd.positive(kv.second, "ACI of " + region);
    }
  }

  if (auto sp = root["site_pue"]) {
    if (!sp.IsMap()) rd.fail(sp, "site_pue must be a mapping");
    for (const auto& kv : sp) {
      const auto site = rd.text(kv.first, "site");
      const double v = rd.number(kv.second, "PUE of " + site);
      if (!(v >= 1.0)) rd.fail(kv.second, "PUE of " + site + " must be at least 1.0");
      t.site_pue[site] = v;
    }
  }

  const auto die = rd.require(root, "die_kg_per_mm2");
  if (!die.IsMap()) rd.fail(die, "die_kg_per_mm2 must be a mapping");
  for (const auto& kv : die) {
    t.die_kg_per_mm2[read_node(rd, kv.first)] =
        rd.positive(kv.second, "die_kg_per_mm2." + kv.first.Scalar());
  }
  if (!t.die_kg_per_mm2.contains(ProcessNode::Other))
    rd.fail(die, "die_kg_per_mm2 needs an 'Other' entry");

  const auto mem = rd.require(root, "memory_kg_per_gb");
  if (!mem.IsMap()) rd.fail(mem, "memory_kg_per_gb must be a mapping");
  for (const auto& kv : mem) {
    auto type = parse_memory_type(rd.text(kv.first, "memory type"));
    if (!type) rd.fail(kv.first, "unknown memory type '" + kv.first.Scalar() + "'");
    t.memory_kg_per_gb[*type] =
        rd.positive(kv.second, "memory_kg_per_gb." + kv.first.Scalar());
  }
  if (!t.memory_kg_per_gb.contains(MemoryType::Other))
    rd.fail(mem, "memory_kg_per_gb needs an 'Other' fallback entry");

  t.ssd_kg_per_gb = rd.positive(rd.require(root, "ssd_kg_per_gb"), "ssd_kg_per_gb");
  t.node_overhead_kg =
      rd.non_negative(rd.require(root, "node_overhead_kg"), "node_overhead_kg");

  if (auto years = root["process_node_by_year"]) {
    if (!years.IsSequence()) rd.fail(years, "process_node_by_year must be a list");
    int prev = std::numeric_limits<int>::min();
    for (const auto& e : years) {
      if (!e.IsMap()) rd.fail(e, "process_node_by_year entry must be a mapping");
      YearNodeRule rule;
      rule.until_year = static_cast<int>(rd.integer(rd.require(e, "until"), "until"));
      rule.node = read_node(rd, rd.require(e, "node"));
      if (rule.until_year <= prev)
        rd.fail(e, "process_node_by_year must be strictly ascending in 'until'");
      prev = rule.until_year;
      t.process_node_by_year.push_back(rule);
    }
  }

  if (auto proxy = root["proxy_accelerator"]) {
    if (!proxy.IsNull()) t.proxy_accelerator = read_device(rd, proxy, DeviceKind::Accelerator);
  }

  if (auto eq = root["equivalence"]) {
    if (!eq.IsMap()) rd.fail(eq, "equivalence must be a mapping");
    if (auto n = eq["vehicle_kg_per_year"])
      t.vehicle_kg_per_year = rd.positive(n, "vehicle_kg_per_year");
    if (auto n = eq["grams_per_mile"]) t.grams_per_mile = rd.positive(n, "grams_per_mile");
  }

  static const std::set<std::string> known = {
      "schema_version", "catalog",          "pue",
      "default_utilization", "lifetime_years", "aci_g_per_kwh",
      "site_pue",       "die_kg_per_mm2",   "memory_kg_per_gb",
      "ssd_kg_per_gb",  "node_overhead_kg", "process_node_by_year",
      "proxy_accelerator", "equivalence"};
  for (const auto& kv : root) {
    if (!known.contains(kv.first.Scalar()))
      rd.fail(kv.first, "unknown key '" + kv.first.Scalar() + "'");
  }
  return t;
}

CarbonFactorTable load_factors(const std::filesystem::path& path) {
  return parse_factors(read_file(path), path.string());
}

AciLookup aci_for(std::string_view region, const CarbonFactorTable& factors) {
  if (auto it = factors.aci_g_per_kwh.find(casefold(region));
      it != factors.aci_g_per_kwh.end()) {
    return {it->second, std::nullopt};
  }
  return {factors.global_default_aci,
          "region '" + std::string(region) +
              "' not in ACI table, using global default"};
}

const DeviceSpec& proxy_accelerator(const CarbonFactorTable& factors) {
  if (!factors.proxy_accelerator) throw ProxyUnconfigured();
  return *factors.proxy_accelerator;
}

std::string proxy_warning(std::string_view raw_model, const DeviceSpec& proxy) {
  const std::string what = raw_model.empty()
                               ? std::string("unnamed accelerator")
                               : "accelerator '" + std::string(raw_model) + "'";
  return what + " not in catalog, approximated by proxy '" + proxy.model_id +
         "'; systematic underestimate of silicon size";
}

DeviceCatalog::DeviceCatalog(std::vector<RewriteRule> rules,
                             std::vector<DeviceSpec> devices,
                             std::vector<std::pair<std::string, std::string>> aliases)
    : rules_(std::move(rules)), devices_(std::move(devices)) {
  for (std::size_t i = 0; i < devices_.size(); ++i) {
    index_.emplace(normalize(devices_[i].model_id), i);
  }
  for (const auto& [alias, model] : aliases) {
    auto it = index_.find(normalize(model));
    if (it != index_.end()) index_.emplace(normalize(alias), it->second);
  }
}

std::string DeviceCatalog::normalize(std::string_view raw) const {
  std::string s = casefold(raw);
  for (int pass = 0; pass < kMaxRewritePasses; ++pass) {
    std::string next = s;
    for (const auto& rule : rules_) {
      next = std::regex_replace(next, rule.compiled, rule.replacement);
    }
    next = collapse_whitespace(next);
    if (next == s) break;
    s = std::move(next);
  }
  return collapse_whitespace(s);
}

std::optional<DeviceSpec> DeviceCatalog::lookup(std::string_view raw) const {
  if (raw.empty()) return std::nullopt;
  auto it = index_.find(normalize(raw));
  if (it == index_.end()) return std::nullopt;
  return devices_[it->second];
}

std::optional<DeviceSpec> DeviceCatalog::lookup(std::string_view raw,
                                                DeviceKind kind) const {
  auto d = lookup(raw);
  if (d && d->kind != kind) return std::nullopt;
  return d;
}

std::optional<DeviceSpec> lookup_device(std::string_view raw_model,
                                        const DeviceCatalog& catalog) {
  return catalog.lookup(raw_model);
}

DeviceCatalog parse_catalog(std::string_view yaml_text,
                            const std::string& source_name) {
  const ConfigReader rd(source_name);
  const auto root = rd.parse(yaml_text);
  rd.check_schema_version(root, kCatalogSchemaVersion);

  std::vector<RewriteRule> rules;
  if (auto norm = root["normalization"]) {
    if (!norm.IsSequence()) rd.fail(norm, "normalization must be a list");
    for (const auto& e : norm) {
      if (!e.IsMap()) rd.fail(e, "normalization entry must be a mapping");
      RewriteRule r;
      r.pattern = rd.text(rd.require(e, "pattern"), "pattern");
      r.replacement = e["replace"] ? rd.text(e["replace"], "replace") : "";
      try {
        r.compiled = std::regex(r.pattern, std::regex::ECMAScript);
      } catch (const std::regex_error& err) {
        rd.fail(e["pattern"], std::string("invalid pattern: ") + err.what());
      }
      rules.push_back(std::move(r));
    }
  }

  std::vector<DeviceSpec> devices;
  std::vector<std::pair<std::string, std::string>> aliases;
  const auto list = rd.require(root, "devices");
  if (!list.IsSequence()) rd.fail(list, "devices must be a list");

  // Key collisions are checked after normalization, so build a probe
  // catalog carrying only the rules.
  const DeviceCatalog probe(rules, {}, {});
  std::map<std::string, std::string> seen;
  auto claim = [&](const YAML::Node& at, const std::string& raw,
                   const std::string& owner, bool is_model) {
    const auto key = probe.normalize(raw);
    if (key.empty()) rd.fail(at, "'" + raw + "' normalizes to an empty key");
    auto [it, inserted] = seen.emplace(key, owner);
    if (!inserted && (is_model || it->second != owner)) {
      rd.fail(at, "'" + raw + "' collides with catalog entry '" + it->second +
                      "' after normalization");
    }
  };

  for (const auto& e : list) {
    auto d = read_device(rd, e);
    claim(e["model_id"], d.model_id, d.model_id, true);
    if (auto al = e["aliases"]) {
      if (!al.IsSequence()) rd.fail(al, "aliases must be a list");
      for (const auto& a : al) {
        auto alias = rd.text(a, "alias");
        claim(a, alias, d.model_id, false);
        aliases.emplace_back(std::move(alias), d.model_id);
      }
    }
    devices.push_back(std::move(d));
  }
  return DeviceCatalog(std::move(rules), std::move(devices), std::move(aliases));
}

DeviceCatalog load_catalog(const std::filesystem::path& path) {
  return parse_catalog(read_file(path), path.string());
}

bool ResolvedDevices::complete(const SystemRecord& r) const {
  if (!cpu) return false;
  if (uses_accelerators(r) && !accelerator) return false;
  return true;
}

ResolvedDevices resolve_devices(const SystemRecord& r,
                                const DeviceCatalog& catalog,
                                const CarbonFactorTable& factors) {
  ResolvedDevices out;
  out.cpu = catalog.lookup(r.processor_model, DeviceKind::CPU);
  if (!out.cpu) {
    out.warnings.push_back("processor '" + r.processor_model + "' not in catalog");
  }
  if (!uses_accelerators(r)) return out;

  if (r.accelerator_model) {
    out.accelerator = catalog.lookup(*r.accelerator_model, DeviceKind::Accelerator);
  }
  if (!out.accelerator) {
    const std::string raw = r.accelerator_model.value_or("");
    if (factors.proxy_accelerator) {
      out.accelerator = *factors.proxy_accelerator;
      out.accelerator_is_proxy = true;
      out.warnings.push_back(proxy_warning(raw, *factors.proxy_accelerator));
    } else {
      out.warnings.push_back(
          (raw.empty() ? std::string("unnamed accelerator")
                       : "accelerator '" + raw + "'") +
          " not in catalog and no proxy configured");
    }
  }
  return out;
}

}  // namespace fleetcarbon
