#include "fleetcarbon/ingest.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "yaml_util.hpp"

namespace fleetcarbon {

namespace {

// Column contract. Names follow the top500.org list export where a column
// exists there; the remaining metric columns are extensions.
constexpr std::string_view kColRank = "Rank";
constexpr std::string_view kColName = "Name";
constexpr std::string_view kColSite = "Site";
constexpr std::string_view kColCountry = "Country";
constexpr std::string_view kColYear = "Year";
constexpr std::string_view kColCores = "Total Cores";
constexpr std::string_view kColRmax = "Rmax [TFlop/s]";
constexpr std::string_view kColRpeak = "Rpeak [TFlop/s]";
constexpr std::string_view kColPower = "Power (kW)";
constexpr std::string_view kColProcessor = "Processor";
constexpr std::string_view kColAccel = "Accelerator/Co-Processor";
constexpr std::string_view kColNodes = "Compute Nodes";
constexpr std::string_view kColGpus = "GPUs";
constexpr std::string_view kColCpus = "CPUs";
constexpr std::string_view kColMemCap = "Memory Capacity [GB]";
constexpr std::string_view kColMemType = "Memory Type";
constexpr std::string_view kColSsd = "SSD Capacity [GB]";
constexpr std::string_view kColUtil = "System Utilization";
constexpr std::string_view kColEnergy = "Annual Energy [kWh]";

constexpr std::array<std::string_view, 8> kRequired = {
    kColRank, kColName, kColSite, kColCountry,
    kColCores, kColRmax, kColRpeak, kColProcessor};

constexpr std::array<std::string_view, 19> kWritten = {
    kColRank,   kColName,  kColSite,  kColCountry, kColYear,
    kColCores,  kColRmax,  kColRpeak, kColPower,   kColProcessor,
    kColAccel,  kColNodes, kColGpus,  kColCpus,    kColMemCap,
    kColMemType, kColSsd,  kColUtil,  kColEnergy};

// Present in the top500.org export but not used by the model.
const std::set<std::string, std::less<>> kKnownUnused = {
    "Previous Rank", "First Appearance", "First Rank", "Computer",
    "Manufacturer", "Segment", "Accelerator/Co-Processor Cores", "Nmax",
    "Nhalf", "HPCG [TFlop/s]", "Power Source", "Power Efficiency [GFlops/Watts]",
    "Architecture", "Processor Technology", "Processor Speed (MHz)",
    "Operating System", "OS Family", "Cores per Socket", "Processor Generation",
    "System Model", "System Family", "Interconnect Family", "Interconnect",
    "Continent", "Site ID", "System ID", "Region"};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

struct CsvRow {
  int line = 0;
  std::vector<std::string> cells;
};

// Splits delimiter-separated text with double-quote escaping. Blank lines and
// lines starting with '#' outside quotes are skipped; comment text is
// returned separately so the schema version can be read from it.
class CsvReader {
 public:
  CsvReader(std::istream& in, char delim, std::string source)
      : in_(in), delim_(delim), source_(std::move(source)) {}

  bool next(CsvRow& row) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty()) continue;
      if (line.front() == '#') {
        comments_.emplace_back(line_no_, line.substr(1));
        continue;
      }
      row.line = line_no_;
      row.cells.clear();
      split(line, row);
      return true;
    }
    return false;
  }

  const std::vector<std::pair<int, std::string>>& comments() const {
    return comments_;
  }

 private:
  void split(std::string line, CsvRow& row) {
    std::string cell;
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
      if (i == line.size()) {
        if (!quoted) break;
        // Quoted cell spans a newline.
        std::string more;
        if (!std::getline(in_, more)) {
          throw MalformedRow(source_, row.line, "unterminated quoted field");
        }
        ++line_no_;
        if (!more.empty() && more.back() == '\r') more.pop_back();
        cell.push_back('\n');
        line = std::move(more);
        i = 0;
        continue;
      }
      const char c = line[i++];
      if (quoted) {
        if (c == '"') {
          if (i < line.size() && line[i] == '"') {
            cell.push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          cell.push_back(c);
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == delim_) {
        row.cells.push_back(trim(cell));
        cell.clear();
      } else {
        cell.push_back(c);
      }
    }
    row.cells.push_back(trim(cell));
  }

  std::istream& in_;
  char delim_;
  std::string source_;
  int line_no_ = 0;
  std::vector<std::pair<int, std::string>> comments_;
};

class RowParser {
 public:
  RowParser(const std::string& source, const CsvRow& row,
            const std::map<std::string, std::size_t, std::less<>>& columns)
      : source_(source), row_(row), columns_(columns) {}

  std::string cell(std::string_view col) const {
    auto it = columns_.find(col);
    if (it == columns_.end() || it->second >= row_.cells.size()) return {};
    return row_.cells[it->second];
  }

  [[noreturn]] void fail(const std::string& reason) const {
    throw MalformedRow(source_, row_.line, reason);
  }

  std::optional<double> real(std::string_view col) const {
    const auto s = cell(col);
    if (s.empty()) return std::nullopt;
    double v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) {
      fail("non-numeric value '" + s + "' in column '" + std::string(col) + "'");
    }
    return v;
  }

  std::optional<std::int64_t> integer(std::string_view col) const {
    const auto s = cell(col);
    if (s.empty()) return std::nullopt;
    std::int64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) {
      fail("non-integer value '" + s + "' in column '" + std::string(col) + "'");
    }
    return v;
  }

  template <typename T>
  T required(std::optional<T> v, std::string_view col) const {
    if (!v) fail("missing value in required column '" + std::string(col) + "'");
    return *v;
  }

 private:
  const std::string& source_;
  const CsvRow& row_;
  const std::map<std::string, std::size_t, std::less<>>& columns_;
};

SystemRecord parse_record(const RowParser& p) {
  SystemRecord r;
  const auto rank = p.required(p.integer(kColRank), kColRank);
  if (rank <= 0 || rank > std::numeric_limits<int>::max())
    p.fail("rank must be a positive integer");
  r.rank = static_cast<int>(rank);
  r.name = p.cell(kColName);
  if (r.name.empty()) p.fail("missing value in required column 'Name'");
  r.site = p.cell(kColSite);
  r.region = p.cell(kColCountry);
  r.rmax_tflops = p.required(p.real(kColRmax), kColRmax);
  r.rpeak_tflops = p.required(p.real(kColRpeak), kColRpeak);
  r.total_cores = p.required(p.integer(kColCores), kColCores);
  r.processor_model = p.cell(kColProcessor);
  if (r.processor_model.empty()) p.fail("missing value in required column 'Processor'");

  if (auto accel = p.cell(kColAccel); !accel.empty() && accel != "None") {
    r.accelerator_model = accel;
  }
  if (auto y = p.integer(kColYear)) r.operation_year = static_cast<int>(*y);
  if (auto pw = p.real(kColPower)) {
    if (*pw == 0.0) p.fail("Power (kW) is 0; leave the cell blank when unknown");
    r.reported_power_kw = pw;
  }
  r.num_nodes = p.integer(kColNodes);
  r.num_gpus = p.integer(kColGpus);
  r.num_cpus = p.integer(kColCpus);
  r.memory_capacity_gb = p.real(kColMemCap);
  if (auto mt = p.cell(kColMemType); !mt.empty()) {
    auto t = parse_memory_type(mt);
    if (!t) p.fail("unknown memory type '" + mt + "'");
    r.memory_type = t;
  }
  r.ssd_capacity_gb = p.real(kColSsd);
  r.utilization = p.real(kColUtil);
  r.annual_energy_kwh = p.real(kColEnergy);

  stamp_provenance(r, Provenance::Top500Org);
  if (auto v = check_invariants(r); !v.empty()) p.fail(v.front());
  return r;
}

void check_fleet_schema_comment(const CsvReader& reader, const std::string& source) {
  for (const auto& [line, text] : reader.comments()) {
    const auto t = trim(text);
    constexpr std::string_view key = "schema_version";
    if (!t.starts_with(key)) continue;
    auto rest = trim(std::string_view(t).substr(key.size()));
    if (!rest.empty() && (rest.front() == ':' || rest.front() == '=')) rest = trim(rest.substr(1));
    if (rest != std::to_string(kFleetSchemaVersion)) {
      throw InputError(source, line, "unsupported fleet schema_version '" + rest + "'");
    }
  }
}

std::string quote_cell(std::string_view s, char delim) {
  if (s.find_first_of(std::string{delim, '"', '\n'}) == std::string_view::npos &&
      (s.empty() || (s.front() != ' ' && s.back() != ' ' && s.front() != '#'))) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

template <typename T>
std::string opt_num(const std::optional<T>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view fleet_column(Field f) {
  switch (f) {
    case Field::OperationYear: return kColYear;
    case Field::ComputeNodes: return kColNodes;
    case Field::Gpus: return kColGpus;
    case Field::Cpus: return kColCpus;
    case Field::MemoryCapacity: return kColMemCap;
    case Field::MemoryType: return kColMemType;
    case Field::SsdCapacity: return kColSsd;
    case Field::Utilization: return kColUtil;
    case Field::AnnualEnergy: return kColEnergy;
    case Field::ReportedPower: return kColPower;
    case Field::Region: return kColCountry;
    case Field::ProcessorModel: return kColProcessor;
    case Field::AcceleratorModel: return kColAccel;
  }
  return {};
}

Fleet parse_fleet(std::istream& in, const FleetParseOptions& options) {
  const auto& source = options.source_name;
  CsvReader reader(in, options.delimiter, source);
  Fleet fleet;
  fleet.scenario = Scenario::Baseline;

  CsvRow header;
  if (!reader.next(header)) throw InputError(source, 0, "missing header row");
  check_fleet_schema_comment(reader, source);

  std::map<std::string, std::size_t, std::less<>> columns;
  for (std::size_t i = 0; i < header.cells.size(); ++i) {
    const auto& name = header.cells[i];
    if (!columns.emplace(name, i).second) {
      throw InputError(source, header.line, "duplicate column '" + name + "'");
    }
    const bool known =
        std::find(kWritten.begin(), kWritten.end(), name) != kWritten.end() ||
        kKnownUnused.contains(name);
    if (!known) {
      fleet.warnings.push_back(fmt::format("{}:{}: ignoring unknown column '{}'",
                                           source, header.line, name));
    }
  }
  for (auto col : kRequired) {
    if (!columns.contains(col)) {
      throw InputError(source, header.line,
                       "header lacks required column '" + std::string(col) + "'");
    }
  }

  std::map<int, int> rank_line;
  CsvRow row;
  while (reader.next(row)) {
    if (row.cells.size() != header.cells.size()) {
      throw MalformedRow(source, row.line,
                         fmt::format("expected {} fields, found {}",
                                     header.cells.size(), row.cells.size()));
    }
    RowParser parser(source, row, columns);
    auto rec = parse_record(parser);
    if (!rank_line.emplace(rec.rank, row.line).second) {
      throw DuplicateRank(source, row.line, rec.rank);
    }
    fleet.records.push_back(std::move(rec));
  }
  std::sort(fleet.records.begin(), fleet.records.end(),
            [](const auto& a, const auto& b) { return a.rank < b.rank; });
  return fleet;
}

Fleet parse_fleet(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string(), 0, "cannot open file");
  return parse_fleet(in, FleetParseOptions{delimiter, path.string()});
}

std::string serialize_fleet(std::span<const SystemRecord> records, char delimiter) {
  std::string out = fmt::format("# schema_version: {}\n", kFleetSchemaVersion);
  for (std::size_t i = 0; i < kWritten.size(); ++i) {
    if (i) out.push_back(delimiter);
    out += quote_cell(kWritten[i], delimiter);
  }
  out.push_back('\n');
  for (const auto& r : records) {
    const std::array<std::string, kWritten.size()> cells = {
        std::to_string(r.rank),
        r.name,
        r.site,
        r.region,
        opt_num(r.operation_year),
        std::to_string(r.total_cores),
        fmt::format("{}", r.rmax_tflops),
        fmt::format("{}", r.rpeak_tflops),
        opt_num(r.reported_power_kw),
        r.processor_model,
        r.accelerator_model.value_or(""),
        opt_num(r.num_nodes),
        opt_num(r.num_gpus),
        opt_num(r.num_cpus),
        opt_num(r.memory_capacity_gb),
        r.memory_type ? std::string(to_string(*r.memory_type)) : std::string(),
        opt_num(r.ssd_capacity_gb),
        opt_num(r.utilization),
        opt_num(r.annual_energy_kwh),
    };
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out.push_back(delimiter);
      out += quote_cell(cells[i], delimiter);
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<OverlayPatch> parse_overlay(std::string_view yaml_text,
                                        const std::string& source_name) {
  const detail::YamlReader<InputError> rd(source_name);
  const auto root = rd.parse(yaml_text);
  rd.check_schema_version(root, kOverlaySchemaVersion);

  std::vector<OverlayPatch> patches;
  const auto list = root["patches"];
  if (!list || list.IsNull()) return patches;
  if (!list.IsSequence()) rd.fail(list, "patches must be a list");

  for (const auto& e : list) {
    if (!e.IsMap()) rd.fail(e, "patch must be a mapping");
    OverlayPatch p;
    p.line = detail::line_of(e);
    const auto rank = e["rank"];
    const auto name = e["name"];
    if (rank && name) rd.fail(e, "patch must match on rank or name, not both");
    if (rank) {
      const auto v = rd.integer(rank, "rank");
      if (v <= 0 || v > std::numeric_limits<int>::max())
        rd.fail(rank, "rank must be a positive integer");
      p.match_key = static_cast<int>(v);
    } else if (name) {
      p.match_key = rd.text(name, "name");
    } else {
      rd.fail(e, "patch needs a 'rank' or 'name' match key");
    }
    if (auto o = e["override"]) p.override_existing = rd.boolean(o, "override");
    if (auto s = e["source"]) p.source_note = rd.text(s, "source");

    const auto fields = rd.require(e, "set");
    if (!fields.IsMap()) rd.fail(fields, "'set' must be a mapping");
    for (const auto& kv : fields) {
      const auto key = rd.text(kv.first, "field name");
      const auto field = parse_field_key(key);
      if (!field) rd.fail(kv.first, "unknown field '" + key + "'");
      const auto& v = kv.second;
      PatchValue value;
      switch (*field) {
        case Field::OperationYear:
        case Field::ComputeNodes:
        case Field::Gpus:
        case Field::Cpus:
          value = static_cast<std::int64_t>(rd.integer(v, key));
          break;
        case Field::MemoryCapacity:
        case Field::SsdCapacity:
        case Field::Utilization:
        case Field::AnnualEnergy:
        case Field::ReportedPower:
          value = rd.number(v, key);
          break;
        case Field::MemoryType: {
          auto t = parse_memory_type(rd.text(v, key));
          if (!t) rd.fail(v, "unknown memory type '" + v.Scalar() + "'");
          value = *t;
          break;
        }
        case Field::Region:
        case Field::ProcessorModel:
        case Field::AcceleratorModel:
          value = rd.text(v, key);
          if (std::get<std::string>(value).empty()) rd.fail(v, key + " must not be empty");
          break;
      }
      p.fields.emplace(*field, std::move(value));
    }
    if (p.fields.empty()) rd.fail(fields, "patch sets no fields");
    patches.push_back(std::move(p));
  }
  return patches;
}

std::vector<OverlayPatch> load_overlay(const std::filesystem::path& path) {
  return parse_overlay(read_text(path), path.string());
}

namespace {

void set_field(SystemRecord& r, Field f, const PatchValue& v) {
  auto as_int = [&] { return std::get<std::int64_t>(v); };
  auto as_real = [&] { return std::get<double>(v); };
  auto as_text = [&] { return std::get<std::string>(v); };
  switch (f) {
    case Field::OperationYear: r.operation_year = static_cast<int>(as_int()); break;
    case Field::ComputeNodes: r.num_nodes = as_int(); break;
    case Field::Gpus: r.num_gpus = as_int(); break;
    case Field::Cpus: r.num_cpus = as_int(); break;
    case Field::MemoryCapacity: r.memory_capacity_gb = as_real(); break;
    case Field::MemoryType: r.memory_type = std::get<MemoryType>(v); break;
    case Field::SsdCapacity: r.ssd_capacity_gb = as_real(); break;
    case Field::Utilization: r.utilization = as_real(); break;
    case Field::AnnualEnergy: r.annual_energy_kwh = as_real(); break;
    case Field::ReportedPower: r.reported_power_kw = as_real(); break;
    case Field::Region: r.region = as_text(); break;
    case Field::ProcessorModel: r.processor_model = as_text(); break;
    case Field::AcceleratorModel: r.accelerator_model = as_text(); break;
  }
}

std::string describe(const OverlayPatch& p) {
  if (std::holds_alternative<int>(p.match_key))
    return "rank " + std::to_string(std::get<int>(p.match_key));
  return "name '" + std::get<std::string>(p.match_key) + "'";
}

}  // namespace

Fleet apply_overlay(const Fleet& fleet, std::span<const OverlayPatch> patches,
                    const std::string& source_name) {
  Fleet out = fleet;
  out.scenario = Scenario::BaselinePlusPublic;

  for (const auto& patch : patches) {
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < out.records.size(); ++i) {
      const auto& r = out.records[i];
      const bool match = std::holds_alternative<int>(patch.match_key)
                             ? r.rank == std::get<int>(patch.match_key)
                             : r.name == std::get<std::string>(patch.match_key);
      if (match) hits.push_back(i);
    }
    if (hits.empty()) {
      throw UnresolvedPatch(source_name, patch.line,
                            "patch for " + describe(patch) + " matches no system");
    }
    if (hits.size() > 1) {
      throw AmbiguousMatch(source_name, patch.line,
                           fmt::format("patch for {} matches {} systems",
                                       describe(patch), hits.size()));
    }
    auto& rec = out.records[hits.front()];
    for (const auto& [field, value] : patch.fields) {
      if (rec.provenance_of(field) == Provenance::Top500Org && !patch.override_existing) {
        out.warnings.push_back(fmt::format(
            "{}:{}: rank {} keeps list value of {} (patch lacks override)",
            source_name, patch.line, rec.rank, field_key(field)));
        continue;
      }
      set_field(rec, field, value);
      rec.provenance[field] = Provenance::PublicOverlay;
    }
    if (auto v = check_invariants(rec); !v.empty()) {
      throw InputError(source_name, patch.line,
                       fmt::format("patch for {} breaks record: {}", describe(patch),
                                   v.front()));
    }
  }
  return out;
}

CompletenessSummary completeness_summary(std::span<const SystemRecord> records) {
  CompletenessSummary out;
  for (auto f : kTableMetrics) {
    const auto missing = std::count_if(records.begin(), records.end(), [f](const auto& r) {
      return r.provenance_of(f) == Provenance::Absent;
    });
    out.emplace_back(f, static_cast<int>(missing));
  }
  return out;
}

}  // namespace fleetcarbon
