#include "vmfs/telemetry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "vmfs/error.hpp"

namespace vmfs {

namespace {

constexpr std::string_view kCpuMetrics[] = {
    "%USED", "%RUN",   "%SYS",   "%WAIT",  "%VMWAIT", "%RDY",  "%IDLE",
    "%OVRP", "%CSTP", "%MLMTD", "%SWPWT", "SWTCH/s", "MIG/s"};

constexpr std::string_view kMemoryMetrics[] = {
    "SWCUR",   "SWTGT",   "SWR/s",   "SWW/s",   "LLSWR/s", "LLSWW/s", "CPTDR",   "CPTTGT",
    "ZERO",    "SHRD",    "SHRDSVD", "COWH",    "NHN",     "NMIG",    "NRMEM",   "NLMEM",
    "N_L",     "GST_ND0", "OVD_ND0", "GST_ND1", "OVD_ND1", "OVHDUM",  "OVHD",    "OVHDMAX",
    "CMTTGT",  "CMTCHRG", "CMTPPS",  "CACHESZ", "CACHUSD", "ZIP/s",   "UNZIP/s", "MEMSZ",
    "GRANT",   "SZTGT",   "TCHD",    "TCHD_W",  "ACTV",    "ACTVS",   "ACTVF",   "ACTVN",
    "MCTLSZ",  "MCTLTGT", "MCTLMAX"};

constexpr std::string_view kDiskMetrics[] = {"CMDS/s",   "READS/s", "WRITES/s", "MBREAD/s",
                                             "MBWRTN/s", "LAT/rd",  "LAT/wr"};

constexpr std::string_view kNetworkMetrics[] = {
    "PKTTX/s",    "MbTX/s",     "PKTRX/s",    "MbRX/s",     "%DRPTX",    "%DRPRX",
    "ACTN/s",     "PKTTXMUL/s", "PKTRXMUL/s", "PKTTXBRD/s", "PKTRXBRD/s"};

constexpr std::string_view kPowerMetrics[] = {"%USED", "%UTIL", "%C0", "%C1", "%C2",
                                              "%C3",   "%T0",   "%T1", "%T2", "%T3",
                                              "%T4",   "%T5",   "%T6", "%T7"};

std::optional<Resource> resource_of_group(std::string_view group) {
  if (group == "Physical Cpu") return Resource::Cpu;
  if (group == "Memory") return Resource::Memory;
  if (group == "Disk") return Resource::Disk;
  if (group == "Network") return Resource::Network;
  if (group == "Power") return Resource::Power;
  return std::nullopt;
}

bool in_table(Resource r, std::string_view metric) {
  auto names = table_metrics(r);
  return std::find(names.begin(), names.end(), metric) != names.end();
}

// RFC 4180-style split: quoted cells, "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(ch);
      }
    } else if (ch == '"') {
      if (!cell.empty() || was_quoted)
        throw ParseError(line_no, cells.size() + 1, "unexpected quote");
      quoted = was_quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw ParseError(line_no, cells.size() + 1, "text after closing quote");
      cell.push_back(ch);
    }
  }
  if (quoted) throw ParseError(line_no, cells.size() + 1, "unterminated quote");
  cells.push_back(std::move(cell));
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct HeaderCell {
  std::string group;
  std::string instance;
  std::string metric;
};

std::optional<HeaderCell> split_header_cell(std::string_view cell) {
  auto open = cell.find('(');
  auto close = cell.find(")\\", open == std::string_view::npos ? 0 : open);
  if (open == std::string_view::npos || close == std::string_view::npos || open == 0 ||
      close <= open + 1 || close + 2 >= cell.size())
    return std::nullopt;
  return HeaderCell{std::string(cell.substr(0, open)),
                    std::string(cell.substr(open + 1, close - open - 1)),
                    std::string(cell.substr(close + 2))};
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view to_string(Resource r) {
  switch (r) {
    case Resource::Cpu: return "CPU";
    case Resource::Memory: return "MEMORY";
    case Resource::Disk: return "DISK";
    case Resource::Network: return "NETWORK";
    case Resource::Power: return "POWER";
  }
  return "?";
}

std::string_view to_string(Workload w) {
  switch (w) {
    case Workload::Cpu: return "cpu";
    case Workload::Mem: return "mem";
    case Workload::Disk: return "disk";
    case Workload::Net: return "net";
  }
  return "?";
}

std::optional<Resource> parse_resource(std::string_view s) {
  std::string up(s);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Resource r : kAllResources)
    if (to_string(r) == up) return r;
  if (up == "MEM") return Resource::Memory;
  if (up == "NET") return Resource::Network;
  return std::nullopt;
}

std::optional<Workload> parse_workload(std::string_view s) {
  for (Workload w : kAllWorkloads)
    if (to_string(w) == s) return w;
  return std::nullopt;
}

std::span<const std::string_view> table_metrics(Resource r) {
  switch (r) {
    case Resource::Cpu: return kCpuMetrics;
    case Resource::Memory: return kMemoryMetrics;
    case Resource::Disk: return kDiskMetrics;
    case Resource::Network: return kNetworkMetrics;
    case Resource::Power: return kPowerMetrics;
  }
  return {};
}

std::optional<Resource> resource_of_metric(std::string_view metric) {
  for (Resource r : kAllResources)
    if (in_table(r, metric)) return r;
  return std::nullopt;
}

std::string FeatureColumn::key() const { return std::string(to_string(resource)) + ":" + name; }

void LabeledDataset::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& col : columns) {
    if (col.values.size() != rows.size())
      throw DimensionError("column " + col.key() + " has " + std::to_string(col.values.size()) +
                           " values for " + std::to_string(rows.size()) + " rows");
    if (!seen.insert(col.key()).second) throw Error("duplicate feature " + col.key());
  }
  if (labels && labels->size() != rows.size())
    throw DimensionError("label count " + std::to_string(labels->size()) + " != row count " +
                         std::to_string(rows.size()));
}

std::size_t LabeledDataset::find(std::string_view key_or_name) const {
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].key() == key_or_name) return i;
    if (columns[i].name == key_or_name) {
      if (hit) throw AttributeError("ambiguous feature name '" + std::string(key_or_name) +
                                    "'; qualify it as RESOURCE:name");
      hit = i;
    }
  }
  if (!hit) throw AttributeError("unknown feature '" + std::string(key_or_name) + "'");
  return *hit;
}

std::vector<std::string> LabeledDataset::keys() const {
  std::vector<std::string> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.key());
  return out;
}

std::vector<std::string> LabeledDataset::vm_names() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& r : rows)
    if (seen.insert(r.vm).second) out.push_back(r.vm);
  return out;
}

ParseResult parse_esxtop_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_esxtop_csv(in);
}

ParseResult parse_esxtop_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) throw ParseError(1, 0, "missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  auto header = split_csv_line(line, 1);
  if (header.size() < 2) throw ParseError(1, 0, "header has no counter cells");

  // Header cell -> (instance slot, feature slot), or skipped.
  struct Slot {
    std::size_t instance;
    std::size_t feature;
  };
  std::vector<std::optional<Slot>> slots(header.size());
  std::vector<std::string> instances;
  std::unordered_map<std::string, std::size_t> instance_index;
  std::vector<std::pair<Resource, std::string>> features;
  std::map<std::pair<Resource, std::string>, std::size_t> feature_index;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  ParseDiagnostics diag;

  for (std::size_t c = 1; c < header.size(); ++c) {
    auto cell = split_header_cell(header[c]);
    if (!cell) throw ParseError(1, c + 1, "malformed header cell '" + header[c] + "'");
    std::optional<Resource> resource;
    if (cell->group == "VM") {
      resource = resource_of_metric(cell->metric);
    } else if (auto g = resource_of_group(cell->group)) {
      if (in_table(*g, cell->metric)) resource = g;
    } else {
      throw ParseError(1, c + 1, "unknown counter group '" + cell->group + "'");
    }
    if (!resource) {
      ++diag.skipped_count;
      diag.skipped.push_back(header[c]);
      continue;
    }
    auto [iit, inew] = instance_index.try_emplace(cell->instance, instances.size());
    if (inew) instances.push_back(cell->instance);
    auto fkey = std::make_pair(*resource, cell->metric);
    auto [fit, fnew] = feature_index.try_emplace(fkey, features.size());
    if (fnew) features.push_back(fkey);
    if (!seen.emplace(iit->second, fit->second).second)
      throw ParseError(1, c + 1, "duplicate counter '" + header[c] + "'");
    slots[c] = Slot{iit->second, fit->second};
  }
  if (features.empty()) throw EmptyDatasetError("no recognized counters in header");
  if (seen.size() != instances.size() * features.size()) {
    for (std::size_t i = 0; i < instances.size(); ++i)
      for (std::size_t f = 0; f < features.size(); ++f)
        if (!seen.count({i, f}))
          throw ParseError(1, 0,
                           "instance '" + instances[i] + "' lacks counter " +
                               std::string(to_string(features[f].first)) + ":" +
                               features[f].second);
  }

  // values[f][t * instances + i]
  std::vector<std::vector<double>> values(features.size());
  std::size_t line_no = 1;
  std::size_t t = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line, line_no);
    if (cells.size() != header.size())
      throw ParseError(line_no, 0,
                       "expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()));
    for (auto& v : values) v.resize((t + 1) * instances.size());
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (!slots[c]) continue;
      auto num = parse_number(cells[c]);
      if (!num)
        throw ParseError(line_no, c + 1,
                         "non-numeric value '" + cells[c] + "' for " + header[c]);
      values[slots[c]->feature][t * instances.size() + slots[c]->instance] = *num;
    }
    ++t;
  }

  ParseResult out;
  out.diagnostics = std::move(diag);
  auto& ds = out.dataset;
  for (std::size_t step = 0; step < t; ++step)
    for (const auto& vm : instances)
      ds.rows.push_back(RowId{vm, static_cast<std::int64_t>(step)});
  // Columns follow Table order within each resource group.
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), 0);
  auto rank = [&](std::size_t f) {
    auto names = table_metrics(features[f].first);
    return std::make_pair(static_cast<int>(features[f].first),
                          std::find(names.begin(), names.end(), features[f].second) -
                              names.begin());
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rank(a) < rank(b); });
  for (std::size_t f : order)
    ds.columns.push_back(
        FeatureColumn{features[f].second, features[f].first, std::move(values[f])});
  return out;
}

std::string write_esxtop_csv(const LabeledDataset& ds) {
  ds.validate();
  auto vms = ds.vm_names();
  if (vms.empty() || ds.rows.size() % vms.size() != 0)
    throw DimensionError("rows do not form a complete timestamp x VM grid");
  const std::size_t steps = ds.rows.size() / vms.size();
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t i = 0; i < vms.size(); ++i) {
      const auto& r = ds.rows[t * vms.size() + i];
      if (r.vm != vms[i] || r.t != static_cast<std::int64_t>(t))
        throw DimensionError("rows are not in timestamp-major grid order");
    }

  auto group_of = [](const FeatureColumn& c) -> std::string {
    // VM group when the metric name resolves back to this resource.
    if (resource_of_metric(c.name) == c.resource) return "VM";
    switch (c.resource) {
      case Resource::Cpu: return "Physical Cpu";
      case Resource::Memory: return "Memory";
      case Resource::Disk: return "Disk";
      case Resource::Network: return "Network";
      case Resource::Power: return "Power";
    }
    return "VM";
  };
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q.push_back('"');
      q.push_back(ch);
    }
    q.push_back('"');
    return q;
  };

  std::string out = quote("(PDH-CSV 4.0) (UTC)(0)");
  for (const auto& vm : vms)
    for (const auto& c : ds.columns) out += "," + quote(group_of(c) + "(" + vm + ")\\" + c.name);
  out += "\n";
  for (std::size_t t = 0; t < steps; ++t) {
    out += quote("t" + std::to_string(t));
    for (std::size_t i = 0; i < vms.size(); ++i)
      for (const auto& c : ds.columns)
        out += "," + quote(format_double(c.values[t * vms.size() + i]));
    out += "\n";
  }
  return out;
}

LabeledDataset attach_labels(LabeledDataset ds, const std::map<std::string, Workload>& labels) {
  std::vector<Workload> out;
  out.reserve(ds.rows.size());
  for (const auto& r : ds.rows) {
    auto it = labels.find(r.vm);
    if (it == labels.end()) throw Error("no label for VM '" + r.vm + "'");
    out.push_back(it->second);
  }
  ds.labels = std::move(out);
  return ds;
}

LabeledDataset filter_by_resource(const LabeledDataset& ds, const std::set<Resource>& resources) {
  if (resources.empty()) throw EmptyDatasetError("empty resource filter");
  LabeledDataset out;
  out.rows = ds.rows;
  out.labels = ds.labels;
  for (const auto& c : ds.columns)
    if (resources.count(c.resource)) out.columns.push_back(c);
  if (out.columns.empty()) throw EmptyDatasetError("no columns match the resource filter");
  return out;
}

std::vector<double> zscore(std::span<const double> column) {
  std::vector<double> out(column.size(), 0.0);
  if (column.empty()) return out;
  auto [lo, hi] = std::minmax_element(column.begin(), column.end());
  if (*lo == *hi) return out;
  const double n = static_cast<double>(column.size());
  const double mean = std::accumulate(column.begin(), column.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : column) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  for (std::size_t i = 0; i < column.size(); ++i) out[i] = (column[i] - mean) / sd;
  return out;
}

LabeledDataset zscore_normalize(const LabeledDataset& ds) {
  if (ds.row_count() < 2) throw DimensionError("z-score needs at least 2 rows");
  LabeledDataset out = ds;
  for (auto& c : out.columns) c.values = zscore(c.values);
  return out;
}

std::size_t DiscreteDataset::index_of(std::string_view name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw AttributeError("unknown attribute '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names.begin());
}

std::vector<int> equal_frequency_codes(std::span<const double> column, int bins,
                                       std::vector<double>& edges) {
  if (bins < 2) throw DomainError("need at least 2 bins");
  if (column.size() < static_cast<std::size_t>(bins))
    throw DomainError("fewer rows than bins");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  edges.clear();
  for (int i = 1; i < bins; ++i) {
    // Order statistic at the i/bins quantile: the ceil(n*i/bins)-th smallest.
    std::size_t rank = (n * static_cast<std::size_t>(i) + bins - 1) / static_cast<std::size_t>(bins);
    double cut = sorted[rank - 1];
    if (cut >= sorted.back()) break;
    if (edges.empty() || cut > edges.back()) edges.push_back(cut);
  }
  std::vector<int> codes(n);
  for (std::size_t r = 0; r < n; ++r)
    codes[r] = static_cast<int>(std::lower_bound(edges.begin(), edges.end(), column[r]) -
                                edges.begin());
  return codes;
}

DiscreteDataset equal_frequency_discretize(const LabeledDataset& ds, int bins) {
  ds.validate();
  DiscreteDataset out;
  for (const auto& c : ds.columns) {
    std::vector<double> edges;
    out.codes.push_back(equal_frequency_codes(c.values, bins, edges));
    if (static_cast<int>(edges.size()) + 1 < bins)
      out.diagnostics.push_back(c.key() + ": degraded to " + std::to_string(edges.size() + 1) +
                                " bins");
    out.bin_edges.push_back(std::move(edges));
    out.names.push_back(c.key());
  }
  return out;
}

std::vector<bool> median_binarize(std::span<const double> column) {
  if (column.size() < 2) throw DomainError("median binarization needs at least 2 values");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median =
      n % 2 ? sorted[n / 2] : sorted[n / 2 - 1] + (sorted[n / 2] - sorted[n / 2 - 1]) / 2.0;
  std::vector<bool> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = column[i] > median;
  return out;
}

VmMatrix per_vm_means(const LabeledDataset& ds, std::span<const std::size_t> columns) {
  VmMatrix m;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> counts;
  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    auto [it, fresh] = index.try_emplace(ds.rows[r].vm, m.vms.size());
    if (fresh) {
      m.vms.push_back(ds.rows[r].vm);
      m.rows.emplace_back(columns.size(), 0.0);
      m.labels.push_back(ds.labels ? std::optional<Workload>((*ds.labels)[r]) : std::nullopt);
      counts.push_back(0);
    }
    auto& row = m.rows[it->second];
    for (std::size_t j = 0; j < columns.size(); ++j) row[j] += ds.columns[columns[j]].values[r];
    ++counts[it->second];
  }
  for (std::size_t v = 0; v < m.rows.size(); ++v)
    for (double& x : m.rows[v]) x /= static_cast<double>(counts[v]);
  return m;
}

}  // namespace vmfs
