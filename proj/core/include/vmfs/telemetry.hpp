#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vmfs {

enum class Resource { Cpu, Memory, Disk, Network, Power };

/// Workload archetype a VM was loaded with.
enum class Workload { Cpu, Mem, Disk, Net };

inline constexpr Resource kAllResources[] = {Resource::Cpu, Resource::Memory, Resource::Disk,
                                             Resource::Network, Resource::Power};
inline constexpr Workload kAllWorkloads[] = {Workload::Cpu, Workload::Mem, Workload::Disk,
                                             Workload::Net};

/// "CPU", "MEMORY", "DISK", "NETWORK", "POWER".
std::string_view to_string(Resource r);
/// "cpu", "mem", "disk", "net" (the label sidecar vocabulary).
std::string_view to_string(Workload w);
std::optional<Resource> parse_resource(std::string_view s);
std::optional<Workload> parse_workload(std::string_view s);

/// Counter names tracked per resource group, in esxtop display order.
std::span<const std::string_view> table_metrics(Resource r);

/// Resource group of a bare metric name. Names shared between groups (`%USED`
/// is both a CPU and a Power counter) resolve to the first group in
/// kAllResources order.
std::optional<Resource> resource_of_metric(std::string_view metric);

struct FeatureColumn {
  std::string name;
  Resource resource = Resource::Cpu;
  std::vector<double> values;

  /// Qualified identifier "RESOURCE:name"; unique within a dataset.
  std::string key() const;

  bool operator==(const FeatureColumn&) const = default;
};

struct RowId {
  std::string vm;
  std::int64_t t = 0;

  bool operator==(const RowId&) const = default;
};

/// Numeric feature matrix in column-major form. Rows are (VM, timestamp)
/// samples; labels, when present, carry each row's workload class.
struct LabeledDataset {
  std::vector<FeatureColumn> columns;
  std::vector<RowId> rows;
  std::optional<std::vector<Workload>> labels;

  std::size_t row_count() const noexcept { return rows.size(); }
  std::size_t col_count() const noexcept { return columns.size(); }
  bool has_labels() const noexcept { return labels.has_value(); }

  /// Throws DimensionError on ragged columns or a label vector of the wrong
  /// length, and Error on duplicate feature keys.
  void validate() const;

  /// Column index by qualified key ("CPU:%USED") or by bare name when the bare
  /// name is unambiguous. Throws AttributeError otherwise.
  std::size_t find(std::string_view key_or_name) const;

  std::vector<std::string> keys() const;

  /// Distinct VM names in first-appearance order.
  std::vector<std::string> vm_names() const;

  bool operator==(const LabeledDataset&) const = default;
};

struct ParseDiagnostics {
  std::size_t skipped_count = 0;
  std::vector<std::string> skipped;  ///< header cells that were ignored
};

struct ParseResult {
  LabeledDataset dataset;
  ParseDiagnostics diagnostics;
};

/// Reads the esxtop batch CSV dialect:
///
///   "(PDH-CSV 4.0) (UTC)(0)","VM(vm01)\%USED","Disk(vm01)\CMDS/s",...
///   "10/19/2026 10:00:00","12.5","301.0",...
///
/// Every header cell after the first is `GROUP(instance)\metric` with GROUP one
/// of VM, Physical Cpu, Memory, Disk, Network, Power. The instance names the VM.
/// Each data line becomes one row per instance (instances in header order), so
/// rows come out timestamp-major with `t` the 0-based data-line index.
/// Unknown metrics are skipped and tallied. Every instance must report the same
/// metric set.
ParseResult parse_esxtop_csv(std::istream& in);
ParseResult parse_esxtop_csv(std::string_view text);

/// Inverse of parse_esxtop_csv for datasets whose rows form a complete
/// (timestamp x VM) grid in timestamp-major order.
std::string write_esxtop_csv(const LabeledDataset& ds);

/// Attaches labels from a vm -> workload map. Throws Error for VMs missing from
/// the map.
LabeledDataset attach_labels(LabeledDataset ds, const std::map<std::string, Workload>& labels);

LabeledDataset filter_by_resource(const LabeledDataset& ds, const std::set<Resource>& resources);

/// (x - mean) / stddev per column with population stddev; constant columns map
/// to zero.
LabeledDataset zscore_normalize(const LabeledDataset& ds);
std::vector<double> zscore(std::span<const double> column);

/// Integer-binned view of a LabeledDataset.
struct DiscreteDataset {
  std::vector<std::string> names;
  /// codes[c][r] in [0, bin_count[c]).
  std::vector<std::vector<int>> codes;
  /// Interior cut points per column, strictly increasing. Code b covers
  /// (edges[b-1], edges[b]].
  std::vector<std::vector<double>> bin_edges;
  std::vector<std::string> diagnostics;

  std::size_t row_count() const noexcept { return codes.empty() ? 0 : codes.front().size(); }
  std::size_t col_count() const noexcept { return codes.size(); }
  int bins(std::size_t column) const noexcept {
    return static_cast<int>(bin_edges[column].size()) + 1;
  }
  std::size_t index_of(std::string_view name) const;
};

/// Equal-frequency binning at the i/bins quantiles; values equal to a cut go to
/// the lower bin. Columns with too few distinct values degrade to fewer bins and
/// are noted in diagnostics.
DiscreteDataset equal_frequency_discretize(const LabeledDataset& ds, int bins);
/// Single column variant; returns codes and fills `edges`.
std::vector<int> equal_frequency_codes(std::span<const double> column, int bins,
                                       std::vector<double>& edges);

/// true iff value > median.
std::vector<bool> median_binarize(std::span<const double> column);

/// Per-VM mean rows (VMs in first-appearance order) over the given columns.
struct VmMatrix {
  std::vector<std::string> vms;
  std::vector<std::vector<double>> rows;
  std::vector<std::optional<Workload>> labels;
};
VmMatrix per_vm_means(const LabeledDataset& ds, std::span<const std::size_t> columns);

}  // namespace vmfs
