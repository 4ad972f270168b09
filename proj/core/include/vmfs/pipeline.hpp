#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vmfs/clustering.hpp"
#include "vmfs/roughset.hpp"
#include "vmfs/selectors.hpp"
#include "vmfs/telemetry.hpp"

namespace vmfs {

enum class RankingRule {
  Standard,  ///< lower Davies-Bouldin, then higher Dunn
  Inverted,  ///< higher Davies-Bouldin, then lower Dunn
};

std::string_view to_string(RankingRule r);  // "standard" | "paper"
std::optional<RankingRule> parse_ranking(std::string_view s);

struct RunConfig {
  std::vector<SelectorKind> selectors{std::begin(kAllSelectors), std::end(kAllSelectors)};
  int k = 4;
  std::uint64_t seed = 1;
  /// Empty keeps every resource group present in the dataset.
  std::set<Resource> resources;
  /// Run each selector per resource group and union the picks, instead of
  /// once over all retained columns.
  bool per_resource = false;
  RankingRule ranking = RankingRule::Standard;

  CfsOptions cfs;
  ReliefOptions relief;
  SelectionPolicy chi = Threshold{kChiSquareCritical};
  WrapperMode wrapper = WrapperMode::Greedy;
  UsqrOptions usqr;
  KMeansOptions kmeans{300, 1e-6, 10};

  /// Record per-selector wall time. Off by default so reports stay byte-stable.
  bool record_timing = false;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

struct DatasetFingerprint {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string hash;  ///< FNV-1a 64 of the canonical content, hex

  bool operator==(const DatasetFingerprint&) const = default;
};

DatasetFingerprint fingerprint(const LabeledDataset& ds);

struct SelectorResult {
  SelectorKind selector = SelectorKind::Cfs;
  std::vector<std::string> features;
  std::optional<double> db;
  std::optional<double> dunn;
  double ms = 0.0;
  std::optional<std::string> error;

  bool operator==(const SelectorResult&) const = default;
};

struct ComparisonReport {
  RunConfig config;
  DatasetFingerprint dataset;
  std::vector<SelectorResult> results;
  std::vector<SelectorKind> rank_db;    ///< ascending Davies-Bouldin
  std::vector<SelectorKind> rank_dunn;  ///< descending Dunn
  SelectorKind winner = SelectorKind::Cfs;
  std::vector<std::string> errata;

  bool operator==(const ComparisonReport&) const = default;
};

struct SelectorScore {
  SelectorKind selector = SelectorKind::Cfs;
  double db = 0.0;
  double dunn = 0.0;
};

struct Ranking {
  std::vector<SelectorKind> by_db;    ///< ascending DB, ties by name
  std::vector<SelectorKind> by_dunn;  ///< descending Dunn, ties by name
  SelectorKind winner = SelectorKind::Cfs;
  std::vector<std::string> notes;
};

/// Orders selectors by both indices and picks a winner: under Standard the
/// lowest DB (higher Dunn, then name, break ties); Inverted inverts both
/// directions. Non-finite entries are dropped and noted. Throws PipelineError
/// when nothing is rankable.
Ranking rank_selectors(const std::vector<SelectorScore>& scores, RankingRule rule);

/// The DB / Dunn pairs of the published five-way comparison, verbatim.
std::vector<SelectorScore> reference_scores();

/// Notes on ranking-direction conflicts, derived by ranking reference_scores().
std::vector<std::string> ranking_errata();

/// Rows of the clustering matrix: per-VM means over `features`, z-scored per
/// column.
Matrix vm_feature_matrix(const LabeledDataset& ds, const std::vector<std::string>& features);

/// Runs one selector over ds (honouring cfg.per_resource and the selector's
/// options).
FeatureSubset run_selector(const LabeledDataset& ds, SelectorKind kind, const RunConfig& cfg);

struct Execution {
  /// Run selectors as concurrent tasks. Results do not depend on this.
  bool parallel = true;
};

/// Select, cluster per-VM means on the selection, score, rank.
ComparisonReport run_comparison(const LabeledDataset& ds, const RunConfig& cfg,
                                const Execution& exec = {});

enum class ReportFormat { Json, Markdown };
std::string render_report(const ComparisonReport& report, ReportFormat format);

}  // namespace vmfs
