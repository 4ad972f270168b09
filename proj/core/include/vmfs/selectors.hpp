#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vmfs/telemetry.hpp"

namespace vmfs {

enum class SelectorKind { Cfs, Relief, Chi2, Wrapper, Usqr };

inline constexpr SelectorKind kAllSelectors[] = {SelectorKind::Cfs, SelectorKind::Relief,
                                                 SelectorKind::Chi2, SelectorKind::Wrapper,
                                                 SelectorKind::Usqr};

/// "CFS", "RELIEF", "CHI2", "WRAPPER", "USQR".
std::string_view to_string(SelectorKind k);
/// Case-insensitive; also accepts "chi-square" and "roughset".
std::optional<SelectorKind> parse_selector(std::string_view s);

struct SearchLogEntry {
  std::vector<std::string> subset;
  double score = 0.0;

  bool operator==(const SearchLogEntry&) const = default;
};

/// Output of every selector. `scores` is selector specific: r_cf for CFS,
/// Relief weight, chi-square, marginal LOO accuracy gain, mean-dependency gain.
struct FeatureSubset {
  SelectorKind selector = SelectorKind::Cfs;
  std::vector<std::string> features;
  std::map<std::string, double> scores;
  std::vector<SearchLogEntry> search_log;
  /// Subset-level objective where one exists (merit, accuracy, mean dependency).
  std::optional<double> objective;
  std::vector<std::string> notes;

  bool operator==(const FeatureSubset&) const = default;
};

/// Integer class codes for a labeled dataset. Throws LabelsRequiredError.
std::vector<int> class_codes(const LabeledDataset& ds);

// -- correlation-based selection ------------------------------------------------

/// 2 I(X;Y) / (H(X) + H(Y)). 1 when both inputs are constant, 0 when exactly
/// one is.
double symmetrical_uncertainty(std::span<const int> x, std::span<const int> y);

/// Feature-class and feature-feature correlations for a fixed feature list.
class CorrelationCache {
 public:
  CorrelationCache() = default;
  /// `feature_feature` is row-major n x n; it is symmetrized and its diagonal
  /// forced to 1.
  CorrelationCache(std::vector<std::string> names, std::vector<double> feature_class,
                   std::vector<double> feature_feature);

  static CorrelationCache build(const DiscreteDataset& features, std::span<const int> classes);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  double feature_class(std::size_t i) const { return feature_class_[i]; }
  double feature_feature(std::size_t i, std::size_t j) const { return feature_feature_[i * size() + j]; }

 private:
  std::vector<std::string> names_;
  std::vector<double> feature_class_;
  std::vector<double> feature_feature_;
};

enum class CfsDenominator {
  Standard,  ///< sqrt(k + k(k-1) r_ff); a singleton scores its own r_cf
  KPlusOne,  ///< sqrt(k + k(k+1) r_ff)
};

/// k * mean(r_cf) / sqrt(k + k(k -/+ 1) * mean(r_ff)). mean(r_ff) runs over
/// distinct pairs; a singleton uses its self-correlation of 1. Returns 0 when
/// the radicand is 0.
double cfs_merit(std::span<const std::size_t> subset, const CorrelationCache& cache,
                 CfsDenominator mode = CfsDenominator::Standard);

struct CfsOptions {
  int bins = 10;
  /// Consecutive non-improving expansions before best-first search stops.
  int max_stale = 5;
  CfsDenominator denominator = CfsDenominator::Standard;

  bool operator==(const CfsOptions&) const = default;
};

/// Best-first forward search over CFS merit. Ties between subsets of equal
/// merit go to the smaller subset, then to the lexicographically smaller list
/// of sorted feature keys.
FeatureSubset cfs_select(const LabeledDataset& ds, const CfsOptions& options = {});

// -- Relief -------------------------------------------------------------------

struct Threshold {
  double value = 0.0;
  bool operator==(const Threshold&) const = default;
};
struct TopK {
  std::size_t k = 1;
  bool operator==(const TopK&) const = default;
};
/// Keep features scoring strictly above a threshold, or the k best.
using SelectionPolicy = std::variant<Threshold, TopK>;

struct ReliefOptions {
  /// Sampled instances; nullopt visits every instance once in canonical order.
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
  SelectionPolicy policy = Threshold{0.0};

  bool operator==(const ReliefOptions&) const = default;
};

/// Classic two-neighbour Relief on min-max scaled z-scores. Rows are sorted
/// canonically (label, then values) first so a full pass does not depend on
/// input row order.
std::map<std::string, double> relief_weights(const LabeledDataset& ds,
                                             std::optional<std::size_t> samples = std::nullopt,
                                             std::uint64_t seed = 0);

/// Orders by descending score, ties by key. An empty result falls back to the
/// single best feature and says so in the log and notes.
FeatureSubset relief_select(const std::map<std::string, double>& weights,
                            const SelectionPolicy& policy = Threshold{0.0});
FeatureSubset relief_select(const LabeledDataset& ds, const ReliefOptions& options);

// -- chi-square ---------------------------------------------------------------

/// 2x2 table: a = (t, c), b = (t, not c), c = (not t, c), d = (not t, not c).
struct Contingency {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 0;
};

/// N (ad - bc)^2 / ((a+b)(c+d)(a+c)(b+d)); 0 when a marginal is empty.
double chi_square_stat(const Contingency& t);

/// 1-dof critical value at alpha = 0.05.
inline constexpr double kChiSquareCritical = 3.841;

/// Per feature: median-binarize, then max over classes of the one-vs-rest
/// chi-square.
std::map<std::string, double> chi_square_scores(const LabeledDataset& ds);
FeatureSubset chi_select(const std::map<std::string, double>& scores,
                         const SelectionPolicy& policy = Threshold{kChiSquareCritical});
FeatureSubset chi_select(const LabeledDataset& ds,
                         const SelectionPolicy& policy = Threshold{kChiSquareCritical});

// -- wrapper ------------------------------------------------------------------

enum class WrapperMode { Exhaustive, Greedy };

inline constexpr std::size_t kMaxExhaustiveFeatures = 16;

/// Leave-one-out 1-NN hits on z-scored columns (column indices into ds).
/// Distance ties go to the lower row index.
std::size_t loo_1nn_hits(const LabeledDataset& ds, std::span<const std::size_t> columns);

/// Exhaustive mode maximizes LOO 1-NN accuracy over every non-empty subset
/// (ties: fewer features, then lexicographic keys). Greedy mode adds the best
/// single feature while accuracy strictly improves.
FeatureSubset wrapper_select(const LabeledDataset& ds, WrapperMode mode = WrapperMode::Greedy);

}  // namespace vmfs
