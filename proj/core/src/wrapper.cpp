#include <algorithm>
#include <limits>
#include <numeric>

#include "vmfs/error.hpp"
#include "vmfs/selectors.hpp"

namespace vmfs {

namespace {

class LooNearestNeighbor {
 public:
  explicit LooNearestNeighbor(const LabeledDataset& ds) : classes_(class_codes(ds)) {
    z_.reserve(ds.col_count());
    for (const auto& c : ds.columns) z_.push_back(zscore(c.values));
  }

  /// `columns` must be sorted so every subset sums its distance terms in the
  /// same order whichever search produced it.
  std::size_t hits(std::span<const std::size_t> columns) const {
    const std::size_t n = classes_.size();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t nearest = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double dist = 0.0;
        for (std::size_t c : columns) {
          const double diff = z_[c][i] - z_[c][j];
          dist += diff * diff;
        }
        if (dist < best) best = dist, nearest = j;
      }
      correct += nearest < n && classes_[nearest] == classes_[i];
    }
    return correct;
  }

  std::size_t rows() const noexcept { return classes_.size(); }

 private:
  std::vector<int> classes_;
  std::vector<std::vector<double>> z_;
};

}  // namespace

std::size_t loo_1nn_hits(const LabeledDataset& ds, std::span<const std::size_t> columns) {
  ds.validate();
  std::vector<std::size_t> sorted(columns.begin(), columns.end());
  std::sort(sorted.begin(), sorted.end());
  return LooNearestNeighbor(ds).hits(sorted);
}

FeatureSubset wrapper_select(const LabeledDataset& ds, WrapperMode mode) {
  ds.validate();
  const std::size_t n = ds.col_count();
  if (n == 0) throw EmptyDatasetError("wrapper_select: no features");
  if (ds.row_count() < 2) throw DimensionError("wrapper_select needs at least 2 rows");
  if (mode == WrapperMode::Exhaustive && n > kMaxExhaustiveFeatures)
    throw ModeError("exhaustive wrapper search is limited to " +
                    std::to_string(kMaxExhaustiveFeatures) + " features (got " +
                    std::to_string(n) + "); use greedy mode");
  const LooNearestNeighbor loo(ds);
  const double rows = static_cast<double>(loo.rows());
  const auto keys = ds.keys();

  // Column indices ordered by key; subsets compare as sorted key lists.
  std::vector<std::size_t> by_name(n);
  std::iota(by_name.begin(), by_name.end(), 0);
  std::sort(by_name.begin(), by_name.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  auto names_of = [&](std::vector<std::size_t> cols) {
    std::sort(cols.begin(), cols.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<std::string> out;
    for (std::size_t c : cols) out.push_back(keys[c]);
    return out;
  };

  FeatureSubset out;
  out.selector = SelectorKind::Wrapper;

  if (mode == WrapperMode::Exhaustive) {
    std::size_t best_hits = 0;
    std::vector<std::string> best_names;
    std::vector<std::size_t> best_cols;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<std::size_t> cols;
      for (std::size_t c = 0; c < n; ++c)
        if (mask & (1u << c)) cols.push_back(c);
      const std::size_t h = loo.hits(cols);
      auto names = names_of(cols);
      out.search_log.push_back(SearchLogEntry{names, static_cast<double>(h) / rows});
      const bool better = best_names.empty() || h > best_hits ||
                          (h == best_hits && (names.size() < best_names.size() ||
                                              (names.size() == best_names.size() && names < best_names)));
      if (better) best_hits = h, best_names = std::move(names), best_cols = std::move(cols);
    }
    // Attribute the accuracy to members in key order.
    std::vector<std::size_t> prefix;
    std::size_t prev = 0;
    for (const auto& name : best_names) {
      prefix.push_back(static_cast<std::size_t>(std::find(keys.begin(), keys.end(), name) - keys.begin()));
      std::sort(prefix.begin(), prefix.end());
      const std::size_t h = loo.hits(prefix);
      out.scores[name] = (static_cast<double>(h) - static_cast<double>(prev)) / rows;
      prev = h;
    }
    out.features = std::move(best_names);
    out.objective = static_cast<double>(best_hits) / rows;
    return out;
  }

  std::vector<std::size_t> chosen;
  std::size_t current = 0;
  while (chosen.size() < n) {
    std::size_t best_hits = 0;
    std::optional<std::size_t> best_col;
    for (std::size_t c : by_name) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      auto cols = chosen;
      cols.insert(std::lower_bound(cols.begin(), cols.end(), c), c);
      const std::size_t h = loo.hits(cols);
      out.search_log.push_back(SearchLogEntry{names_of(cols), static_cast<double>(h) / rows});
      if (!best_col || h > best_hits) best_hits = h, best_col = c;
    }
    if (!best_col || best_hits <= current) break;
    chosen.insert(std::lower_bound(chosen.begin(), chosen.end(), *best_col), *best_col);
    out.features.push_back(keys[*best_col]);
    out.scores[keys[*best_col]] = (static_cast<double>(best_hits) - static_cast<double>(current)) / rows;
    current = best_hits;
  }
  if (out.features.empty()) {
    // No subset classifies anything; keep the first key so the result is usable.
    out.features.push_back(keys[by_name.front()]);
    out.scores[keys[by_name.front()]] = 0.0;
    out.notes.push_back("fallback: no feature yields a correct LOO prediction");
  }
  out.objective = static_cast<double>(current) / rows;
  return out;
}

}  // namespace vmfs
