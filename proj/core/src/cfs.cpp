#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "vmfs/error.hpp"
#include "vmfs/selectors.hpp"

namespace vmfs {

std::string_view to_string(SelectorKind k) {
  switch (k) {
    case SelectorKind::Cfs: return "CFS";
    case SelectorKind::Relief: return "RELIEF";
    case SelectorKind::Chi2: return "CHI2";
    case SelectorKind::Wrapper: return "WRAPPER";
    case SelectorKind::Usqr: return "USQR";
  }
  return "?";
}

std::optional<SelectorKind> parse_selector(std::string_view s) {
  std::string up(s);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (SelectorKind k : kAllSelectors)
    if (to_string(k) == up) return k;
  if (up == "CHI-SQUARE" || up == "CHISQUARE") return SelectorKind::Chi2;
  if (up == "ROUGHSET" || up == "ROUGH-SET") return SelectorKind::Usqr;
  return std::nullopt;
}

std::vector<int> class_codes(const LabeledDataset& ds) {
  if (!ds.labels) throw LabelsRequiredError("selector requires workload labels");
  std::vector<int> out(ds.labels->size());
  std::transform(ds.labels->begin(), ds.labels->end(), out.begin(),
                 [](Workload w) { return static_cast<int>(w); });
  return out;
}

namespace {

double entropy(const std::unordered_map<std::int64_t, std::size_t>& counts, double n) {
  double h = 0.0;
  for (const auto& [v, c] : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

double symmetrical_uncertainty(std::span<const int> x, std::span<const int> y) {
  if (x.size() != y.size()) throw DimensionError("symmetrical_uncertainty: length mismatch");
  if (x.size() < 2) throw DimensionError("symmetrical_uncertainty: need at least 2 values");
  std::unordered_map<std::int64_t, std::size_t> cx, cy, cxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++cx[x[i]];
    ++cy[y[i]];
    ++cxy[(static_cast<std::int64_t>(x[i]) << 32) ^ static_cast<std::uint32_t>(y[i])];
  }
  const bool x_const = cx.size() == 1;
  const bool y_const = cy.size() == 1;
  if (x_const && y_const) return 1.0;
  if (x_const || y_const) return 0.0;
  const double n = static_cast<double>(x.size());
  const double hx = entropy(cx, n);
  const double hy = entropy(cy, n);
  const double mi = hx + hy - entropy(cxy, n);
  return std::clamp(2.0 * mi / (hx + hy), 0.0, 1.0);
}

CorrelationCache::CorrelationCache(std::vector<std::string> names,
                                   std::vector<double> feature_class,
                                   std::vector<double> feature_feature)
    : names_(std::move(names)),
      feature_class_(std::move(feature_class)),
      feature_feature_(std::move(feature_feature)) {
  const std::size_t n = names_.size();
  if (feature_class_.size() != n || feature_feature_.size() != n * n)
    throw DimensionError("correlation cache dimensions do not match feature count");
  for (std::size_t i = 0; i < n; ++i) {
    feature_feature_[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) feature_feature_[j * n + i] = feature_feature_[i * n + j];
  }
}

CorrelationCache CorrelationCache::build(const DiscreteDataset& features,
                                         std::span<const int> classes) {
  const std::size_t n = features.col_count();
  std::vector<double> fc(n), ff(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    fc[i] = symmetrical_uncertainty(features.codes[i], classes);
    for (std::size_t j = i + 1; j < n; ++j)
      ff[i * n + j] = symmetrical_uncertainty(features.codes[i], features.codes[j]);
  }
  return CorrelationCache(features.names, std::move(fc), std::move(ff));
}

double cfs_merit(std::span<const std::size_t> subset, const CorrelationCache& cache,
                 CfsDenominator mode) {
  if (subset.empty()) throw DomainError("cfs_merit: empty subset");
  const double k = static_cast<double>(subset.size());
  double rcf = 0.0;
  for (std::size_t f : subset) rcf += cache.feature_class(f);
  rcf /= k;
  double rff = 1.0;
  if (subset.size() > 1) {
    double sum = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a)
      for (std::size_t b = a + 1; b < subset.size(); ++b)
        sum += cache.feature_feature(subset[a], subset[b]);
    rff = sum / (k * (k - 1.0) / 2.0);
  }
  const double pairs = mode == CfsDenominator::Standard ? k * (k - 1.0) : k * (k + 1.0);
  const double radicand = k + pairs * rff;
  if (radicand <= 0.0) return 0.0;
  return k * rcf / std::sqrt(radicand);
}

namespace {

// Subsets are sorted vectors of name ranks, so vector comparison is the
// lexicographic order on sorted feature keys.
using Ranks = std::vector<std::size_t>;

struct Node {
  double merit;
  Ranks ranks;
};

// Total order: higher merit, then fewer features, then lexicographic.
bool better(const Node& a, const Node& b) {
  if (a.merit != b.merit) return a.merit > b.merit;
  if (a.ranks.size() != b.ranks.size()) return a.ranks.size() < b.ranks.size();
  return a.ranks < b.ranks;
}

}  // namespace

FeatureSubset cfs_select(const LabeledDataset& ds, const CfsOptions& options) {
  ds.validate();
  if (ds.row_count() < 2) throw DimensionError("cfs_select needs at least 2 rows");
  if (ds.col_count() == 0) throw EmptyDatasetError("cfs_select: no features");
  const auto classes = class_codes(ds);
  const int bins = std::min<int>(options.bins, static_cast<int>(ds.row_count()));
  const auto discrete = equal_frequency_discretize(ds, std::max(bins, 2));
  const auto cache = CorrelationCache::build(discrete, classes);
  const std::size_t n = cache.size();

  // rank -> cache index, ranks ordered by feature key
  std::vector<std::size_t> by_name(n);
  std::iota(by_name.begin(), by_name.end(), 0);
  std::sort(by_name.begin(), by_name.end(),
            [&](std::size_t a, std::size_t b) { return cache.name(a) < cache.name(b); });

  FeatureSubset out;
  out.selector = SelectorKind::Cfs;
  auto to_indices = [&](const Ranks& r) {
    std::vector<std::size_t> idx(r.size());
    std::transform(r.begin(), r.end(), idx.begin(), [&](std::size_t x) { return by_name[x]; });
    return idx;
  };
  auto to_names = [&](const Ranks& r) {
    std::vector<std::string> names;
    for (std::size_t x : r) names.push_back(cache.name(by_name[x]));
    return names;
  };

  auto order = [](const Node& a, const Node& b) { return better(a, b); };
  std::set<Node, decltype(order)> open(order);
  std::set<Ranks> visited;
  open.insert(Node{0.0, {}});
  visited.insert({});
  std::optional<Node> best;
  int stale = 0;

  while (!open.empty() && stale < options.max_stale) {
    Node head = *open.begin();
    open.erase(open.begin());
    bool improved = false;
    for (std::size_t r = 0; r < n; ++r) {
      if (std::binary_search(head.ranks.begin(), head.ranks.end(), r)) continue;
      Ranks child = head.ranks;
      child.insert(std::lower_bound(child.begin(), child.end(), r), r);
      if (!visited.insert(child).second) continue;
      const auto idx = to_indices(child);
      Node node{cfs_merit(idx, cache, options.denominator), std::move(child)};
      out.search_log.push_back(SearchLogEntry{to_names(node.ranks), node.merit});
      if (!best || node.merit > best->merit) improved = true;
      if (!best || better(node, *best)) best = node;
      open.insert(std::move(node));
    }
    stale = improved ? 0 : stale + 1;
  }

  if (!best) throw EmptyDatasetError("cfs_select: nothing to search");
  for (std::size_t r : best->ranks) {
    const std::size_t i = by_name[r];
    out.features.push_back(cache.name(i));
    out.scores[cache.name(i)] = cache.feature_class(i);
  }
  out.objective = best->merit;
  for (const auto& note : discrete.diagnostics) out.notes.push_back(note);
  return out;
}

}  // namespace vmfs
