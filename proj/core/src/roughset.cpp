#include "vmfs/roughset.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "vmfs/error.hpp"

namespace vmfs {

namespace {

// Block ids numbered by first appearance in row order.
struct BlockIds {
  std::vector<std::uint32_t> id;
  std::uint32_t count = 0;
};

BlockIds refine(const DiscreteDataset& ds, std::span<const std::size_t> attrs) {
  const std::size_t n = ds.row_count();
  BlockIds b{std::vector<std::uint32_t>(n, 0), n ? 1u : 0u};
  std::unordered_map<std::uint64_t, std::uint32_t> next;
  for (std::size_t a : attrs) {
    next.clear();
    const auto& codes = ds.codes[a];
    std::uint32_t count = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const std::uint64_t key = (static_cast<std::uint64_t>(b.id[r]) << 32) |
                                static_cast<std::uint32_t>(codes[r]);
      auto [it, fresh] = next.try_emplace(key, count);
      if (fresh) ++count;
      b.id[r] = it->second;
    }
    b.count = count;
  }
  return b;
}

// |POS_P(Q)|: objects whose P-block lies inside one Q-block.
std::size_t positive_size(const BlockIds& p, std::span<const std::uint32_t> q) {
  constexpr std::uint32_t kUnset = ~0u;
  constexpr std::uint32_t kMixed = ~0u - 1;
  std::vector<std::uint32_t> q_of(p.count, kUnset);
  std::vector<std::size_t> size(p.count, 0);
  for (std::size_t r = 0; r < p.id.size(); ++r) {
    auto& slot = q_of[p.id[r]];
    ++size[p.id[r]];
    if (slot == kUnset) slot = q[r];
    else if (slot != q[r]) slot = kMixed;
  }
  std::size_t pos = 0;
  for (std::uint32_t b = 0; b < p.count; ++b)
    if (q_of[b] != kMixed) pos += size[b];
  return pos;
}

std::vector<std::uint32_t> as_ids(const std::vector<int>& codes) {
  return std::vector<std::uint32_t>(codes.begin(), codes.end());
}

std::vector<std::size_t> resolve(const DiscreteDataset& ds, std::span<const std::string> attrs) {
  std::vector<std::size_t> out;
  for (const auto& a : attrs) out.push_back(ds.index_of(a));
  return out;
}

void check_attrs(const DiscreteDataset& ds, std::span<const std::size_t> attrs) {
  if (attrs.empty()) throw DomainError("attribute set must be non-empty");
  for (std::size_t a : attrs)
    if (a >= ds.col_count()) throw AttributeError("attribute index " + std::to_string(a) + " out of range");
}

void check_subset(const Partition& p, const ObjectSet& x) {
  for (std::size_t o : x)
    if (o >= p.universe_size) throw DomainError("object " + std::to_string(o) + " outside the universe");
}

}  // namespace

std::vector<std::size_t> Partition::block_of() const {
  std::vector<std::size_t> out(universe_size);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t o : blocks[b]) out[o] = b;
  return out;
}

Partition indiscernibility_partition(const DiscreteDataset& ds, std::span<const std::size_t> attrs) {
  check_attrs(ds, attrs);
  const auto ids = refine(ds, attrs);
  Partition p;
  p.universe_size = ds.row_count();
  p.blocks.resize(ids.count);
  for (std::size_t r = 0; r < ids.id.size(); ++r) p.blocks[ids.id[r]].push_back(r);
  return p;
}

Partition indiscernibility_partition(const DiscreteDataset& ds, std::span<const std::string> attrs) {
  const auto idx = resolve(ds, attrs);
  return indiscernibility_partition(ds, std::span<const std::size_t>(idx));
}

ObjectSet lower_approximation(const Partition& p, const ObjectSet& x) {
  check_subset(p, x);
  std::vector<bool> in(p.universe_size, false);
  for (std::size_t o : x) in[o] = true;
  ObjectSet out;
  for (const auto& block : p.blocks)
    if (std::all_of(block.begin(), block.end(), [&](std::size_t o) { return in[o]; }))
      out.insert(out.end(), block.begin(), block.end());
  std::sort(out.begin(), out.end());
  return out;
}

ObjectSet upper_approximation(const Partition& p, const ObjectSet& x) {
  check_subset(p, x);
  std::vector<bool> in(p.universe_size, false);
  for (std::size_t o : x) in[o] = true;
  ObjectSet out;
  for (const auto& block : p.blocks)
    if (std::any_of(block.begin(), block.end(), [&](std::size_t o) { return in[o]; }))
      out.insert(out.end(), block.begin(), block.end());
  std::sort(out.begin(), out.end());
  return out;
}

DependencyScore dependency_degree(const DiscreteDataset& ds, std::span<const std::size_t> p_attrs,
                                  std::span<const std::size_t> q_attrs) {
  check_attrs(ds, p_attrs);
  check_attrs(ds, q_attrs);
  const auto p = refine(ds, p_attrs);
  const auto q = refine(ds, q_attrs);
  DependencyScore s;
  s.universe_size = ds.row_count();
  s.positive_region_size = positive_size(p, q.id);
  s.gamma = s.universe_size ? static_cast<double>(s.positive_region_size) /
                                  static_cast<double>(s.universe_size)
                            : 0.0;
  return s;
}

DependencyScore dependency_degree(const DiscreteDataset& ds, std::span<const std::string> p_attrs,
                                  std::span<const std::string> q_attrs) {
  const auto p = resolve(ds, p_attrs);
  const auto q = resolve(ds, q_attrs);
  return dependency_degree(ds, std::span<const std::size_t>(p), std::span<const std::size_t>(q));
}

std::size_t total_positive_region(const DiscreteDataset& ds, std::span<const std::size_t> p_attrs) {
  for (std::size_t a : p_attrs)
    if (a >= ds.col_count()) throw AttributeError("attribute index " + std::to_string(a) + " out of range");
  const auto p = refine(ds, p_attrs);
  std::size_t total = 0;
  for (std::size_t a = 0; a < ds.col_count(); ++a) total += positive_size(p, as_ids(ds.codes[a]));
  return total;
}

double mean_dependency(const DiscreteDataset& ds, std::span<const std::size_t> p_attrs) {
  check_attrs(ds, p_attrs);
  const double denom = static_cast<double>(ds.col_count()) * static_cast<double>(ds.row_count());
  return static_cast<double>(total_positive_region(ds, p_attrs)) / denom;
}

double mean_dependency(const DiscreteDataset& ds, std::span<const std::string> p_attrs) {
  const auto idx = resolve(ds, p_attrs);
  return mean_dependency(ds, std::span<const std::size_t>(idx));
}

FeatureSubset usqr_select(const DiscreteDataset& ds, const UsqrOptions& options) {
  const std::size_t n_attrs = ds.col_count();
  if (n_attrs == 0) throw EmptyDatasetError("usqr_select: no attributes");
  if (ds.row_count() < 2) throw DimensionError("usqr_select needs at least 2 rows");
  const double denom = static_cast<double>(n_attrs) * static_cast<double>(ds.row_count());

  std::vector<std::size_t> all(n_attrs);
  std::iota(all.begin(), all.end(), 0);
  const std::size_t target = total_positive_region(ds, all);
  std::vector<std::size_t> by_name = all;
  std::sort(by_name.begin(), by_name.end(),
            [&](std::size_t a, std::size_t b) { return ds.names[a] < ds.names[b]; });

  FeatureSubset out;
  out.selector = SelectorKind::Usqr;
  std::vector<std::size_t> reduct;  // sorted indices
  std::size_t current = total_positive_region(ds, reduct);
  while (current != target && reduct.size() < n_attrs) {
    std::optional<std::size_t> pick;
    std::size_t pick_total = 0;
    for (std::size_t a : by_name) {
      if (std::binary_search(reduct.begin(), reduct.end(), a)) continue;
      auto trial = reduct;
      trial.insert(std::lower_bound(trial.begin(), trial.end(), a), a);
      const std::size_t t = total_positive_region(ds, trial);
      std::vector<std::string> names;
      for (std::size_t i : trial) names.push_back(ds.names[i]);
      out.search_log.push_back(SearchLogEntry{std::move(names), static_cast<double>(t) / denom});
      if (!pick || t > pick_total) pick = a, pick_total = t;
    }
    if (pick_total <= current) {
      if (options.stop_on_plateau) {
        out.notes.push_back("stopped on a plateau below the full set's mean dependency");
        break;
      }
      out.notes.push_back("plateau: added " + ds.names[*pick] + " without gain");
    }
    reduct.insert(std::lower_bound(reduct.begin(), reduct.end(), *pick), *pick);
    out.features.push_back(ds.names[*pick]);
    out.scores[ds.names[*pick]] = static_cast<double>(pick_total - std::min(pick_total, current)) / denom;
    current = pick_total;
  }
  if (out.features.empty()) {
    // Every attribute is already determined by the empty set (all constant).
    out.features.push_back(ds.names[by_name.front()]);
    out.scores[ds.names[by_name.front()]] = 0.0;
    out.notes.push_back("all attributes constant; kept " + ds.names[by_name.front()]);
  }
  out.objective = static_cast<double>(current) / denom;
  return out;
}

FeatureSubset usqr_select(const LabeledDataset& ds, const UsqrOptions& options) {
  ds.validate();
  const int bins = std::min<int>(options.bins, static_cast<int>(ds.row_count()));
  auto discrete = equal_frequency_discretize(ds, std::max(bins, 2));
  auto out = usqr_select(discrete, options);
  out.notes.insert(out.notes.begin(), discrete.diagnostics.begin(), discrete.diagnostics.end());
  return out;
}

}  // namespace vmfs
