#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vmfs/selectors.hpp"
#include "vmfs/telemetry.hpp"

namespace vmfs {

/// Sorted object indices.
using ObjectSet = std::vector<std::size_t>;

/// Equivalence classes of U under IND(P). Blocks are sorted internally and
/// listed in order of their smallest member.
struct Partition {
  std::vector<ObjectSet> blocks;
  std::size_t universe_size = 0;

  /// Block id per object.
  std::vector<std::size_t> block_of() const;

  bool operator==(const Partition&) const = default;
};

struct DependencyScore {
  double gamma = 0.0;
  std::size_t positive_region_size = 0;
  std::size_t universe_size = 0;
};

Partition indiscernibility_partition(const DiscreteDataset& ds, std::span<const std::string> attrs);
Partition indiscernibility_partition(const DiscreteDataset& ds, std::span<const std::size_t> attrs);

/// Union of blocks contained in x.
ObjectSet lower_approximation(const Partition& p, const ObjectSet& x);
/// Union of blocks meeting x.
ObjectSet upper_approximation(const Partition& p, const ObjectSet& x);

/// gamma_P(Q) = |POS_P(Q)| / |U|.
DependencyScore dependency_degree(const DiscreteDataset& ds, std::span<const std::string> p_attrs,
                                  std::span<const std::string> q_attrs);
DependencyScore dependency_degree(const DiscreteDataset& ds, std::span<const std::size_t> p_attrs,
                                  std::span<const std::size_t> q_attrs);

/// Sum over every attribute a of |POS_P({a})|. The mean dependency is this
/// divided by |A| * |U|; comparing totals keeps the arithmetic exact.
std::size_t total_positive_region(const DiscreteDataset& ds, std::span<const std::size_t> p_attrs);

/// Mean over all attributes a of gamma_P({a}).
double mean_dependency(const DiscreteDataset& ds, std::span<const std::string> p_attrs);
double mean_dependency(const DiscreteDataset& ds, std::span<const std::size_t> p_attrs);

struct UsqrOptions {
  /// Default bin count when discretizing a LabeledDataset for USQR.
  int bins = 5;
  /// Stop as soon as no single attribute raises the mean dependency. When
  /// false the loop keeps adding the best attribute until the full set's mean
  /// dependency is reached.
  bool stop_on_plateau = false;

  bool operator==(const UsqrOptions&) const = default;
};

/// Unsupervised QuickReduct: grow R from the empty set by the attribute that
/// maximizes mean dependency (ties by name) until R's mean dependency equals
/// the full set's.
FeatureSubset usqr_select(const DiscreteDataset& ds, const UsqrOptions& options = {});
/// Discretizes with options.bins equal-frequency bins first. Labels are ignored.
FeatureSubset usqr_select(const LabeledDataset& ds, const UsqrOptions& options = {});

}  // namespace vmfs
