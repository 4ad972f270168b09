#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "vmfs/error.hpp"
#include "vmfs/selectors.hpp"
#include "policy.hpp"

namespace vmfs {

namespace {

// z-score then min-max to [0,1]. Moments are summed over sorted values so the
// result does not depend on row order.
std::vector<double> unit_scaled(std::span<const double> column) {
  std::vector<double> out(column.size(), 0.0);
  if (column.empty()) return out;
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) return out;
  const double n = static_cast<double>(sorted.size());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  const double lo = (sorted.front() - mean) / sd;
  const double span = (sorted.back() - mean) / sd - lo;
  for (std::size_t i = 0; i < column.size(); ++i)
    out[i] = std::clamp(((column[i] - mean) / sd - lo) / span, 0.0, 1.0);
  return out;
}

}  // namespace

std::map<std::string, double> relief_weights(const LabeledDataset& ds,
                                             std::optional<std::size_t> samples,
                                             std::uint64_t seed) {
  ds.validate();
  const auto classes = class_codes(ds);
  const std::size_t n = ds.row_count();
  const std::size_t d = ds.col_count();
  if (d == 0) throw EmptyDatasetError("relief_weights: no features");

  std::map<int, std::size_t> per_class;
  for (int c : classes) ++per_class[c];
  if (per_class.size() < 2) throw InsufficientClassError("Relief needs at least two classes");
  for (const auto& [c, count] : per_class)
    if (count < 2)
      throw InsufficientClassError("class " + std::string(to_string(static_cast<Workload>(c))) +
                                   " has fewer than 2 instances");

  // Row-major scaled matrix.
  std::vector<double> x(n * d);
  for (std::size_t f = 0; f < d; ++f) {
    auto col = unit_scaled(ds.columns[f].values);
    for (std::size_t r = 0; r < n; ++r) x[r * d + f] = col[r];
  }
  auto row = [&](std::size_t r) { return std::span<const double>(x.data() + r * d, d); };

  // Canonical order: label, then scaled values.
  std::vector<std::size_t> canon(n);
  std::iota(canon.begin(), canon.end(), 0);
  std::stable_sort(canon.begin(), canon.end(), [&](std::size_t a, std::size_t b) {
    if (classes[a] != classes[b]) return classes[a] < classes[b];
    auto ra = row(a), rb = row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });

  std::vector<std::size_t> visits;
  if (samples) {
    if (*samples == 0) throw DomainError("Relief sample count must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < *samples; ++i) visits.push_back(pick(rng));
  } else {
    visits.resize(n);
    std::iota(visits.begin(), visits.end(), 0);
  }
  const double m = static_cast<double>(visits.size());

  std::vector<double> w(d, 0.0);
  for (std::size_t pos : visits) {
    const std::size_t i = canon[pos];
    const auto xi = row(i);
    double hit_d = std::numeric_limits<double>::infinity();
    double miss_d = hit_d;
    std::size_t hit = n, miss = n;
    // Scanning in canonical order with strict < breaks distance ties toward
    // the earlier canonical position.
    for (std::size_t q = 0; q < n; ++q) {
      const std::size_t j = canon[q];
      if (j == i) continue;
      const auto xj = row(j);
      double dist = 0.0;
      for (std::size_t f = 0; f < d; ++f) dist += (xi[f] - xj[f]) * (xi[f] - xj[f]);
      if (classes[j] == classes[i]) {
        if (dist < hit_d) hit_d = dist, hit = j;
      } else if (dist < miss_d) {
        miss_d = dist, miss = j;
      }
    }
    const auto xh = row(hit);
    const auto xm = row(miss);
    for (std::size_t f = 0; f < d; ++f)
      w[f] += (std::abs(xi[f] - xm[f]) - std::abs(xi[f] - xh[f])) / m;
  }

  std::map<std::string, double> out;
  for (std::size_t f = 0; f < d; ++f) out[ds.columns[f].key()] = w[f];
  return out;
}

FeatureSubset relief_select(const std::map<std::string, double>& weights,
                            const SelectionPolicy& policy) {
  return detail::select_by_policy(SelectorKind::Relief, weights, policy);
}

FeatureSubset relief_select(const LabeledDataset& ds, const ReliefOptions& options) {
  return relief_select(relief_weights(ds, options.samples, options.seed), options.policy);
}

}  // namespace vmfs
