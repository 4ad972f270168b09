#pragma once

// Reference implementations used to check library results. Each one follows
// the textbook definition directly and shares no code with the library beyond
// the data types (cfs_exhaustive scores subsets through cfs_merit, which the
// unit suite checks against a direct evaluation).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "vmfs/clustering.hpp"
#include "vmfs/roughset.hpp"
#include "vmfs/selectors.hpp"
#include "vmfs/telemetry.hpp"

namespace vmfs::oracle {

using Idx = std::vector<std::size_t>;

struct OracleBest {
  double merit = -1;
  std::vector<std::string> features;
  /// Largest gap seen between cfs_merit and the direct evaluation.
  double max_merit_error = 0;
};

inline double entropy(const std::map<int, int>& counts, double n) {
  double h = 0;
  for (const auto& [v, c] : counts) h -= c / n * std::log(c / n);
  return h;
}

// 2 I / (H(X) + H(Y)) from joint and marginal counts.
inline double su_oracle(const std::vector<int>& x, const std::vector<int>& y) {
  std::map<int, int> cx, cy, cxy;
  for (std::size_t i = 0; i < x.size(); ++i) ++cx[x[i]], ++cy[y[i]], ++cxy[x[i] * 1000 + y[i]];
  const double n = static_cast<double>(x.size());
  const double hx = entropy(cx, n), hy = entropy(cy, n), hxy = entropy(cxy, n);
  if (hx + hy == 0) return 1.0;
  if (hx == 0 || hy == 0) return 0.0;
  return 2 * (hx + hy - hxy) / (hx + hy);
}

// Exhaustive CFS search over every non-empty subset with the selector's
// tie-break: merit, then size, then sorted key order.
inline OracleBest cfs_exhaustive(const LabeledDataset& ds) {
  const auto discrete = equal_frequency_discretize(ds, std::min<int>(10, static_cast<int>(ds.row_count())));
  const auto cache = CorrelationCache::build(discrete, class_codes(ds));
  const std::size_t n = cache.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cache.name(a) < cache.name(b); });
  OracleBest best;
  std::vector<std::size_t> best_idx;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t r = 0; r < n; ++r)
      if (mask >> r & 1u) idx.push_back(order[r]);
    const double m = cfs_merit(idx, cache);
    // Cross-check the merit against a direct evaluation.
    double rcf = 0, rff = 0;
    for (auto i : idx) rcf += cache.feature_class(i);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) rff += cache.feature_feature(idx[a], idx[b]);
    const double k = static_cast<double>(idx.size());
    const double direct = rcf / std::sqrt(k + 2 * rff);
    best.max_merit_error = std::max(best.max_merit_error, std::abs(direct - m));

    bool take = m > best.merit;
    if (m == best.merit) {
      if (idx.size() != best_idx.size())
        take = idx.size() < best_idx.size();
      else {
        std::vector<std::string> a, b;
        for (auto i : idx) a.push_back(cache.name(i));
        for (auto i : best_idx) b.push_back(cache.name(i));
        take = a < b;
      }
    }
    if (take) best.merit = m, best_idx = idx;
  }
  for (auto i : best_idx) best.features.push_back(cache.name(i));
  return best;
}

inline long double chi_oracle(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  const long double n = a + b + c + d;
  const long double den = static_cast<long double>(a + b) * (c + d) * (a + c) * (b + d);
  if (den == 0) return 0;
  const long double det = static_cast<long double>(a) * d - static_cast<long double>(b) * c;
  return n * det * det / den;
}

inline std::map<std::string, double> chi_scores_oracle(const LabeledDataset& ds) {
  std::map<std::string, double> out;
  const auto& labels = *ds.labels;
  for (const auto& col : ds.columns) {
    auto sorted = col.values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2;
    long double best = 0;
    for (auto w : kAllWorkloads) {
      std::int64_t a = 0, b = 0, c = 0, d = 0;
      bool present = false;
      for (std::size_t r = 0; r < n; ++r) {
        const bool t = col.values[r] > median, in = labels[r] == w;
        present |= in;
        (t ? (in ? a : b) : (in ? c : d)) += 1;
      }
      if (present) best = std::max(best, chi_oracle(a, b, c, d));
    }
    out[col.key()] = static_cast<double>(best);
  }
  return out;
}

// LOO 1-NN hit count with per-column population z-scores; ties to lower index.
inline std::size_t loo_oracle(const LabeledDataset& ds, const std::vector<std::size_t>& cols) {
  const std::size_t n = ds.row_count();
  std::vector<std::vector<double>> z;
  for (auto c : cols) {
    const auto& v = ds.columns[c].values;
    double m = 0;
    for (double x : v) m += x;
    m /= n;
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    s = std::sqrt(s / n);
    std::vector<double> out(n);
    for (std::size_t r = 0; r < n; ++r) out[r] = s > 0 ? (v[r] - m) / s : 0.0;
    z.push_back(out);
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = INFINITY;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = 0;
      for (const auto& col : z) d += (col[i] - col[j]) * (col[i] - col[j]);
      if (d < best) best = d, arg = j;
    }
    hits += (*ds.labels)[i] == (*ds.labels)[arg];
  }
  return hits;
}

inline std::size_t best_subset_hits(const LabeledDataset& ds) {
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << ds.col_count()); ++mask) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < ds.col_count(); ++c)
      if (mask >> c & 1u) cols.push_back(c);
    best = std::max(best, loo_oracle(ds, cols));
  }
  return best;
}

inline bool agree(const DiscreteDataset& d, const Idx& attrs, std::size_t x, std::size_t y) {
  for (auto a : attrs)
    if (d.codes[a][x] != d.codes[a][y]) return false;
  return true;
}

// Objects in POS_P(Q): every P-indiscernible partner is also Q-indiscernible.
inline std::size_t pos_oracle(const DiscreteDataset& d, const Idx& p, const Idx& q) {
  std::size_t n = 0;
  for (std::size_t x = 0; x < d.row_count(); ++x) {
    bool certain = true;
    for (std::size_t y = 0; y < d.row_count() && certain; ++y)
      if (agree(d, p, x, y) && !agree(d, q, x, y)) certain = false;
    n += certain;
  }
  return n;
}

inline double mean_dep_oracle(const DiscreteDataset& d, const Idx& p) {
  double s = 0;
  for (std::size_t a = 0; a < d.col_count(); ++a) s += static_cast<double>(pos_oracle(d, p, {a})) / d.row_count();
  return s / d.col_count();
}

// Reference DB and Dunn straight from their definitions.
inline std::pair<double, double> indices_oracle(const Matrix& x, const std::vector<int>& labels) {
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t r = 0; r < labels.size(); ++r) members[labels[r]].push_back(r);
  std::vector<std::vector<double>> cent;
  std::vector<double> scatter, diam;
  for (const auto& [id, rows] : members) {
    std::vector<double> c(x.cols(), 0.0);
    for (auto r : rows)
      for (std::size_t j = 0; j < x.cols(); ++j) c[j] += x(r, j) / rows.size();
    double s = 0, dm = 0;
    for (auto r : rows) {
      double q = 0;
      for (std::size_t j = 0; j < x.cols(); ++j) q += (x(r, j) - c[j]) * (x(r, j) - c[j]);
      s += std::sqrt(q) / rows.size();
      for (auto o : rows) {
        double p = 0;
        for (std::size_t j = 0; j < x.cols(); ++j) p += (x(r, j) - x(o, j)) * (x(r, j) - x(o, j));
        dm = std::max(dm, std::sqrt(p));
      }
    }
    cent.push_back(c);
    scatter.push_back(s);
    diam.push_back(dm);
  }
  auto cd = [&](std::size_t i, std::size_t j) {
    double q = 0;
    for (std::size_t k = 0; k < x.cols(); ++k) q += (cent[i][k] - cent[j][k]) * (cent[i][k] - cent[j][k]);
    return std::sqrt(q);
  };
  double db = 0, gap = INFINITY;
  for (std::size_t i = 0; i < cent.size(); ++i) {
    double worst = 0;
    for (std::size_t j = 0; j < cent.size(); ++j)
      if (j != i) worst = std::max(worst, (scatter[i] + scatter[j]) / cd(i, j)), gap = std::min(gap, cd(i, j));
    db += worst / cent.size();
  }
  return {db, gap / *std::max_element(diam.begin(), diam.end())};
}

}  // namespace vmfs::oracle
