#include "vmfs/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "vmfs/error.hpp"

namespace vmfs {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw DimensionError("ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out;
  for (std::size_t r = 0; r < rows_; ++r) out.emplace_back(row(r).begin(), row(r).end());
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

namespace {

Matrix plus_plus_seeds(const Matrix& x, int k, std::mt19937_64& rng) {
  const std::size_t n = x.rows();
  Matrix c(static_cast<std::size_t>(k), x.cols());
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t pick = first(rng);
  std::copy(x.row(pick).begin(), x.row(pick).end(), c.row(0).begin());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (int j = 1; j < k; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(x.row(i), c.row(static_cast<std::size_t>(j - 1))));
      total += d2[i];
    }
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = first(rng);
    }
    std::copy(x.row(pick).begin(), x.row(pick).end(), c.row(static_cast<std::size_t>(j)).begin());
  }
  return c;
}

int nearest(std::span<const double> p, const Matrix& c) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < c.rows(); ++j) {
    const double d = squared_distance(p, c.row(j));
    if (d < best_d) best_d = d, best = static_cast<int>(j);
  }
  return best;
}

double inertia_of(const Matrix& x, std::span<const int> labels, const Matrix& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    s += squared_distance(x.row(i), c.row(static_cast<std::size_t>(labels[i])));
  return s;
}

ClusterAssignment lloyd(const Matrix& x, int k, std::uint64_t seed, const KMeansOptions& opt) {
  std::mt19937_64 rng(seed);
  const std::size_t n = x.rows();
  ClusterAssignment a;
  a.k = k;
  a.centroids = plus_plus_seeds(x, k, rng);
  a.labels.assign(n, -1);
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= std::max(1, opt.max_iter); ++it) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = nearest(x.row(i), a.centroids);

    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    for (int empty = 0; empty < k; ++empty) {
      if (sizes[static_cast<std::size_t>(empty)] != 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(labels[i]);
        if (sizes[own] < 2) continue;
        const double d = squared_distance(x.row(i), a.centroids.row(own));
        if (d > far_d) far_d = d, far = i;
      }
      --sizes[static_cast<std::size_t>(labels[far])];
      labels[far] = empty;
      sizes[static_cast<std::size_t>(empty)] = 1;
    }

    const bool unchanged = labels == a.labels;
    a.labels = std::move(labels);
    a.centroids = cluster_centroids(x, a.labels, k);
    const double j = inertia_of(x, a.labels, a.centroids);
    a.inertia_trace.push_back(j);
    a.inertia = j;
    a.iterations = it;
    if (unchanged || j == 0.0 || (prev - j) < opt.tol * prev) break;
    prev = j;
  }
  return a;
}

void check_labels(const Matrix& points, std::span<const int> labels, int& k) {
  if (labels.size() != points.rows()) throw DimensionError("label count does not match point count");
  k = 0;
  for (int l : labels) {
    if (l < 0) throw DomainError("negative cluster label");
    k = std::max(k, l + 1);
  }
}

// Non-empty cluster ids with their centroids.
struct Clusters {
  std::vector<int> ids;
  Matrix centroids;
  std::vector<std::vector<std::size_t>> members;
};

Clusters gather(const Matrix& points, std::span<const int> labels) {
  int k = 0;
  check_labels(points, labels, k);
  Clusters c;
  std::vector<std::vector<std::size_t>> by_label(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) by_label[static_cast<std::size_t>(labels[i])].push_back(i);
  for (int l = 0; l < k; ++l)
    if (!by_label[static_cast<std::size_t>(l)].empty()) {
      c.ids.push_back(l);
      c.members.push_back(std::move(by_label[static_cast<std::size_t>(l)]));
    }
  if (c.ids.size() < 2) throw DegenerateClusteringError("validity indices need at least 2 non-empty clusters");
  const Matrix all = cluster_centroids(points, labels, k);
  c.centroids = Matrix(c.ids.size(), points.cols());
  for (std::size_t i = 0; i < c.ids.size(); ++i) {
    auto src = all.row(static_cast<std::size_t>(c.ids[i]));
    std::copy(src.begin(), src.end(), c.centroids.row(i).begin());
  }
  for (std::size_t i = 0; i < c.ids.size(); ++i)
    for (std::size_t j = i + 1; j < c.ids.size(); ++j)
      if (squared_distance(c.centroids.row(i), c.centroids.row(j)) == 0.0)
        throw DegenerateClusteringError("clusters " + std::to_string(c.ids[i]) + " and " +
                                        std::to_string(c.ids[j]) + " share a centroid");
  return c;
}

}  // namespace

Matrix cluster_centroids(const Matrix& points, std::span<const int> labels, int k) {
  Matrix c(static_cast<std::size_t>(k), points.cols());
  std::vector<std::size_t> count(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto l = static_cast<std::size_t>(labels[i]);
    ++count[l];
    auto dst = c.row(l);
    auto src = points.row(i);
    const double n = static_cast<double>(count[l]);
    for (std::size_t d = 0; d < dst.size(); ++d) dst[d] += (src[d] - dst[d]) / n;
  }
  return c;
}

ClusterAssignment kmeans(const Matrix& points, int k, std::uint64_t seed, const KMeansOptions& options) {
  if (k < 1) throw DomainError("k must be at least 1");
  if (points.rows() < static_cast<std::size_t>(k))
    throw TooFewPointsError("k-means needs at least k=" + std::to_string(k) + " points, got " +
                            std::to_string(points.rows()));
  for (std::size_t r = 0; r < points.rows(); ++r)
    for (double v : points.row(r))
      if (!std::isfinite(v)) throw DomainError("k-means input contains a non-finite value");

  ClusterAssignment best;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    // splitmix-style spread so restart seeds do not overlap neighbouring seeds
    const std::uint64_t s = seed + static_cast<std::uint64_t>(r) * 0x9E3779B97F4A7C15ull;
    auto a = lloyd(points, k, s, options);
    if (r == 0 || a.inertia < best.inertia) best = std::move(a);
  }
  return best;
}

double davies_bouldin(const Matrix& points, std::span<const int> labels) {
  const auto c = gather(points, labels);
  const std::size_t m = c.ids.size();
  std::vector<double> scatter(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p : c.members[i]) scatter[i] += distance(points.row(p), c.centroids.row(i));
    scatter[i] /= static_cast<double>(c.members[i].size());
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i)
        worst = std::max(worst, (scatter[i] + scatter[j]) / distance(c.centroids.row(i), c.centroids.row(j)));
    sum += worst;
  }
  return sum / static_cast<double>(m);
}

double davies_bouldin(const Matrix& points, const ClusterAssignment& a) {
  return davies_bouldin(points, a.labels);
}

double dunn_index(const Matrix& points, std::span<const int> labels) {
  const auto c = gather(points, labels);
  const std::size_t m = c.ids.size();
  double diameter = 0.0;
  for (const auto& members : c.members)
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        diameter = std::max(diameter, distance(points.row(members[a]), points.row(members[b])));
  if (diameter == 0.0) throw DegenerateClusteringError("every cluster has zero diameter");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) gap = std::min(gap, distance(c.centroids.row(i), c.centroids.row(j)));
  return gap / diameter;
}

double dunn_index(const Matrix& points, const ClusterAssignment& a) { return dunn_index(points, a.labels); }

ValidityScores validity(const Matrix& points, std::span<const int> labels) {
  return ValidityScores{davies_bouldin(points, labels), dunn_index(points, labels)};
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DimensionError("adjusted_rand_index: length mismatch");
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    ra[a[i]] += 1.0;
    rb[b[i]] += 1.0;
  }
  double index = 0.0, sa = 0.0, sb = 0.0;
  for (const auto& [key, n] : joint) index += choose2(n);
  for (const auto& [key, n] : ra) sa += choose2(n);
  for (const auto& [key, n] : rb) sb += choose2(n);
  const double total = choose2(static_cast<double>(a.size()));
  const double expected = total > 0.0 ? sa * sb / total : 0.0;
  const double max_index = (sa + sb) / 2.0;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace vmfs
