#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vmfs {

/// Dense row-major matrix; rows are points.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<std::vector<double>> to_rows() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

struct ClusterAssignment {
  int k = 0;
  std::vector<int> labels;
  Matrix centroids;
  /// Sum of squared distances to the assigned centroid.
  double inertia = 0.0;
  int iterations = 0;
  /// Inertia after each Lloyd iteration; non-increasing.
  std::vector<double> inertia_trace;
};

struct KMeansOptions {
  int max_iter = 300;
  /// Stop when the relative inertia improvement drops below this.
  double tol = 1e-6;
  /// Independent k-means++ starts; the lowest final inertia wins (ties: earliest).
  int restarts = 1;

  bool operator==(const KMeansOptions&) const = default;
};

/// Lloyd's algorithm with k-means++ seeding. Assignment ties go to the lowest
/// cluster id. A cluster left empty takes the point farthest from its own
/// centroid before the update step. Deterministic in (points, k, seed).
ClusterAssignment kmeans(const Matrix& points, int k, std::uint64_t seed,
                         const KMeansOptions& options = {});

/// Mean of the points carrying each label; labels must lie in [0, k).
Matrix cluster_centroids(const Matrix& points, std::span<const int> labels, int k);

/// Mean over clusters of max_{j != i} (s_i + s_j) / d(c_i, c_j), with s the
/// mean distance of a cluster's points to its centroid.
double davies_bouldin(const Matrix& points, std::span<const int> labels);
double davies_bouldin(const Matrix& points, const ClusterAssignment& a);

/// Smallest centroid-to-centroid distance over the largest cluster diameter.
double dunn_index(const Matrix& points, std::span<const int> labels);
double dunn_index(const Matrix& points, const ClusterAssignment& a);

struct ValidityScores {
  double davies_bouldin = 0.0;
  double dunn = 0.0;
};
ValidityScores validity(const Matrix& points, std::span<const int> labels);

/// Hubert-Arabie adjusted Rand index between two labelings.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace vmfs
