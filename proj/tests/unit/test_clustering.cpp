#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vmfs/clustering.hpp"
#include "vmfs/error.hpp"
#include "vmfs/io.hpp"

using namespace vmfs;
using namespace vmfs::oracle;

namespace {

Matrix random_points(std::mt19937_64& rng, std::size_t n, std::size_t d, int blobs) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, blobs - 1);
  std::vector<std::vector<double>> centers(blobs, std::vector<double>(d));
  for (auto& c : centers)
    for (auto& v : c) v = g(rng) * 5;
  Matrix m(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    const int b = pick(rng);
    for (std::size_t c = 0; c < d; ++c) m(r, c) = centers[b][c] + g(rng);
  }
  return m;
}

double inertia_of(const Matrix& x, const ClusterAssignment& a) {
  double s = 0;
  for (std::size_t r = 0; r < x.rows(); ++r) s += squared_distance(x.row(r), a.centroids.row(a.labels[r]));
  return s;
}

std::vector<int> relabel_canonical(const std::vector<int>& labels) {
  std::map<int, int> first;
  std::vector<int> out;
  for (int l : labels) {
    auto it = first.emplace(l, static_cast<int>(first.size())).first;
    out.push_back(it->second);
  }
  return out;
}

const Matrix kTwoPairs = Matrix::from_rows({{0}, {2}, {10}, {12}});
const std::vector<int> kPairLabels{0, 0, 1, 1};

}  // namespace

TEST_SUITE("kmeans") {
  TEST_CASE("exact clusters") {
    const auto x = Matrix::from_rows({{0, 0}, {0, 0}, {10, 10}, {10, 10}});
    const auto a = kmeans(x, 2, 1);
    CHECK(a.inertia == 0.0);
    CHECK(a.labels[0] == a.labels[1]);
    CHECK(a.labels[2] == a.labels[3]);
    CHECK(a.labels[0] != a.labels[2]);
    std::vector<std::vector<double>> c = a.centroids.to_rows();
    std::sort(c.begin(), c.end());
    CHECK(c == std::vector<std::vector<double>>{{0, 0}, {10, 10}});
  }

  TEST_CASE("k = 1 gives the global mean") {
    const auto x = Matrix::from_rows({{1, 2}, {3, 4}, {5, 9}});
    const auto a = kmeans(x, 1, 7);
    CHECK(a.centroids(0, 0) == doctest::Approx(3.0));
    CHECK(a.centroids(0, 1) == doctest::Approx(5.0));
    // n * total variance: sum of squared deviations
    CHECK(a.inertia == doctest::Approx(8.0 + 26.0));
  }

  TEST_CASE("errors") {
    const auto x = Matrix::from_rows({{1}, {2}});
    CHECK_THROWS_AS(kmeans(x, 3, 0), TooFewPointsError);
    CHECK_THROWS_AS(kmeans(x, 0, 0), DomainError);
    CHECK_THROWS_AS(kmeans(Matrix::from_rows({{1}, {NAN}}), 1, 0), DomainError);
  }

  TEST_CASE("contract over random seeds and datasets") {
    std::mt19937_64 data_rng(100);
    for (int ds = 0; ds < 10; ++ds) {
      std::uniform_int_distribution<std::size_t> n(6, 80), d(1, 6);
      const auto x = random_points(data_rng, n(data_rng), d(data_rng), 1 + ds % 5);
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int k = 1 + static_cast<int>((seed + ds) % 5);
        const auto a = kmeans(x, k, seed);
        REQUIRE(a.labels.size() == x.rows());
        std::vector<int> sizes(k, 0);
        for (int l : a.labels) {
          REQUIRE(l >= 0);
          REQUIRE(l < k);
          ++sizes[l];
        }
        CHECK(std::count(sizes.begin(), sizes.end(), 0) == 0);
        for (std::size_t i = 1; i < a.inertia_trace.size(); ++i)
          CHECK(a.inertia_trace[i] <= a.inertia_trace[i - 1] * (1 + 1e-12));
        const auto means = cluster_centroids(x, a.labels, k);
        for (std::size_t r = 0; r < means.rows(); ++r)
          for (std::size_t c = 0; c < means.cols(); ++c) CHECK(std::abs(means(r, c) - a.centroids(r, c)) < 1e-9);
        CHECK(a.inertia == doctest::Approx(inertia_of(x, a)).epsilon(1e-9));
        CHECK(a.inertia >= 0.0);
        CHECK(a.iterations >= 1);
      }
    }
  }

  TEST_CASE("deterministic per seed; restarts never worse") {
    std::mt19937_64 rng(7);
    const auto x = random_points(rng, 60, 3, 4);
    const auto a = kmeans(x, 4, 11);
    const auto b = kmeans(x, 4, 11);
    CHECK(a.labels == b.labels);
    CHECK(a.inertia == b.inertia);
    KMeansOptions many;
    many.restarts = 8;
    CHECK(kmeans(x, 4, 11, many).inertia <= a.inertia);
  }

  TEST_CASE("row permutation keeps well-separated partitions") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
      // Four tight, far-apart blobs: the optimum is unique.
      Matrix x(40, 2);
      std::normal_distribution<double> g(0, 0.1);
      for (std::size_t r = 0; r < 40; ++r) x(r, 0) = (r % 4) * 50 + g(rng), x(r, 1) = (r % 2) * 7 + g(rng);
      std::vector<std::size_t> perm(40);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      Matrix y(40, 2);
      for (std::size_t r = 0; r < 40; ++r) y(r, 0) = x(perm[r], 0), y(r, 1) = x(perm[r], 1);
      KMeansOptions opt;
      opt.restarts = 5;
      const auto a = kmeans(x, 4, 3, opt), b = kmeans(y, 4, 3, opt);
      std::vector<int> mapped(40);
      for (std::size_t r = 0; r < 40; ++r) mapped[perm[r]] = b.labels[r];
      CHECK(relabel_canonical(mapped) == relabel_canonical(a.labels));
    }
  }

  TEST_CASE("duplicated points are recovered exactly") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      const int k = 2 + trial % 4;
      const auto distinct = random_points(rng, k, 3, k);
      Matrix x(k * 5, 3);
      for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < 3; ++c) x(r, c) = distinct(r % k, c);
      CHECK(kmeans(x, k, trial).inertia == 0.0);
    }
  }

  TEST_CASE("assignment json") {
    const auto a = kmeans(kTwoPairs, 2, 0);
    const auto text = io::assignment_to_json(a);
    CHECK(text.find("\"k\": 2") != std::string::npos);
    CHECK(text.find("\"centroids\"") != std::string::npos);
    CHECK(text.find("\"iterations\"") != std::string::npos);
  }
}

TEST_SUITE("validity") {
  TEST_CASE("hand-derived values") {
    CHECK(std::abs(davies_bouldin(kTwoPairs, kPairLabels) - 0.2) < 1e-9);
    CHECK(std::abs(dunn_index(kTwoPairs, kPairLabels) - 5.0) < 1e-9);
    const auto singles = Matrix::from_rows({{0}, {4}});
    const std::vector<int> two{0, 1};
    CHECK(davies_bouldin(singles, two) == 0.0);
    CHECK_THROWS_AS(dunn_index(singles, two), DegenerateClusteringError);
  }

  TEST_CASE("degenerate inputs") {
    const std::vector<int> one{0, 0, 0, 0};
    CHECK_THROWS_AS(davies_bouldin(kTwoPairs, one), DegenerateClusteringError);
    const auto sym = Matrix::from_rows({{-1}, {1}, {-2}, {2}});
    const std::vector<int> same_centre{0, 0, 1, 1};
    CHECK_THROWS_AS(davies_bouldin(sym, same_centre), DegenerateClusteringError);
  }

  TEST_CASE("match definitions; translation and scale invariant") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-100, 100);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
      std::uniform_int_distribution<std::size_t> n(10, 200), d(1, 10);
      const int k = 2 + trial % 4;
      const auto x = random_points(rng, n(rng), d(rng), k);
      const auto a = kmeans(x, k, trial);
      const auto [db, dunn] = indices_oracle(x, a.labels);
      const auto v = validity(x, a.labels);
      CHECK(std::abs(v.davies_bouldin - db) <= 1e-9 * db);
      CHECK(std::abs(v.dunn - dunn) <= 1e-9 * dunn);
      Matrix y = x;
      const double s = scale(rng);
      for (std::size_t c = 0; c < y.cols(); ++c) {
        const double t = shift(rng);
        for (std::size_t r = 0; r < y.rows(); ++r) y(r, c) = y(r, c) * s + t;
      }
      const auto w = validity(y, a.labels);
      CHECK(std::abs(w.davies_bouldin - v.davies_bouldin) <= 1e-9 * v.davies_bouldin);
      CHECK(std::abs(w.dunn - v.dunn) <= 1e-9 * v.dunn);
      ++checked;
    }
    CHECK(checked == 100);
  }

  TEST_CASE("separating two fixed shapes lowers DB and raises Dunn") {
    const std::vector<std::vector<double>> shape{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.3}};
    std::vector<int> labels(10);
    for (std::size_t i = 5; i < 10; ++i) labels[i] = 1;
    double prev_db = INFINITY, prev_dunn = 0;
    for (int g = 1; g <= 50; ++g) {
      std::vector<std::vector<double>> rows = shape;
      for (const auto& p : shape) rows.push_back({p[0] + 1.0 + 0.5 * g, p[1]});
      const auto x = Matrix::from_rows(rows);
      const double db = davies_bouldin(x, labels), dunn = dunn_index(x, labels);
      CHECK(db < prev_db);
      CHECK(dunn > prev_dunn);
      prev_db = db, prev_dunn = dunn;
    }
  }
}

TEST_SUITE("adjusted rand index") {
  TEST_CASE("identical and relabeled partitions score 1") {
    const std::vector<int> a{0, 0, 1, 1, 2, 2}, b{2, 2, 0, 0, 1, 1};
    CHECK(adjusted_rand_index(a, a) == doctest::Approx(1.0));
    CHECK(adjusted_rand_index(a, b) == doctest::Approx(1.0));
  }

  TEST_CASE("hand-computed value") {
    // contingency [[2,1],[0,2]] over n=5: index 2, expected 1.6, max 4
    const std::vector<int> a{0, 0, 0, 1, 1}, b{0, 0, 1, 1, 1};
    CHECK(adjusted_rand_index(a, b) == doctest::Approx((2.0 - 1.6) / (4.0 - 1.6)));
  }
}
