#include <doctest.h>

#include <cmath>

#include "dimreader/linalg.hpp"
#include "dimreader/rng.hpp"
#include "support/oracles.hpp"

using namespace dimreader;

namespace {

Matrix<double> random_symmetric(int n, Rng& rng) {
  Matrix<double> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = rng.uniform(-1.0, 1.0);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

Matrix<double> random_spd(int n, Rng& rng) {
  Matrix<double> a(n, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  Matrix<double> spd(n, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += a(k, i) * a(k, j);
      spd(i, j) = acc + (i == j ? 0.5 : 0.0);
    }
  return spd;
}

double abs_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return std::abs(num) / std::sqrt(na * nb);
}

}  // namespace

TEST_CASE("power iteration finds the dominant diagonal eigenpair") {
  Matrix<double> m(2, 2, 0.0);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  auto oracle = dense_oracle(m);
  auto pair = power_iteration(oracle);
  CHECK(pair.eigenvalue == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(std::abs(pair.eigenvector[0]) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(pair.eigenvector[1]) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(pair.eigenvector[0] > 0.0);  // sign convention
}

TEST_CASE("power iteration accepts a degenerate identity spectrum") {
  Matrix<double> m(5, 5, 0.0);
  for (int i = 0; i < 5; ++i) m(i, i) = 1.0;
  auto oracle = dense_oracle(m);
  auto pair = power_iteration(oracle);
  CHECK(pair.eigenvalue == doctest::Approx(1.0).epsilon(1e-12));
  double norm = 0.0;
  for (double v : pair.eigenvector) norm += v * v;
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("power iteration matches the dense oracle on random symmetric matrices") {
  Rng rng(11);
  int tested = 0;
  while (tested < 8) {
    Matrix<double> m = random_symmetric(6, rng);
    auto dense = oracles::dense_eigensolve(m);
    // The suite is fixed: skip draws whose dominant pair is not clearly
    // separated in magnitude, power iteration is not defined for those.
    double top = std::abs(dense.eigenvalues.front());
    double bottom = std::abs(dense.eigenvalues.back());
    double hi = std::max(top, bottom);
    double lo = std::min(top, bottom);
    if (hi - lo < 0.1 * hi) continue;
    ++tested;

    auto oracle = dense_oracle(m);
    SolverOptions opt;
    opt.max_iter = 5000;
    auto pair = power_iteration(oracle, opt);
    double expected =
        top >= bottom ? dense.eigenvalues.front() : dense.eigenvalues.back();
    const auto& expected_vec =
        top >= bottom ? dense.vectors.front() : dense.vectors.back();
    CHECK(std::abs(pair.eigenvalue - expected) <= 1e-8 * hi);
    CHECK(abs_cosine(pair.eigenvector, expected_vec) >= 1.0 - 1e-8);
  }
}

TEST_CASE("top-k eigenpairs come back ordered and orthogonal") {
  Matrix<double> m(3, 3, 0.0);
  m(0, 0) = 5.0;
  m(1, 1) = 2.0;
  m(2, 2) = 1.0;
  auto pairs = top_k_eigenpairs(dense_oracle(m), 2);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].eigenvalue == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(pairs[1].eigenvalue == doctest::Approx(2.0).epsilon(1e-9));
  double cross = 0.0;
  for (int i = 0; i < 3; ++i) cross += pairs[0].eigenvector[i] * pairs[1].eigenvector[i];
  CHECK(std::abs(cross) <= 1e-8);
}

TEST_CASE("second eigenvalue of a rank-one centered metric is numerically zero") {
  // Four colinear points: the double-centered squared-distance matrix
  // has rank one.
  Matrix<double> d(4, 4, 0.0);
  double xs[4] = {0.0, 1.0, 2.0, 3.0};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d(i, j) = std::abs(xs[i] - xs[j]);

  Matrix<double> b(4, 4, 0.0);
  double row[4] = {0, 0, 0, 0}, grand = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) row[i] += d(i, j) * d(i, j);
    row[i] /= 4;
    grand += row[i];
  }
  grand /= 4;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      b(i, j) = -0.5 * (d(i, j) * d(i, j) - row[i] - row[j] + grand);

  auto dense = oracles::dense_eigensolve(b);
  auto pairs = top_k_eigenpairs(dense_oracle(b), 2);
  CHECK(std::abs(pairs[0].eigenvalue - dense.eigenvalues[0]) <=
        1e-8 * std::abs(dense.eigenvalues[0]));
  CHECK(std::abs(pairs[1].eigenvalue) <= 1e-8 * std::abs(dense.eigenvalues[0]));
}

TEST_CASE("full spectrum by deflation matches the dense oracle") {
  Rng rng(23);
  Matrix<double> m = random_spd(5, rng);
  auto dense = oracles::dense_eigensolve(m);
  SolverOptions opt;
  opt.max_iter = 20000;
  auto pairs = top_k_eigenpairs(dense_oracle(m), 5, opt);
  for (int c = 0; c < 5; ++c) {
    CHECK(std::abs(pairs[c].eigenvalue - dense.eigenvalues[c]) <=
          1e-7 * std::abs(dense.eigenvalues[0]));
  }
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) {
      double cross = 0.0;
      for (int i = 0; i < 5; ++i)
        cross += pairs[a].eigenvector[i] * pairs[b].eigenvector[i];
      CHECK(std::abs(cross) <= 1e-8);
    }
}

TEST_CASE("conjugate gradients solves identity and diagonal systems") {
  Matrix<double> eye(3, 3, 0.0);
  for (int i = 0; i < 3; ++i) eye(i, i) = 1.0;
  std::vector<double> b{1.0, -2.0, 3.0};
  auto x = conjugate_gradients(dense_oracle(eye), b);
  for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-12));

  Matrix<double> diag(2, 2, 0.0);
  diag(0, 0) = 2.0;
  diag(1, 1) = 4.0;
  std::vector<double> rhs{2.0, 8.0};
  auto y = conjugate_gradients(dense_oracle(diag), rhs);
  CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(y[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("conjugate gradients matches a dense solve on random SPD systems") {
  Rng rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix<double> a = random_spd(8, rng);
    std::vector<double> b(8);
    for (auto& v : b) v = rng.uniform(-1.0, 1.0);
    auto x = conjugate_gradients(dense_oracle(a), b, 1e-12, 64);
    auto expected = oracles::dense_solve(a, b);
    double scale = 0.0;
    for (double v : expected) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < 8; ++i) CHECK(std::abs(x[i] - expected[i]) <= 1e-8 * scale);
  }
}

TEST_CASE("conjugate gradients flows dual channels through the solve") {
  // A(t) x(t) = b(t) with A = [[2+t, 0], [0, 4]], b = [2, 8+2t] at t=0:
  // x = [(2)/(2+t), (8+2t)/4], dx/dt = [-1/2, 1/2].
  Matrix<Dual> a(2, 2, Dual(0.0));
  a(0, 0) = Dual(2.0, 1.0);
  a(1, 1) = Dual(4.0, 0.0);
  std::vector<Dual> b{Dual(2.0, 0.0), Dual(8.0, 2.0)};
  auto x = conjugate_gradients(dense_oracle(a), b);
  CHECK(x[0].value() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x[0].deriv() == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(x[1].value() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(x[1].deriv() == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("inverse iteration finds the smallest eigenpairs above the null space") {
  SUBCASE("diagonal with an explicit null direction") {
    Matrix<double> m(3, 3, 0.0);
    m(1, 1) = 1.0;
    m(2, 2) = 4.0;
    auto pairs = smallest_nonzero_eigenpairs(dense_oracle(m), 1, 1);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].eigenvalue == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(pairs[0].eigenvector[1]) == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("path-graph Laplacian Fiedler value") {
    // Path on 4 vertices; the Fiedler value is 2 - sqrt(2).
    Matrix<double> lap(4, 4, 0.0);
    int edges[3][2] = {{0, 1}, {1, 2}, {2, 3}};
    for (auto& e : edges) {
      lap(e[0], e[0]) += 1.0;
      lap(e[1], e[1]) += 1.0;
      lap(e[0], e[1]) -= 1.0;
      lap(e[1], e[0]) -= 1.0;
    }
    auto dense = oracles::dense_eigensolve(lap);
    auto pairs = smallest_nonzero_eigenpairs(dense_oracle(lap), 1, 1);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].eigenvalue == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-8));
    CHECK(std::abs(pairs[0].eigenvalue - dense.eigenvalues[2]) <= 1e-8);
  }
}

TEST_CASE("inverse iteration matches the dense oracle on a fixed random suite") {
  Rng rng(51);
  for (int trial = 0; trial < 4; ++trial) {
    int n = 6 + 2 * trial;  // 6..12
    // PSD with a known 1-dim null space: A = B^T B with B (n-1) x n and
    // rows orthogonal to the constant vector.
    Matrix<double> b(n - 1, n, 0.0);
    for (int i = 0; i < n - 1; ++i) {
      double mean = 0.0;
      for (int j = 0; j < n; ++j) {
        b(i, j) = rng.uniform(-1.0, 1.0);
        mean += b(i, j);
      }
      for (int j = 0; j < n; ++j) b(i, j) -= mean / n;
    }
    Matrix<double> a(n, n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n - 1; ++k) acc += b(k, i) * b(k, j);
        a(i, j) = acc;
      }

    auto dense = oracles::dense_eigensolve(a);
    auto pairs = smallest_nonzero_eigenpairs(dense_oracle(a), 2, 1);
    REQUIRE(pairs.size() == 2);
    // dense is descending; the two wanted values are at positions n-2, n-3.
    CHECK(std::abs(pairs[0].eigenvalue - dense.eigenvalues[n - 2]) <=
          1e-8 * dense.eigenvalues[0]);
    CHECK(std::abs(pairs[1].eigenvalue - dense.eigenvalues[n - 3]) <=
          1e-8 * dense.eigenvalues[0]);
    // Orthogonal to the constant null vector and to each other.
    double mean0 = 0.0, mean1 = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
      mean0 += pairs[0].eigenvector[i];
      mean1 += pairs[1].eigenvector[i];
      cross += pairs[0].eigenvector[i] * pairs[1].eigenvector[i];
    }
    CHECK(std::abs(mean0) <= 1e-6);
    CHECK(std::abs(mean1) <= 1e-6);
    CHECK(std::abs(cross) <= 1e-8);
  }
}

TEST_CASE("classical MDS reproduces simple metric configurations") {
  SUBCASE("equilateral triangle") {
    Matrix<double> d(3, 3, 0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) d(i, j) = i == j ? 0.0 : 1.0;
    auto mds = classical_mds(d, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        double dist = std::hypot(mds.coords(i, 0) - mds.coords(j, 0),
                                 mds.coords(i, 1) - mds.coords(j, 1));
        CHECK(dist == doctest::Approx(1.0).epsilon(1e-6));
      }
  }

  SUBCASE("colinear points embed on a line") {
    Matrix<double> d(3, 3, 0.0);
    double xs[3] = {0.0, 1.0, 2.0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) d(i, j) = std::abs(xs[i] - xs[j]);
    auto mds = classical_mds(d, 1);
    std::vector<double> got{mds.coords(0, 0), mds.coords(1, 0), mds.coords(2, 0)};
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(got[1] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(got[2] == doctest::Approx(1.0).epsilon(1e-8));
  }

  SUBCASE("recovers a random planar configuration up to rigid motion") {
    Rng rng(77);
    Matrix<double> pts(5, 2);
    for (int i = 0; i < 5; ++i) {
      pts(i, 0) = rng.uniform(-1.0, 1.0);
      pts(i, 1) = rng.uniform(-1.0, 1.0);
    }
    Matrix<double> d(5, 5, 0.0);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        d(i, j) = std::hypot(pts(i, 0) - pts(j, 0), pts(i, 1) - pts(j, 1));
    auto mds = classical_mds(d, 2);
    CHECK(oracles::procrustes_residual(mds.coords, pts) <= 1e-6);
  }
}

TEST_CASE("solvers are bit-deterministic for a fixed seed") {
  Rng rng(13);
  Matrix<double> m = random_spd(6, rng);
  SolverOptions opt;
  opt.seed = 5;
  opt.max_iter = 5000;
  auto a = power_iteration(dense_oracle(m), opt);
  auto b = power_iteration(dense_oracle(m), opt);
  CHECK(a.eigenvalue == b.eigenvalue);
  for (int i = 0; i < 6; ++i) CHECK(a.eigenvector[i] == b.eigenvector[i]);
}

TEST_CASE("jacobi eigensolver agrees with the dense oracle") {
  Rng rng(91);
  Matrix<double> m = random_symmetric(7, rng);
  auto dense = oracles::dense_eigensolve(m);
  auto mine = jacobi_eigenpairs(m);
  for (int c = 0; c < 7; ++c)
    CHECK(std::abs(mine[c].eigenvalue - dense.eigenvalues[c]) <= 1e-10);
}
