#pragma once

#include <vector>

#include "dimreader/graph.hpp"
#include "dimreader/linalg.hpp"
#include "dimreader/projection.hpp"

namespace dimreader {

namespace detail {

/// Neighbour indices per point for LLE: the k nearest by value-channel
/// distance (no symmetrization; reconstruction is directional).
template <Scalar S>
std::vector<std::vector<int>> lle_neighbors(const Matrix<S>& points, int k) {
  const int n = points.rows();
  std::vector<std::vector<int>> out(n);
  std::vector<std::pair<double, int>> candidates(n - 1);
  for (int i = 0; i < n; ++i) {
    int m = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      candidates[m++] = {value_of(squared_distance(points.row(i), points.row(j))), j};
    }
    std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end());
    out[i].reserve(k);
    for (int t = 0; t < k; ++t) out[i].push_back(candidates[t].second);
  }
  return out;
}

}  // namespace detail

/// Per-point reconstruction weights: the constrained least squares
/// "rebuild x_i from its neighbours, weights summing to one". The local
/// Gram system is regularized by adding delta * trace(G)/k to the
/// diagonal (delta = 1e-3) and solved with conjugate gradients so dual
/// channels flow through. Rows of the returned weight structure sum to
/// one exactly up to the solve tolerance.
template <Scalar S>
struct LleWeights {
  std::vector<std::vector<int>> neighbors;  // per point, size k
  std::vector<std::vector<S>> weights;      // aligned with neighbors
};

template <Scalar S>
LleWeights<S> lle_reconstruction_weights(const Matrix<S>& data, int k) {
  const int n = data.rows();
  const int d = data.cols();
  constexpr double kDelta = 1e-3;

  LleWeights<S> out;
  out.neighbors = detail::lle_neighbors(data, k);
  out.weights.resize(n);

  Matrix<S> gram(k, k, S(0));
  for (int i = 0; i < n; ++i) {
    const auto& nbrs = out.neighbors[i];
    // G_ab = <x_i - x_a, x_i - x_b>
    for (int a = 0; a < k; ++a)
      for (int b = a; b < k; ++b) {
        S acc(0);
        for (int c = 0; c < d; ++c)
          acc += (data(i, c) - data(nbrs[a], c)) * (data(i, c) - data(nbrs[b], c));
        gram(a, b) = acc;
        gram(b, a) = acc;
      }
    S trace(0);
    for (int a = 0; a < k; ++a) trace += gram(a, a);
    // The regularizer depends on the data through the trace, so its
    // derivative channel must flow like everything else.
    S reg = S(kDelta / k) * trace;
    if (value_of(reg) <= 0.0) reg = S(kDelta);  // all neighbours coincide with x_i
    for (int a = 0; a < k; ++a) gram(a, a) += reg;

    MatVecOracle<S> oracle = dense_oracle(gram);
    std::vector<S> ones(k, S(1));
    std::vector<S> w = conjugate_gradients(oracle, ones, 1e-12, 8 * k);
    S total(0);
    for (const auto& x : w) total += x;
    if (value_of(total) == 0.0)
      throw SingularSystem("LLE weight system for point " + std::to_string(i) +
                           " has zero row sum");
    for (auto& x : w) x /= total;
    out.weights[i] = std::move(w);
  }
  return out;
}

/// Locally linear embedding: reconstruction weights, then the two
/// eigenvectors of (I-W)^T (I-W) just above its constant null vector.
/// Both stages run over the Scalar abstraction; every linear solve goes
/// through conjugate gradients.
template <Scalar S>
ProjectionResult<S> lle_project(const Matrix<S>& data, const ProjectionConfig& config) {
  config.validate(data.rows());
  const int n = data.rows();
  const int k = config.k_neighbors;

  // LLE needs the symmetrized neighbourhood graph to be connected or
  // the embedding splits into independent blocks.
  require_connected(knn_graph(data, k));

  LleWeights<S> w = lle_reconstruction_weights(data, k);

  // (I-W)^T (I-W) v, applied in two sparse passes.
  MatVecOracle<S> oracle;
  oracle.dim = n;
  oracle.apply = [&w, n](const std::vector<S>& v) {
    std::vector<S> u(n, S(0));
    for (int i = 0; i < n; ++i) {
      S acc = v[i];
      const auto& nbrs = w.neighbors[i];
      const auto& wi = w.weights[i];
      for (size_t t = 0; t < nbrs.size(); ++t) acc -= wi[t] * v[nbrs[t]];
      u[i] = acc;
    }
    std::vector<S> y(n, S(0));
    for (int i = 0; i < n; ++i) {
      y[i] += u[i];
      const auto& nbrs = w.neighbors[i];
      const auto& wi = w.weights[i];
      for (size_t t = 0; t < nbrs.size(); ++t) y[nbrs[t]] -= wi[t] * u[i];
    }
    return y;
  };

  SolverOptions opt;
  opt.seed = config.seed;
  opt.max_iter = std::max(10 * n, 1000);
  auto pairs = smallest_nonzero_eigenpairs(oracle, 2, /*null_dim=*/1, /*shift=*/0.0, opt);

  ProjectionResult<S> result;
  result.coords = Matrix<S>(n, 2, S(0));
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < n; ++i) result.coords(i, c) = pairs[c].eigenvector[i];
  return result;
}

}  // namespace dimreader
