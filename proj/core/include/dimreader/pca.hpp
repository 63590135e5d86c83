#pragma once

#include <cmath>

#include "dimreader/linalg.hpp"
#include "dimreader/matrix.hpp"
#include "dimreader/projection.hpp"

namespace dimreader {

/// Principal component projection onto the top-k directions.
///
/// The mean and the principal directions are computed once from the
/// value channel and held fixed while differentiating, so the map the
/// derivative sees is exactly the affine map drawn in the static plot:
/// the recovered axes are that plot's grid lines. Differentiating
/// through the eigendecomposition itself is out of scope by design.
template <Scalar S>
ProjectionResult<S> pca_project(const Matrix<S>& data, int k = 2,
                                std::uint64_t seed = 1) {
  const int n = data.rows();
  const int d = data.cols();

  std::vector<double> mean(d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) mean[j] += value_of(data(i, j));
  for (auto& m : mean) m /= n;

  Matrix<double> cov(d, d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < d; ++a) {
      double xa = value_of(data(i, a)) - mean[a];
      for (int b = a; b < d; ++b)
        cov(a, b) += xa * (value_of(data(i, b)) - mean[b]);
    }
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      cov(a, b) /= (n - 1);
      cov(b, a) = cov(a, b);
    }

  MatVecOracle<double> oracle = dense_oracle(cov);
  SolverOptions opt;
  opt.seed = seed;
  opt.max_iter = std::max(10 * d, 500);
  int probe = std::min(k + 1, d);
  std::vector<EigenPair<double>> pairs;
  try {
    pairs = top_k_eigenpairs(oracle, probe, opt);
  } catch (const NoConvergence&) {
    throw DegenerateCovariance("power iteration failed: covariance spectrum degenerate");
  }
  for (int c = 0; c + 1 < probe; ++c)
    if (pairs[c].eigenvalue - pairs[c + 1].eigenvalue <= 1e-12)
      throw DegenerateCovariance("top-" + std::to_string(k) +
                                 " covariance eigenvalues are not distinct");

  ProjectionResult<S> result;
  result.coords = Matrix<S>(n, k, S(0));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < k; ++c) {
      S acc(0);
      for (int j = 0; j < d; ++j)
        acc += (data(i, j) - S(mean[j])) * S(pairs[c].eigenvector[j]);
      result.coords(i, c) = acc;
    }
  return result;
}

/// The fixed 2 x d map of a PCA projection (rows are the principal
/// directions). Every point's Jacobian block equals this matrix.
Matrix<double> pca_projection_matrix(const Matrix<double>& data, int k = 2,
                                     std::uint64_t seed = 1);

}  // namespace dimreader
