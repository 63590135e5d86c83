#include "dimreader/pca.hpp"

namespace dimreader {

Matrix<double> pca_projection_matrix(const Matrix<double>& data, int k,
                                     std::uint64_t seed) {
  const int n = data.rows();
  const int d = data.cols();

  std::vector<double> mean(d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) mean[j] += data(i, j);
  for (auto& m : mean) m /= n;

  Matrix<double> cov(d, d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < d; ++a) {
      double xa = data(i, a) - mean[a];
      for (int b = a; b < d; ++b) cov(a, b) += xa * (data(i, b) - mean[b]);
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
  auto pairs = top_k_eigenpairs(oracle, k, opt);

  Matrix<double> w(k, d, 0.0);
  for (int c = 0; c < k; ++c)
    for (int j = 0; j < d; ++j) w(c, j) = pairs[c].eigenvector[j];
  return w;
}

}  // namespace dimreader
