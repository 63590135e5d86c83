#pragma once

// Test-only reference implementations. Everything here is independent
// of the solver paths it checks: dense eigensolves go through Eigen,
// shortest paths through Floyd-Warshall, derivatives through central
// finite differences.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "dimreader/graph.hpp"
#include "dimreader/matrix.hpp"

namespace oracles {

inline Eigen::MatrixXd to_eigen(const dimreader::Matrix<double>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

struct DenseEigen {
  std::vector<double> eigenvalues;           // descending
  std::vector<std::vector<double>> vectors;  // aligned with eigenvalues
};

/// Full symmetric eigendecomposition via Eigen, sorted descending.
inline DenseEigen dense_eigensolve(const dimreader::Matrix<double>& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(m));
  const int n = m.rows();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return solver.eigenvalues()(a) > solver.eigenvalues()(b);
  });
  DenseEigen out;
  for (int idx : order) {
    out.eigenvalues.push_back(solver.eigenvalues()(idx));
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = solver.eigenvectors()(i, idx);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

/// Dense SPD solve via Eigen LDLT.
inline std::vector<double> dense_solve(const dimreader::Matrix<double>& a,
                                       const std::vector<double>& b) {
  Eigen::VectorXd rhs(b.size());
  for (size_t i = 0; i < b.size(); ++i) rhs(static_cast<int>(i)) = b[i];
  Eigen::VectorXd x = to_eigen(a).ldlt().solve(rhs);
  std::vector<double> out(b.size());
  for (size_t i = 0; i < b.size(); ++i) out[i] = x(static_cast<int>(i));
  return out;
}

/// All-pairs shortest paths by Floyd-Warshall over any scalar type
/// (duals welcome: min picks on the value channel like Dijkstra does).
template <dimreader::Scalar S>
dimreader::Matrix<S> floyd_warshall(const dimreader::WeightedGraph<S>& g) {
  const int n = g.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  dimreader::Matrix<S> d(n, n, S(kInf));
  for (int i = 0; i < n; ++i) d(i, i) = S(0);
  for (int i = 0; i < n; ++i)
    for (const auto& e : g.adjacency[i])
      if (dimreader::value_of(e.weight) < dimreader::value_of(d(i, e.to)))
        d(i, e.to) = e.weight;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (dimreader::value_of(d(i, k)) == kInf || dimreader::value_of(d(k, j)) == kInf)
          continue;
        S via = d(i, k) + d(k, j);
        if (dimreader::value_of(via) < dimreader::value_of(d(i, j))) d(i, j) = via;
      }
  return d;
}

/// Procrustes residual: RMS mismatch between two configurations after
/// the optimal translation + rotation/reflection + (optional) uniform
/// scale alignment.
inline double procrustes_residual(const dimreader::Matrix<double>& a,
                                  const dimreader::Matrix<double>& b,
                                  bool allow_scale = false) {
  Eigen::MatrixXd x = to_eigen(a);
  Eigen::MatrixXd y = to_eigen(b);
  x.rowwise() -= x.colwise().mean();
  y.rowwise() -= y.colwise().mean();
  Eigen::MatrixXd cross = x.transpose() * y;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd rotation = svd.matrixU() * svd.matrixV().transpose();
  double scale = 1.0;
  if (allow_scale) {
    double denom = (x * rotation).squaredNorm();
    if (denom > 0.0) scale = (x * rotation).cwiseProduct(y).sum() / denom;
  }
  double rss = (scale * x * rotation - y).squaredNorm();
  return std::sqrt(rss / a.rows());
}

/// Central finite difference of a scalar function.
inline double central_difference(const std::function<double(double)>& f, double x,
                                 double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double spearman_correlation(std::vector<double> a, std::vector<double> b) {
  auto ranks = [](std::vector<double>& v) {
    std::vector<int> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return v[x] < v[y]; });
    std::vector<double> r(v.size());
    for (size_t i = 0; i < order.size(); ++i) r[order[i]] = static_cast<double>(i);
    return r;
  };
  std::vector<double> ra = ranks(a), rb = ranks(b);
  double n = static_cast<double>(a.size());
  double mean = (n - 1) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  return cov / std::sqrt(va * vb);
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

}  // namespace oracles
