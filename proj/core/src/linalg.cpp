#include "dimreader/linalg.hpp"

#include <cmath>

namespace dimreader {

namespace detail {

CgOutcome cg_core(const MatVecOracle<double>& oracle, const std::vector<double>& b,
                  double tol, int max_iter) {
  const int dim = oracle.dim;
  CgOutcome out;
  out.x.assign(dim, 0.0);
  double bnorm = std::sqrt(dot<double>(b, b));
  if (bnorm == 0.0) return out;

  std::vector<double> r = b;
  std::vector<double> p = r;
  double rsq = dot<double>(r, r);
  // Residuals are not monotone; remember the best iterate so a
  // truncated solve still returns something usable. Ill-conditioned
  // systems plateau for spells proportional to their size before the
  // residual drops again, so the stall window scales with dim.
  std::vector<double> best_x = out.x;
  double best = rsq;
  int stalled = 0;
  const int stall_window = std::max(256, 2 * dim);

  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::sqrt(rsq) <= tol * bnorm) break;
    std::vector<double> ap = oracle.apply(p);
    double pap = dot<double>(p, ap);
    if (pap <= 0.0)
      throw SingularSystem("conjugate gradients met non-positive curvature");
    double alpha = rsq / pap;
    for (int i = 0; i < dim; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    double rsq_next = dot<double>(r, r);
    if (rsq_next < 0.9999 * best) {
      best = rsq_next;
      best_x = out.x;
      stalled = 0;
    } else if (++stalled >= stall_window) {
      out.stagnated = true;
      break;
    }
    double beta = rsq_next / rsq;
    for (int i = 0; i < dim; ++i) p[i] = r[i] + beta * p[i];
    rsq = rsq_next;
  }
  if (best < rsq) {
    out.x = std::move(best_x);
    rsq = best;
  }
  out.rel_residual = std::sqrt(rsq) / bnorm;
  return out;
}

}  // namespace detail

std::vector<EigenPair<double>> jacobi_eigenpairs(Matrix<double> a) {
  const int n = a.rows();
  Matrix<double> v(n, n, 0.0);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  auto off_norm = [&a, n] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (scale == 0.0) scale = 1.0;

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps && off_norm() > 1e-14 * scale * n; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<EigenPair<double>> pairs(n);
  for (int j = 0; j < n; ++j) {
    pairs[j].eigenvalue = a(j, j);
    pairs[j].eigenvector.resize(n);
    for (int i = 0; i < n; ++i) pairs[j].eigenvector[i] = v(i, j);
    detail::fix_sign(pairs[j].eigenvector);
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& x, const auto& y) { return x.eigenvalue > y.eigenvalue; });
  return pairs;
}

}  // namespace dimreader
