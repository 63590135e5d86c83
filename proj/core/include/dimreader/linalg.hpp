#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dimreader/errors.hpp"
#include "dimreader/matrix.hpp"
#include "dimreader/rng.hpp"
#include "dimreader/scalar.hpp"

namespace dimreader {

/// Matrix-free view of a symmetric linear operator: a dimension and an
/// apply function. Everything downstream (power iteration, inverse
/// iteration, CG) only ever multiplies, so operators that are too large
/// or too awkward to materialize stay implicit.
template <Scalar S>
struct MatVecOracle {
  int dim = 0;
  std::function<std::vector<S>(const std::vector<S>&)> apply;
};

/// Wraps a dense symmetric matrix as an oracle. The matrix is captured
/// by reference and must outlive the oracle.
template <Scalar S>
MatVecOracle<S> dense_oracle(const Matrix<S>& a) {
  MatVecOracle<S> o;
  o.dim = a.rows();
  o.apply = [&a](const std::vector<S>& x) {
    std::vector<S> y(a.rows(), S(0));
    for (int i = 0; i < a.rows(); ++i) {
      S acc(0);
      auto row = a.row(i);
      for (int j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
      y[i] = acc;
    }
    return y;
  };
  return o;
}

template <Scalar S>
struct EigenPair {
  S eigenvalue;
  std::vector<S> eigenvector;
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 0;  // 0: per-solver default (10*dim for eigensolvers)
  std::uint64_t seed = 1;
  // Magnitude of the dominant eigenvalue of the *undeflated* operator,
  // when known. Supplies an absolute residual floor so that eigenpairs
  // with numerically-zero eigenvalues are accepted instead of chasing
  // an unreachable relative criterion.
  double scale_hint = 0.0;
};

namespace detail {

/// Sign convention for reproducible eigenvectors: the component with
/// the largest |value| is made positive.
template <Scalar S>
void fix_sign(std::vector<S>& v) {
  int arg = 0;
  double best = -1.0;
  for (size_t i = 0; i < v.size(); ++i) {
    double a = std::abs(value_of(v[i]));
    if (a > best) {
      best = a;
      arg = static_cast<int>(i);
    }
  }
  if (value_of(v[arg]) < 0.0)
    for (auto& x : v) x = -x;
}

template <Scalar S>
std::vector<S> random_unit_vector(int dim, Rng& rng) {
  std::vector<S> v(dim);
  for (auto& x : v) x = S(rng.gaussian());
  S n = norm2(v);
  for (auto& x : v) x /= n;
  return v;
}

/// Derivative-channel difference between two iterates, relative to the
/// derivative's own magnitude. Always zero for double, so the
/// dual-settling criteria below cost nothing and change nothing for the
/// plain instantiation.
template <Scalar S>
double deriv_delta_rel(const std::vector<S>& a, const std::vector<S>& b) {
  if constexpr (!has_deriv_channel<S>) {
    return 0.0;
  } else {
    double delta = 0.0;
    double scale = 1.0;
    for (size_t i = 0; i < a.size(); ++i) {
      delta = std::max(delta, std::abs(deriv_of(a[i]) - deriv_of(b[i])));
      scale = std::max({scale, std::abs(deriv_of(a[i])), std::abs(deriv_of(b[i]))});
    }
    return delta / scale;
  }
}

// The derivative channel trails the value channel by a constant number
// of contraction steps; this caps how long we chase it after the value
// has converged.
constexpr int kDerivSettleBudget = 200;

template <Scalar S>
void orthogonalize_against(std::vector<S>& v, const std::vector<std::vector<S>>& basis) {
  for (const auto& b : basis) {
    S c = dot(v, b);
    for (size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
  }
}

struct CgOutcome {
  std::vector<double> x;
  double rel_residual = 0.0;
  bool stagnated = false;
};

/// Plain-double CG core. Returns its best iterate instead of throwing
/// on a missed tolerance; callers decide what a miss means.
CgOutcome cg_core(const MatVecOracle<double>& oracle, const std::vector<double>& b,
                  double tol, int max_iter);

template <Scalar S>
struct CgResult {
  std::vector<S> x;
  double rel_residual = 0.0;
  bool stagnated = false;
};

/// CG solve generic over the scalar. The derivative channel of the
/// solution of A x = b is itself the solution of a value-channel
/// system: A dx = db - dA x. Splitting the solve this way keeps the
/// conjugate directions free of the vanishing-residual noise a naive
/// dual-CG develops after the value channel converges, and it is exact
/// forward-mode differentiation of the solution map.
template <Scalar S>
CgResult<S> cg_solve(const MatVecOracle<S>& oracle, const std::vector<S>& b, double tol,
                     int max_iter) {
  if constexpr (!has_deriv_channel<S>) {
    CgOutcome out = cg_core(oracle, b, tol, max_iter);
    return {std::move(out.x), out.rel_residual, out.stagnated};
  } else {
    const int dim = oracle.dim;
    MatVecOracle<double> value_oracle;
    value_oracle.dim = dim;
    value_oracle.apply = [&oracle, dim](const std::vector<double>& v) {
      std::vector<S> lifted(dim);
      for (int i = 0; i < dim; ++i) lifted[i] = S(v[i]);
      std::vector<S> applied = oracle.apply(lifted);
      std::vector<double> out(dim);
      for (int i = 0; i < dim; ++i) out[i] = value_of(applied[i]);
      return out;
    };

    std::vector<double> b_val(dim);
    for (int i = 0; i < dim; ++i) b_val[i] = value_of(b[i]);
    CgOutcome value_solve = cg_core(value_oracle, b_val, tol, max_iter);

    // dA x through one application of the dual oracle to (x, 0).
    std::vector<S> lifted(dim);
    for (int i = 0; i < dim; ++i) lifted[i] = S(value_solve.x[i]);
    std::vector<S> ax = oracle.apply(lifted);
    std::vector<double> rhs_d(dim);
    for (int i = 0; i < dim; ++i) rhs_d[i] = deriv_of(b[i]) - deriv_of(ax[i]);
    CgOutcome deriv_solve = cg_core(value_oracle, rhs_d, tol, max_iter);

    CgResult<S> result;
    result.x.resize(dim);
    for (int i = 0; i < dim; ++i) result.x[i] = S(value_solve.x[i], deriv_solve.x[i]);
    result.rel_residual = std::max(value_solve.rel_residual, deriv_solve.rel_residual);
    result.stagnated = value_solve.stagnated || deriv_solve.stagnated;
    return result;
  }
}

}  // namespace detail

/// Dominant eigenpair of a symmetric operator by power iteration.
///
/// Converges when ||A x - lambda x|| <= tol * |lambda| on the value
/// channel (with an absolute floor derived from scale_hint, so that
/// numerically-null operators resolve to eigenvalue 0 instead of
/// failing); dual operators then keep iterating until the derivative
/// channel settles as well. The returned vector has unit 2-norm and
/// its largest-magnitude component positive.
template <Scalar S>
EigenPair<S> power_iteration(const MatVecOracle<S>& oracle, SolverOptions opt = {}) {
  const int dim = oracle.dim;
  // 10*dim iterations with a floor: small operators with moderate
  // eigenvalue ratios legitimately need a couple hundred steps.
  const int max_iter = opt.max_iter > 0 ? opt.max_iter : std::max(10 * dim, 256);
  const double abs_floor = 1e-13 * opt.scale_hint;
  Rng rng = Rng::substream(opt.seed, 0x70776974ull);  // "pwit"
  std::vector<S> x = detail::random_unit_vector<S>(dim, rng);

  S lambda(0);
  bool value_converged = false;
  int settle_left = detail::kDerivSettleBudget;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<S> y = oracle.apply(x);
    lambda = dot(x, y);  // Rayleigh quotient carries the eigenvalue sign
    double resid = 0.0;
    for (int i = 0; i < dim; ++i) {
      double r = value_of(y[i]) - value_of(lambda) * value_of(x[i]);
      resid += r * r;
    }
    resid = std::sqrt(resid);
    const double accept = std::max(opt.tol * std::abs(value_of(lambda)), abs_floor);
    if (resid <= accept) {
      value_converged = true;
      // x already satisfies the residual test; one more normalized step
      // only improves it, but the derivative channel may still be moving.
      S ny = norm2(y);
      if (value_of(ny) == 0.0) break;  // exact null operator: keep x, lambda = 0
      std::vector<S> next = y;
      for (auto& c : next) c /= ny;
      double settled = detail::deriv_delta_rel(next, x);
      x = std::move(next);
      if (settled <= 1e-9 || --settle_left <= 0) break;
      continue;
    }
    S ny = norm2(y);
    if (value_of(ny) == 0.0) {
      // Landed exactly in the null space; restart from a fresh vector.
      x = detail::random_unit_vector<S>(dim, rng);
      continue;
    }
    for (auto& c : y) c /= ny;
    x = std::move(y);
  }
  if (!value_converged)
    throw NoConvergence("power iteration did not meet the residual criterion", max_iter);

  detail::fix_sign(x);
  std::vector<S> y = oracle.apply(x);
  lambda = dot(x, y);
  return {lambda, std::move(x)};
}

/// Top-k eigenpairs by power iteration with deflation: once a pair
/// (lambda, x) is known the operator acts as A - lambda x x^T for the
/// next pair, and iterates are re-orthogonalized against everything
/// found. Pairs come back sorted by descending eigenvalue, pairwise
/// orthogonal.
template <Scalar S>
std::vector<EigenPair<S>> top_k_eigenpairs(const MatVecOracle<S>& oracle, int k,
                                           SolverOptions opt = {}) {
  std::vector<EigenPair<S>> found;
  std::vector<std::vector<S>> basis;
  double scale = opt.scale_hint;
  for (int j = 0; j < k; ++j) {
    MatVecOracle<S> deflated;
    deflated.dim = oracle.dim;
    deflated.apply = [&oracle, &found, &basis](const std::vector<S>& v) {
      std::vector<S> y = oracle.apply(v);
      for (size_t m = 0; m < found.size(); ++m) {
        S c = found[m].eigenvalue * dot(basis[m], v);
        for (size_t i = 0; i < y.size(); ++i) y[i] -= c * basis[m][i];
      }
      detail::orthogonalize_against(y, basis);
      return y;
    };
    SolverOptions sub = opt;
    sub.seed = opt.seed + static_cast<std::uint64_t>(j) * 0x9e37ull;
    sub.scale_hint = scale;
    EigenPair<S> pair = power_iteration(deflated, sub);
    detail::orthogonalize_against(pair.eigenvector, basis);
    S n = norm2(pair.eigenvector);
    for (auto& c : pair.eigenvector) c /= n;
    // Rayleigh quotient against the original, undeflated operator.
    pair.eigenvalue = dot(pair.eigenvector, oracle.apply(pair.eigenvector));
    scale = std::max(scale, std::abs(value_of(pair.eigenvalue)));
    basis.push_back(pair.eigenvector);
    found.push_back(std::move(pair));
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return value_of(a.eigenvalue) > value_of(b.eigenvalue);
  });
  return found;
}

/// Conjugate gradients for a symmetric positive definite operator.
/// Derivative channels flow through the solve (see detail::cg_solve).
template <Scalar S>
std::vector<S> conjugate_gradients(const MatVecOracle<S>& oracle, const std::vector<S>& b,
                                   double tol = 1e-12, int max_iter = 0) {
  if (max_iter <= 0) max_iter = 4 * oracle.dim;
  detail::CgResult<S> out = detail::cg_solve(oracle, b, tol, max_iter);
  if (out.rel_residual > tol) {
    if (out.stagnated)
      throw SingularSystem("conjugate gradients stagnated at relative residual " +
                           std::to_string(out.rel_residual));
    throw NoConvergence("conjugate gradients did not reach tolerance", max_iter);
  }
  return std::move(out.x);
}

/// k eigenpairs with the smallest eigenvalues strictly above a known
/// null space of dimension null_dim, ascending, for a symmetric PSD
/// operator. Inverse power iteration: each step solves
/// (A + shift I) y = x with conjugate gradients and orthogonalizes
/// against everything found so far, so the pass walks the spectrum from
/// the bottom; the first null_dim pairs are the null space and are
/// discarded. Inner solves are best-effort (inverse iteration tolerates
/// loose solves and the rhs rapidly becomes an eigenvector, at which
/// point CG is exact in one step); the outer Rayleigh residual is the
/// criterion that counts.
template <Scalar S>
std::vector<EigenPair<S>> smallest_nonzero_eigenpairs(const MatVecOracle<S>& oracle, int k,
                                                      int null_dim, double shift = 0.0,
                                                      SolverOptions opt = {}) {
  const int dim = oracle.dim;
  const int max_iter = opt.max_iter > 0 ? opt.max_iter : std::max(10 * dim, 256);

  // trace/dim gives the characteristic scale for the default shift and
  // the residual floor.
  double trace = 0.0;
  {
    std::vector<S> e(dim, S(0));
    for (int i = 0; i < dim; ++i) {
      e[i] = S(1);
      trace += value_of(oracle.apply(e)[i]);
      e[i] = S(0);
    }
  }
  double scale = std::abs(trace) / dim;
  if (scale == 0.0) scale = 1.0;
  if (shift <= 0.0) shift = 1e-9 * scale;

  MatVecOracle<S> shifted;
  shifted.dim = dim;
  shifted.apply = [&oracle, shift](const std::vector<S>& v) {
    std::vector<S> y = oracle.apply(v);
    for (size_t i = 0; i < y.size(); ++i) y[i] += S(shift) * v[i];
    return y;
  };

  std::vector<std::vector<S>> basis;
  std::vector<EigenPair<S>> collected;
  Rng rng = Rng::substream(opt.seed, 0x696e7633ull);  // "inv3"

  for (int m = 0; m < null_dim + k; ++m) {
    std::vector<S> x = detail::random_unit_vector<S>(dim, rng);
    detail::orthogonalize_against(x, basis);
    {
      S n = norm2(x);
      if (value_of(n) == 0.0)
        throw NoConvergence("inverse iteration start vector degenerate", 0);
      for (auto& c : x) c /= n;
    }

    S lambda(0);
    bool converged = false;
    int settle_left = detail::kDerivSettleBudget;
    for (int iter = 0; iter < max_iter; ++iter) {
      // The derivative-channel systems stay badly conditioned even when
      // the value rhs has collapsed onto an eigenvector, and CG needs
      // roughly sqrt(cond) iterations to push through; applies here are
      // cheap, so the budget is generous.
      detail::CgResult<S> solve =
          detail::cg_solve(shifted, x, 1e-12, std::max(20 * dim, 4000));
      std::vector<S> y = std::move(solve.x);
      detail::orthogonalize_against(y, basis);
      S n = norm2(y);
      if (value_of(n) == 0.0)
        throw SingularSystem("inverse iteration collapsed onto the found subspace");
      for (auto& c : y) c /= n;
      std::vector<S> ay = oracle.apply(y);
      lambda = dot(y, ay);
      double resid = 0.0;
      for (int i = 0; i < dim; ++i) {
        double r = value_of(ay[i]) - value_of(lambda) * value_of(y[i]);
        resid += r * r;
      }
      resid = std::sqrt(resid);
      const double accept =
          std::max(opt.tol * std::abs(value_of(lambda)), 1e-13 * scale);
      if (resid <= accept) {
        double settled = detail::deriv_delta_rel(y, x);
        x = std::move(y);
        if (settled <= 1e-9 || --settle_left <= 0) {
          converged = true;
          break;
        }
        continue;
      }
      x = std::move(y);
    }
    if (!converged)
      throw NoConvergence("inverse power iteration did not converge", max_iter);

    detail::fix_sign(x);
    lambda = dot(x, oracle.apply(x));
    basis.push_back(x);
    collected.push_back({lambda, std::move(x)});
  }

  std::stable_sort(collected.begin(), collected.end(), [](const auto& a, const auto& b) {
    return value_of(a.eigenvalue) < value_of(b.eigenvalue);
  });
  collected.erase(collected.begin(), collected.begin() + null_dim);
  return collected;
}

template <Scalar S>
struct MdsResult {
  Matrix<S> coords;                   // n x k, centered
  std::vector<std::string> warnings;  // NegativeSpectrum when clamping
};

/// Classical multidimensional scaling: double-center -D^2/2 and embed
/// with the top-k eigenpairs, each scaled by sqrt(eigenvalue).
/// Meaningfully negative selected eigenvalues (non-Euclidean input) are
/// clamped to zero with a warning. Runs over the Scalar abstraction
/// because Isomap feeds it dual-valued geodesic distances.
template <Scalar S>
MdsResult<S> classical_mds(const Matrix<S>& distances, int k, SolverOptions opt = {}) {
  const int n = distances.rows();
  Matrix<S> b(n, n);
  {
    // B = -1/2 J D^2 J via row/column/total means of D^2.
    std::vector<S> row_mean(n, S(0));
    S total(0);
    for (int i = 0; i < n; ++i) {
      S acc(0);
      for (int j = 0; j < n; ++j) {
        S d = distances(i, j);
        acc += d * d;
      }
      row_mean[i] = acc / S(static_cast<double>(n));
      total += acc;
    }
    S grand = total / S(static_cast<double>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        S d = distances(i, j);
        b(i, j) = S(-0.5) * (d * d - row_mean[i] - row_mean[j] + grand);
      }
  }

  MatVecOracle<S> oracle = dense_oracle(b);
  auto pairs = top_k_eigenpairs(oracle, k, opt);

  double top = std::abs(value_of(pairs.empty() ? S(0) : pairs[0].eigenvalue));
  MdsResult<S> result;
  result.coords = Matrix<S>(n, k, S(0));
  for (int c = 0; c < k; ++c) {
    double ev = value_of(pairs[c].eigenvalue);
    if (ev <= 1e-12 * std::max(top, 1e-300)) {
      if (ev < -1e-9 * top)
        result.warnings.push_back("NegativeSpectrum: eigenvalue " + std::to_string(c) +
                                  " clamped to zero (non-Euclidean distances)");
      continue;  // column stays zero
    }
    using std::sqrt;
    S s = sqrt(pairs[c].eigenvalue);
    for (int i = 0; i < n; ++i) result.coords(i, c) = s * pairs[c].eigenvector[i];
  }

  // Double centering already annihilates the constant direction; this
  // removes the residual numerical drift so downstream code can rely on
  // exactly centered output.
  for (int c = 0; c < k; ++c) {
    S mean(0);
    for (int i = 0; i < n; ++i) mean += result.coords(i, c);
    mean /= S(static_cast<double>(n));
    for (int i = 0; i < n; ++i) result.coords(i, c) -= mean;
  }
  return result;
}

/// All eigenpairs of a small dense symmetric matrix by cyclic Jacobi,
/// descending. Double-only: this is the exact cross-check path of the
/// discovery module, nothing differentiates through it.
std::vector<EigenPair<double>> jacobi_eigenpairs(Matrix<double> a);

}  // namespace dimreader
