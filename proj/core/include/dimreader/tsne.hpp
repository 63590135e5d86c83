#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dimreader/matrix.hpp"
#include "dimreader/projection.hpp"
#include "dimreader/rng.hpp"

namespace dimreader {

/// A converged t-SNE embedding together with everything a later run
/// needs to land in the same local minimum: the symmetrized affinities,
/// the per-point Gaussian bandwidths the perplexity search settled on,
/// and the configuration. Capturing these once makes every subsequent
/// (dual) run deterministic.
struct TsneFixedPoint {
  Matrix<double> positions;         // n x 2, gradient norm <= grad_tol when converged
  Matrix<double> affinities;        // n x n symmetric P, nonnegative, sums to 1
  std::vector<double> bandwidths;   // beta_i captured from the perplexity search
  ProjectionConfig config;
  bool converged = true;
  int iterations = 0;
};

namespace detail {

/// Conditional-entropy row for a given bandwidth. Returns the entropy
/// and fills the unnormalized row exp(-beta * D_ij); a row whose mass
/// underflows reports entropy 0 so the search backs off.
template <Scalar S>
S tsne_row_entropy(const Matrix<S>& sqdist, int i, double beta, std::vector<S>& row) {
  using std::exp;
  using std::log;
  const int n = sqdist.rows();
  S sum(0);
  S weighted(0);
  for (int j = 0; j < n; ++j) {
    if (j == i) {
      row[j] = S(0);
      continue;
    }
    S p = exp(S(-beta) * sqdist(i, j));
    row[j] = p;
    sum += p;
    weighted += sqdist(i, j) * p;
  }
  if (value_of(sum) <= 1e-300) return S(0);
  // H = log(sum) + beta * E[D] ; then normalize the row in place.
  S h = log(sum) + S(beta) * weighted / sum;
  for (int j = 0; j < n; ++j) row[j] /= sum;
  return h;
}

}  // namespace detail

template <Scalar S>
struct TsneAffinities {
  Matrix<S> p;                     // symmetrized, sums to 1
  std::vector<double> bandwidths;  // value-channel beta per point
};

/// Symmetrized high-dimensional affinities. The per-point bandwidth
/// comes from a binary search matching the conditional entropy to
/// log(perplexity) within 1e-5 (at most 30 bisection steps, bandwidth
/// clamped to [1e-10, 1e10]). The search variable itself is a plain
/// double branching on the value channel, so a warm-started dual pass
/// settles on exactly the captured bandwidth and the derivative flows
/// through the Gaussian kernel only.
///
/// recalibrate = false evaluates the rows at the warm-start bandwidths
/// as given: that is the captured-parameter semantics replays use, and
/// it keeps a real-valued replay consistent with what the dual
/// derivative measures (the bisection output is a step function of the
/// data, so re-searching on perturbed data injects quasi-derivative
/// noise a derivative comparison would spuriously pick up).
template <Scalar S>
TsneAffinities<S> tsne_affinities(const Matrix<S>& data, double perplexity,
                                  const std::vector<double>* warm_start = nullptr,
                                  bool recalibrate = true) {
  const int n = data.rows();
  const double target = std::log(perplexity);
  constexpr double kBetaMin = 1e-10;
  constexpr double kBetaMax = 1e10;

  Matrix<S> sqdist(n, n, S(0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      S d = squared_distance(data.row(i), data.row(j));
      sqdist(i, j) = d;
      sqdist(j, i) = d;
    }

  Matrix<S> conditional(n, n, S(0));
  std::vector<double> betas(n, 1.0);
  std::vector<S> row(n, S(0));
  for (int i = 0; i < n; ++i) {
    double beta = warm_start ? (*warm_start)[i] : 1.0;
    double lo = 0.0, hi = 0.0;
    bool has_lo = false, has_hi = false;
    const int search_steps = (warm_start && !recalibrate) ? 0 : 30;
    for (int step = 0; step < search_steps; ++step) {
      S h = detail::tsne_row_entropy(sqdist, i, beta, row);
      double diff = value_of(h) - target;
      if (std::abs(diff) <= 1e-5) break;
      if (diff > 0.0) {  // entropy too high: sharpen
        lo = beta;
        has_lo = true;
        beta = has_hi ? 0.5 * (beta + hi) : beta * 2.0;
      } else {
        hi = beta;
        has_hi = true;
        beta = has_lo ? 0.5 * (beta + lo) : beta * 0.5;
      }
      beta = std::min(std::max(beta, kBetaMin), kBetaMax);
    }
    // One more evaluation so the row matches the final bandwidth.
    detail::tsne_row_entropy(sqdist, i, beta, row);
    betas[i] = beta;
    for (int j = 0; j < n; ++j) conditional(i, j) = row[j];
  }

  TsneAffinities<S> out;
  out.bandwidths = std::move(betas);
  out.p = Matrix<S>(n, n, S(0));
  S scale(1.0 / (2.0 * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      out.p(i, j) = (conditional(i, j) + conditional(j, i)) * scale;
    }
  return out;
}

/// KL-divergence gradient of the embedding, 4 sum_j (p-q) w (y_i - y_j)
/// with the heavy-tailed kernel w = 1/(1 + |y_i-y_j|^2). Squared
/// distances throughout; q is floored at 1e-12 on the value channel.
template <Scalar S>
Matrix<S> tsne_gradient(const Matrix<S>& p, const Matrix<S>& pos) {
  const int n = pos.rows();
  Matrix<S> num(n, n, S(0));
  S z(0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      S w = S(1) / (S(1) + squared_distance(pos.row(i), pos.row(j)));
      num(i, j) = w;
      num(j, i) = w;
      z += w + w;
    }

  Matrix<S> grad(n, 2, S(0));
  for (int i = 0; i < n; ++i) {
    S gx(0), gy(0);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      S q = num(i, j) / z;
      if (value_of(q) < 1e-12) q = S(1e-12);
      S common = (p(i, j) - q) * num(i, j);
      gx += common * (pos(i, 0) - pos(j, 0));
      gy += common * (pos(i, 1) - pos(j, 1));
    }
    grad(i, 0) = S(4) * gx;
    grad(i, 1) = S(4) * gy;
  }
  return grad;
}

template <Scalar S>
double frobenius_value_norm(const Matrix<S>& m) {
  double acc = 0.0;
  for (const auto& x : m.data()) acc += value_of(x) * value_of(x);
  return std::sqrt(acc);
}

/// Plain-real t-SNE run to a fixed point: perplexity calibration, then
/// gradient descent pos -= rate * g until the gradient norm drops under
/// grad_tol or the iteration budget runs out (the result is then
/// flagged non-converged rather than thrown away). No momentum, no
/// early exaggeration: the update is exactly the additive descent loop
/// the derivative replay differentiates.
TsneFixedPoint tsne_converge(const Matrix<double>& data, const ProjectionConfig& config);

/// One forced gradient-descent update over the Scalar abstraction from
/// a captured fixed point. With S = Dual and seeded input data this is
/// the single-iteration derivative extraction: the value channel stays
/// at the fixed point (FixedPointMismatch if it moves by more than
/// 10 * grad_tol * rate) while the derivative channel picks up
/// d(position)/d(perturbation).
template <Scalar S>
ProjectionResult<S> tsne_replay(const Matrix<S>& data, const TsneFixedPoint& fixed) {
  const int n = data.rows();
  const ProjectionConfig& cfg = fixed.config;
  TsneAffinities<S> aff = tsne_affinities(data, cfg.perplexity, &fixed.bandwidths);

  Matrix<S> pos = lift_matrix<S>(fixed.positions);
  Matrix<S> grad = tsne_gradient(aff.p, pos);
  S rate(cfg.learning_rate);
  for (int i = 0; i < n; ++i) {
    pos(i, 0) -= rate * grad(i, 0);
    pos(i, 1) -= rate * grad(i, 1);
  }

  double moved = 0.0;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 2; ++c) {
      double d = value_of(pos(i, c)) - fixed.positions(i, c);
      moved += d * d;
    }
  moved = std::sqrt(moved);
  if (moved > 10.0 * cfg.grad_tol * cfg.learning_rate)
    throw FixedPointMismatch("replay value channel moved " + std::to_string(moved) +
                             ", fixed point is stale");

  ProjectionResult<S> result;
  result.coords = std::move(pos);
  if (!fixed.converged) result.warnings.push_back("fixed point flagged non-converged");
  return result;
}

/// Plain-real twin of the replay used by finite-difference probes:
/// restart the descent loop from the captured positions on (perturbed)
/// data, forcing at least one update, and run until the gradient norm
/// is back under grad_tol.
Matrix<double> tsne_reconverge(const Matrix<double>& data, const TsneFixedPoint& fixed);

}  // namespace dimreader
