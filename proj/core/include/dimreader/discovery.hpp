#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dimreader/extraction.hpp"
#include "dimreader/linalg.hpp"
#include "dimreader/matrix.hpp"

namespace dimreader {

/// Block-diagonal tangent map of a projection: per point i a 2 x d
/// block B_i = dv_i/dp_i, stored as rows 2i and 2i+1. Off-block entries
/// are defined to be zero (off-point effects are measured separately
/// and discarded here).
struct TangentMap {
  int n = 0, d = 0;
  Matrix<double> blocks;  // (2n) x d

  double block(int i, int r, int c) const { return blocks(2 * i + r, c); }
  double& block(int i, int r, int c) { return blocks(2 * i + r, c); }
};

/// Recovers the tangent map with d randomized-halves extractions, one
/// per input dimension: the axis-e_j pass fills column j of every B_i.
TangentMap build_tangent_map(const ProjectionDriver& driver, std::uint64_t seed);

struct DiscoveryResult {
  enum class Mode { kGlobal, kPerPoint };
  Mode mode = Mode::kGlobal;
  Matrix<double> perturbation;  // n x d; identical rows in global mode
  double objective = 0.0;       // attained eigenvalue
  double lambda_smooth = 0.0;
  double sigma = 0.0;
  std::vector<std::string> warnings;
};

/// Single direction applied to every point that changes the projection
/// the most: the dominant eigenvector of the d x d matrix
/// sum_i B_i^T B_i. The direction has unit norm; the objective is the
/// attained eigenvalue sum_i ||B_i u||^2.
DiscoveryResult discover_global(const TangentMap& map, SolverOptions opt = {});

enum class PerPointStrategy { kAuto, kDense, kMatrixFree };

/// Similarity default: sigma = half the median pairwise projected
/// distance.
double default_sigma(const Matrix<double>& coords);

/// The dense (nd) x (nd) matrix M^T M - lambda L_s, assembled
/// explicitly. Exposed for the dense strategy and for cross-checks.
Matrix<double> assemble_per_point_matrix(const TangentMap& map,
                                         const Matrix<double>& coords,
                                         double lambda_smooth, double sigma);

/// Per-point perturbations maximizing sum_i ||B_i v_i||^2 -
/// lambda sum_ij S(i,j) ||v_i - v_j||^2 over unit-norm flattened v:
/// the dominant eigenvector of M^T M - lambda L_s, with
/// S(i,j) = exp(-|c_i - c_j|^2 / sigma^2) on the projected coordinates.
///
/// The matrix-free path never materializes L_s: the oracle applies the
/// B_i blocks pointwise and the Laplacian part as
/// sum_j S(i,j) (v_i - v_j), shifted into positive-semidefinite range
/// so power iteration converges to the largest algebraic eigenvalue.
/// nd <= 2000 defaults to the exact dense eigensolve, larger problems
/// to the matrix-free oracle; both are exposed for testing. sigma <= 0
/// selects the default above.
DiscoveryResult discover_per_point(const TangentMap& map, const Matrix<double>& coords,
                                   double lambda_smooth, double sigma,
                                   std::uint64_t seed,
                                   PerPointStrategy strategy = PerPointStrategy::kAuto);

/// Per-dimension |perturbation| maps scaled to [0, 1] for plotting,
/// plus raw per-dimension totals. image_shape, when set by the caller,
/// records how a row reshapes into pixels (IDX image data).
struct PerturbationReport {
  Matrix<double> magnitude_maps;        // n x d, each column scaled to [0, 1]
  std::vector<double> total_magnitude;  // per dimension
  int dominant_dimension = 0;
  std::optional<std::pair<int, int>> image_shape;
};

PerturbationReport perturbation_report(const DiscoveryResult& result);

}  // namespace dimreader
