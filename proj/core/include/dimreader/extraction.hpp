#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dimreader/dual.hpp"
#include "dimreader/isomap.hpp"
#include "dimreader/lle.hpp"
#include "dimreader/matrix.hpp"
#include "dimreader/pca.hpp"
#include "dimreader/projection.hpp"
#include "dimreader/tsne.hpp"

namespace dimreader {

/// How each input point is to be perturbed: one direction row per
/// point. Nonzero rows must have unit 2-norm and at least one row must
/// be nonzero.
struct PerturbationField {
  enum class Mode { kAxis, kCustom };
  Matrix<double> directions;  // n x d
  Mode mode = Mode::kCustom;

  /// Every point perturbed along input dimension `dim`.
  static PerturbationField axis(int n, int d, int dim);

  /// Per-point directions; rows are normalized (rows with norm below
  /// 1e-12 become zero rows).
  static PerturbationField custom(Matrix<double> rows);

  void validate() const;
};

/// Extraction output: one projected-plane derivative vector per input
/// point, plus how many perturbed rounds contributed to each and how
/// many projection executions the scheme used in total.
struct PerturbationVectors {
  Matrix<double> vectors;   // n x 2
  std::vector<int> counts;  // >= 1 each on completion
  int runs = 0;
};

/// Owns one dataset + projection configuration and serves dual
/// projection executions against it. The plain projection runs once up
/// front (for t-SNE this captures the fixed point all replays restart
/// from); after that every run_dual call is pure and may execute
/// concurrently with any other.
class ProjectionDriver {
 public:
  ProjectionDriver(Matrix<double> data, ProjectionConfig config);

  const Matrix<double>& data() const { return data_; }
  const ProjectionConfig& config() const { return config_; }
  int n() const { return data_.rows(); }
  int d() const { return data_.cols(); }

  /// Value-channel projection coordinates (n x 2).
  const Matrix<double>& plain_coords() const { return plain_coords_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// t-SNE fixed point; null for other methods.
  const TsneFixedPoint* fixed_point() const { return fixed_point_.get(); }

  /// One projection execution over duals with the given derivative
  /// seeds (n x d, same shape as the data).
  Matrix<Dual> run_dual(const Matrix<double>& seeds) const;

 private:
  Matrix<double> data_;
  ProjectionConfig config_;
  Matrix<double> plain_coords_;
  std::vector<std::string> warnings_;
  std::unique_ptr<TsneFixedPoint> fixed_point_;
  // PCA applies a fixed affine map; cache it instead of re-deriving the
  // principal directions on every dual run.
  Matrix<double> pca_map_;        // 2 x d
  std::vector<double> pca_mean_;  // d
};

/// Fig. 5 basic scheme: one dual projection execution per point, run i
/// seeding only row i of the field; only the derivative of v_i is kept
/// from run i. Exactly n runs. Projection failures are annotated with
/// the failing point index.
PerturbationVectors extract_one_at_a_time(const ProjectionDriver& driver,
                                          const PerturbationField& field);

/// Fig. 5 improved scheme: each round perturbs a random half of the
/// points and keeps the derivative vectors of the perturbed ones,
/// looping until every point has been perturbed at least once (expected
/// log2(n) rounds; more than 64 rounds throws RoundLimitExceeded, which
/// for any feasible n means a broken random source). Vectors are
/// per-point averages over their rounds. Unselected points carry the
/// negated field row as their seed; see the note on
/// halves_complement_sign below.
PerturbationVectors extract_randomized_halves(const ProjectionDriver& driver,
                                              const PerturbationField& field,
                                              std::uint64_t seed);

/// Round count the halves scheme would use for n points under the given
/// seed: pure function of the selection stream, no projections run.
/// Separated out so the logarithmic-round-count property is testable in
/// isolation; throws RoundLimitExceeded past 64 rounds.
int simulate_halves_rounds(int n, std::uint64_t seed);

/// Cross-derivative magnitudes |dv_j / dp_i| for all pairs: entry (i, j)
/// is the norm of point j's derivative vector when only point i is
/// perturbed. One run per point; diagnostic for the "off-point effects
/// are negligible" assumption.
Matrix<double> measure_off_point_effects(const ProjectionDriver& driver,
                                         const PerturbationField& field);

}  // namespace dimreader
