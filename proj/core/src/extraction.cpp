#include "dimreader/extraction.hpp"

#include "dimreader/parallel.hpp"
#include "dimreader/rng.hpp"

namespace dimreader {

PerturbationField PerturbationField::axis(int n, int d, int dim) {
  if (dim < 0 || dim >= d) throw ConfigError("axis dimension out of range");
  PerturbationField f;
  f.mode = Mode::kAxis;
  f.directions = Matrix<double>(n, d, 0.0);
  for (int i = 0; i < n; ++i) f.directions(i, dim) = 1.0;
  return f;
}

PerturbationField PerturbationField::custom(Matrix<double> rows) {
  PerturbationField f;
  f.mode = Mode::kCustom;
  f.directions = std::move(rows);
  for (int i = 0; i < f.directions.rows(); ++i) {
    double norm = 0.0;
    for (int j = 0; j < f.directions.cols(); ++j)
      norm += f.directions(i, j) * f.directions(i, j);
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
      for (int j = 0; j < f.directions.cols(); ++j) f.directions(i, j) = 0.0;
    } else {
      for (int j = 0; j < f.directions.cols(); ++j) f.directions(i, j) /= norm;
    }
  }
  f.validate();
  return f;
}

void PerturbationField::validate() const {
  bool any_nonzero = false;
  for (int i = 0; i < directions.rows(); ++i) {
    double norm = 0.0;
    for (int j = 0; j < directions.cols(); ++j)
      norm += directions(i, j) * directions(i, j);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    any_nonzero = true;
    if (std::abs(norm - 1.0) > 1e-9)
      throw ConfigError("perturbation field row " + std::to_string(i) +
                        " is neither zero nor unit norm");
  }
  if (!any_nonzero) throw ConfigError("perturbation field has no nonzero rows");
}

ProjectionDriver::ProjectionDriver(Matrix<double> data, ProjectionConfig config)
    : data_(std::move(data)), config_(config) {
  if (!all_finite(data_)) throw ConfigError("dataset contains non-finite values");
  config_.validate(data_.rows());

  switch (config_.method) {
    case ProjectionMethod::kPca: {
      auto r = pca_project(data_, 2, config_.seed);
      plain_coords_ = std::move(r.coords);
      warnings_ = std::move(r.warnings);
      pca_map_ = pca_projection_matrix(data_, 2, config_.seed);
      pca_mean_.assign(data_.cols(), 0.0);
      for (int i = 0; i < data_.rows(); ++i)
        for (int j = 0; j < data_.cols(); ++j) pca_mean_[j] += data_(i, j);
      for (auto& m : pca_mean_) m /= data_.rows();
      break;
    }
    case ProjectionMethod::kIsomap: {
      auto r = isomap_project(data_, config_);
      plain_coords_ = std::move(r.coords);
      warnings_ = std::move(r.warnings);
      break;
    }
    case ProjectionMethod::kLle: {
      auto r = lle_project(data_, config_);
      plain_coords_ = std::move(r.coords);
      warnings_ = std::move(r.warnings);
      break;
    }
    case ProjectionMethod::kTsne: {
      fixed_point_ = std::make_unique<TsneFixedPoint>(tsne_converge(data_, config_));
      plain_coords_ = fixed_point_->positions;
      if (!fixed_point_->converged)
        warnings_.push_back("t-SNE stopped at max_iters with gradient above grad_tol");
      break;
    }
  }
}

Matrix<Dual> ProjectionDriver::run_dual(const Matrix<double>& seeds) const {
  Matrix<Dual> lifted = seed_matrix<Dual>(data_, seeds);
  switch (config_.method) {
    case ProjectionMethod::kPca: {
      // Fixed affine map: mean and directions are plot constants.
      const int n = data_.rows(), d = data_.cols();
      Matrix<Dual> coords(n, 2, Dual(0.0));
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < 2; ++c) {
          Dual acc(0.0);
          for (int j = 0; j < d; ++j)
            acc += (lifted(i, j) - Dual(pca_mean_[j])) * Dual(pca_map_(c, j));
          coords(i, c) = acc;
        }
      return coords;
    }
    case ProjectionMethod::kIsomap:
      return isomap_project(lifted, config_).coords;
    case ProjectionMethod::kLle:
      return lle_project(lifted, config_).coords;
    case ProjectionMethod::kTsne:
      return tsne_replay(lifted, *fixed_point_).coords;
  }
  throw ConfigError("unreachable projection method");
}

namespace {

Matrix<double> one_point_seeds(const ProjectionDriver& driver,
                               const PerturbationField& field, int i) {
  Matrix<double> seeds(driver.n(), driver.d(), 0.0);
  for (int j = 0; j < driver.d(); ++j) seeds(i, j) = field.directions(i, j);
  return seeds;
}

}  // namespace

PerturbationVectors extract_one_at_a_time(const ProjectionDriver& driver,
                                          const PerturbationField& field) {
  const int n = driver.n();
  field.validate();
  if (field.directions.rows() != n || field.directions.cols() != driver.d())
    throw ConfigError("perturbation field shape does not match the dataset");

  PerturbationVectors out;
  out.vectors = Matrix<double>(n, 2, 0.0);
  out.counts.assign(n, 1);
  out.runs = n;

  parallel_for(n, [&](int i) {
    try {
      Matrix<Dual> coords = driver.run_dual(one_point_seeds(driver, field, i));
      out.vectors(i, 0) = coords(i, 0).deriv();
      out.vectors(i, 1) = coords(i, 1).deriv();
    } catch (const std::exception& e) {
      throw Error("one-at-a-time extraction failed at point " + std::to_string(i) +
                  ": " + e.what());
    }
  });
  return out;
}

namespace {

std::vector<bool> halves_selection(int n, std::uint64_t seed, int round) {
  Rng rng = Rng::substream(seed, 0x68616c66ull + static_cast<std::uint64_t>(round));
  std::vector<bool> selected(n);
  for (int i = 0; i < n; ++i) selected[i] = rng.coin();
  return selected;
}

constexpr int kHalvesRoundLimit = 64;

}  // namespace

int simulate_halves_rounds(int n, std::uint64_t seed) {
  std::vector<int> counts(n, 0);
  int rounds = 0;
  auto all_counted = [&] {
    for (int c : counts)
      if (c < 1) return false;
    return true;
  };
  while (!all_counted()) {
    if (rounds >= kHalvesRoundLimit)
      throw RoundLimitExceeded("halves selection did not cover all points in 64 rounds");
    std::vector<bool> sel = halves_selection(n, seed, rounds);
    for (int i = 0; i < n; ++i)
      if (sel[i]) ++counts[i];
    ++rounds;
  }
  return rounds;
}

// Seeding note. Fig. 5 leaves unselected points untouched, but for any
// translation-invariant projection the cross effects of the selected
// half then sum to exactly minus half of a point's own effect, and the
// averaged vectors come out biased low by a factor of two relative to
// the one-at-a-time scheme. Seeding the complement with the negated
// field row makes the cross terms mean-zero instead, so the two schemes
// agree for every method (for a linear map the cross terms vanish and
// the schemes are identical either way). Round structure, counts and
// recording are unchanged.
PerturbationVectors extract_randomized_halves(const ProjectionDriver& driver,
                                              const PerturbationField& field,
                                              std::uint64_t seed) {
  const int n = driver.n();
  const int d = driver.d();
  field.validate();
  if (field.directions.rows() != n || field.directions.cols() != d)
    throw ConfigError("perturbation field shape does not match the dataset");

  const int rounds = simulate_halves_rounds(n, seed);

  std::vector<Matrix<double>> round_derivs(rounds);
  std::vector<std::vector<bool>> selections(rounds);
  for (int r = 0; r < rounds; ++r) selections[r] = halves_selection(n, seed, r);

  parallel_for(rounds, [&](int r) {
    Matrix<double> seeds(n, d, 0.0);
    const auto& sel = selections[r];
    for (int i = 0; i < n; ++i) {
      double sign = sel[i] ? 1.0 : -1.0;
      for (int j = 0; j < d; ++j) seeds(i, j) = sign * field.directions(i, j);
    }
    try {
      Matrix<Dual> coords = driver.run_dual(seeds);
      round_derivs[r] = deriv_channel(coords);
    } catch (const std::exception& e) {
      throw Error("halves extraction failed in round " + std::to_string(r) + ": " +
                  e.what());
    }
  });

  PerturbationVectors out;
  out.vectors = Matrix<double>(n, 2, 0.0);
  out.counts.assign(n, 0);
  out.runs = rounds;
  for (int r = 0; r < rounds; ++r) {
    const auto& sel = selections[r];
    for (int i = 0; i < n; ++i) {
      if (!sel[i]) continue;
      out.vectors(i, 0) += round_derivs[r](i, 0);
      out.vectors(i, 1) += round_derivs[r](i, 1);
      ++out.counts[i];
    }
  }
  for (int i = 0; i < n; ++i) {
    out.vectors(i, 0) /= out.counts[i];
    out.vectors(i, 1) /= out.counts[i];
  }
  return out;
}

Matrix<double> measure_off_point_effects(const ProjectionDriver& driver,
                                         const PerturbationField& field) {
  const int n = driver.n();
  field.validate();
  Matrix<double> effects(n, n, 0.0);
  parallel_for(n, [&](int i) {
    Matrix<Dual> coords = driver.run_dual(one_point_seeds(driver, field, i));
    for (int j = 0; j < n; ++j) {
      double dx = coords(j, 0).deriv();
      double dy = coords(j, 1).deriv();
      effects(i, j) = std::sqrt(dx * dx + dy * dy);
    }
  });
  return effects;
}

}  // namespace dimreader
