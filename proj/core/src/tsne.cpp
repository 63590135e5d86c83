#include "dimreader/tsne.hpp"

namespace dimreader {

TsneFixedPoint tsne_converge(const Matrix<double>& data, const ProjectionConfig& config) {
  config.validate(data.rows());
  const int n = data.rows();

  TsneAffinities<double> aff = tsne_affinities(data, config.perplexity);

  Matrix<double> pos(n, 2, 0.0);
  Rng rng = Rng::substream(config.seed, 0x74736e65ull);  // "tsne"
  for (int i = 0; i < n; ++i) {
    pos(i, 0) = 1e-2 * rng.gaussian();
    pos(i, 1) = 1e-2 * rng.gaussian();
  }

  Matrix<double> grad = tsne_gradient(aff.p, pos);
  int iter = 0;
  while (frobenius_value_norm(grad) > config.grad_tol && iter < config.max_iters) {
    for (int i = 0; i < n; ++i) {
      pos(i, 0) -= config.learning_rate * grad(i, 0);
      pos(i, 1) -= config.learning_rate * grad(i, 1);
    }
    grad = tsne_gradient(aff.p, pos);
    ++iter;
  }

  TsneFixedPoint fp;
  fp.positions = std::move(pos);
  fp.affinities = std::move(aff.p);
  fp.bandwidths = std::move(aff.bandwidths);
  fp.config = config;
  fp.converged = frobenius_value_norm(grad) <= config.grad_tol;
  fp.iterations = iter;
  return fp;
}

Matrix<double> tsne_reconverge(const Matrix<double>& data, const TsneFixedPoint& fixed) {
  const ProjectionConfig& cfg = fixed.config;
  const int n = data.rows();
  // Captured bandwidths are parameters of subsequent runs, not
  // re-searched; see tsne_affinities.
  TsneAffinities<double> aff =
      tsne_affinities(data, cfg.perplexity, &fixed.bandwidths, /*recalibrate=*/false);

  Matrix<double> pos = fixed.positions;
  int iter = 0;
  Matrix<double> grad = tsne_gradient(aff.p, pos);
  do {
    for (int i = 0; i < n; ++i) {
      pos(i, 0) -= cfg.learning_rate * grad(i, 0);
      pos(i, 1) -= cfg.learning_rate * grad(i, 1);
    }
    grad = tsne_gradient(aff.p, pos);
    ++iter;
  } while (frobenius_value_norm(grad) > cfg.grad_tol && iter < cfg.max_iters);
  return pos;
}

std::string to_string(ProjectionMethod m) {
  switch (m) {
    case ProjectionMethod::kPca: return "pca";
    case ProjectionMethod::kIsomap: return "isomap";
    case ProjectionMethod::kLle: return "lle";
    case ProjectionMethod::kTsne: return "tsne";
  }
  return "unknown";
}

ProjectionMethod projection_method_from_string(const std::string& name) {
  if (name == "pca") return ProjectionMethod::kPca;
  if (name == "isomap") return ProjectionMethod::kIsomap;
  if (name == "lle") return ProjectionMethod::kLle;
  if (name == "tsne") return ProjectionMethod::kTsne;
  throw ConfigError("unknown projection method: " + name);
}

}  // namespace dimreader
