#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dimreader/errors.hpp"
#include "dimreader/matrix.hpp"

namespace dimreader {

enum class ProjectionMethod { kPca, kIsomap, kLle, kTsne };

std::string to_string(ProjectionMethod m);
ProjectionMethod projection_method_from_string(const std::string& name);

/// Knobs for the four projection methods. Everything is positive and a
/// projection call validates the parts it uses against the dataset
/// size; grad_tol is the epsilon of the t-SNE descent loop (Frobenius
/// norm of the KL gradient).
struct ProjectionConfig {
  ProjectionMethod method = ProjectionMethod::kPca;
  int k_neighbors = 10;          // Isomap / LLE
  double perplexity = 30.0;      // t-SNE
  double learning_rate = 100.0;  // t-SNE
  int max_iters = 20000;         // t-SNE
  double grad_tol = 1e-4;        // t-SNE
  std::uint64_t seed = 1;

  void validate(int n) const {
    if (n < 3) throw ConfigError("projection needs at least 3 points");
    if (method == ProjectionMethod::kIsomap || method == ProjectionMethod::kLle) {
      if (k_neighbors < 1) throw ConfigError("k_neighbors must be positive");
      if (k_neighbors >= n) throw ConfigError("k_neighbors must be smaller than n");
    }
    if (method == ProjectionMethod::kTsne) {
      if (perplexity <= 0.0) throw ConfigError("perplexity must be positive");
      if (perplexity >= (n - 1) / 3.0)
        throw ConfigError("perplexity must be below (n-1)/3");
      if (learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
      if (max_iters < 1) throw ConfigError("max_iters must be positive");
      if (grad_tol <= 0.0) throw ConfigError("grad_tol must be positive");
    }
  }
};

/// Projected coordinates (n x 2). When instantiated over Dual the
/// derivative channel holds dv/dp for whatever perturbation the input
/// data was seeded with.
template <Scalar S>
struct ProjectionResult {
  Matrix<S> coords;
  std::vector<std::string> warnings;
};

}  // namespace dimreader
