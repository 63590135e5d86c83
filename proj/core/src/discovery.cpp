#include "dimreader/discovery.hpp"

#include <algorithm>
#include <cmath>

namespace dimreader {

TangentMap build_tangent_map(const ProjectionDriver& driver, std::uint64_t seed) {
  TangentMap map;
  map.n = driver.n();
  map.d = driver.d();
  map.blocks = Matrix<double>(2 * map.n, map.d, 0.0);
  for (int j = 0; j < map.d; ++j) {
    PerturbationField field = PerturbationField::axis(map.n, map.d, j);
    PerturbationVectors vectors = extract_randomized_halves(
        driver, field, seed + 0x1000ull * static_cast<std::uint64_t>(j));
    for (int i = 0; i < map.n; ++i) {
      map.block(i, 0, j) = vectors.vectors(i, 0);
      map.block(i, 1, j) = vectors.vectors(i, 1);
    }
  }
  return map;
}

DiscoveryResult discover_global(const TangentMap& map, SolverOptions opt) {
  const int d = map.d;
  Matrix<double> gram(d, d, 0.0);  // sum_i B_i^T B_i
  for (int i = 0; i < map.n; ++i)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        gram(a, b) += map.block(i, 0, a) * map.block(i, 0, b) +
                      map.block(i, 1, a) * map.block(i, 1, b);

  MatVecOracle<double> oracle = dense_oracle(gram);
  if (opt.max_iter == 0) opt.max_iter = std::max(10 * d, 2000);
  EigenPair<double> top = power_iteration(oracle, opt);

  DiscoveryResult result;
  result.mode = DiscoveryResult::Mode::kGlobal;
  result.objective = top.eigenvalue;
  result.perturbation = Matrix<double>(map.n, d, 0.0);
  for (int i = 0; i < map.n; ++i)
    for (int j = 0; j < d; ++j) result.perturbation(i, j) = top.eigenvector[j];
  return result;
}

double default_sigma(const Matrix<double>& coords) {
  const int n = coords.rows();
  std::vector<double> dists;
  dists.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      dists.push_back(std::hypot(coords(i, 0) - coords(j, 0), coords(i, 1) - coords(j, 1)));
  if (dists.empty()) return 1.0;
  std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
  double median = dists[dists.size() / 2];
  return median > 0.0 ? 0.5 * median : 1.0;
}

namespace {

Matrix<double> similarity_matrix(const Matrix<double>& coords, double sigma) {
  const int n = coords.rows();
  Matrix<double> s(n, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double dx = coords(i, 0) - coords(j, 0);
      double dy = coords(i, 1) - coords(j, 1);
      double v = std::exp(-(dx * dx + dy * dy) / (sigma * sigma));
      s(i, j) = v;
      s(j, i) = v;
    }
  return s;
}

void append_quality_warnings(DiscoveryResult& result) {
  const int n = result.perturbation.rows();
  const int d = result.perturbation.cols();
  std::vector<double> row_norms(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < d; ++j) acc += result.perturbation(i, j) * result.perturbation(i, j);
    row_norms[i] = std::sqrt(acc);
  }
  std::vector<double> sorted = row_norms;
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  double median = sorted[n / 2];
  double maxn = *std::max_element(row_norms.begin(), row_norms.end());
  if (median > 0.0 && maxn > 10.0 * median)
    result.warnings.push_back(
        "dominance: one point moves far more than the rest; lambda is likely too small");

  if (result.mode == DiscoveryResult::Mode::kPerPoint && n > 1) {
    bool all_aligned = true;
    int compared = 0;
    for (int i = 0; i < n && all_aligned; ++i) {
      if (row_norms[i] == 0.0) continue;
      for (int j = i + 1; j < n && all_aligned; ++j) {
        if (row_norms[j] == 0.0) continue;
        double dot = 0.0;
        for (int c = 0; c < d; ++c)
          dot += result.perturbation(i, c) * result.perturbation(j, c);
        if (std::abs(dot) / (row_norms[i] * row_norms[j]) <= 0.999) all_aligned = false;
        ++compared;
      }
    }
    if (all_aligned && compared > 0)
      result.warnings.push_back(
          "over-smoothing: all per-point perturbations are aligned; lambda is likely too large");
  }
}

}  // namespace

Matrix<double> assemble_per_point_matrix(const TangentMap& map,
                                         const Matrix<double>& coords,
                                         double lambda_smooth, double sigma) {
  const int n = map.n, d = map.d;
  Matrix<double> s = similarity_matrix(coords, sigma);
  Matrix<double> a(n * d, n * d, 0.0);
  // M^T M: block-diagonal with B_i^T B_i.
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < d; ++p)
      for (int q = 0; q < d; ++q)
        a(i * d + p, i * d + q) = map.block(i, 0, p) * map.block(i, 0, q) +
                                  map.block(i, 1, p) * map.block(i, 1, q);
  // - lambda L_s with d x d identity blocks.
  for (int i = 0; i < n; ++i) {
    double degree = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      degree += s(i, j);
      for (int p = 0; p < d; ++p) a(i * d + p, j * d + p) += lambda_smooth * s(i, j);
    }
    for (int p = 0; p < d; ++p) a(i * d + p, i * d + p) -= lambda_smooth * degree;
  }
  return a;
}

DiscoveryResult discover_per_point(const TangentMap& map, const Matrix<double>& coords,
                                   double lambda_smooth, double sigma, std::uint64_t seed,
                                   PerPointStrategy strategy) {
  if (lambda_smooth < 0.0) throw ConfigError("lambda must be nonnegative");
  if (sigma <= 0.0) sigma = default_sigma(coords);
  const int n = map.n, d = map.d;
  const int nd = n * d;
  if (strategy == PerPointStrategy::kAuto)
    strategy = nd <= 2000 ? PerPointStrategy::kDense : PerPointStrategy::kMatrixFree;

  DiscoveryResult result;
  result.mode = DiscoveryResult::Mode::kPerPoint;
  result.lambda_smooth = lambda_smooth;
  result.sigma = sigma;
  result.perturbation = Matrix<double>(n, d, 0.0);

  std::vector<double> flat;
  if (strategy == PerPointStrategy::kDense) {
    Matrix<double> a = assemble_per_point_matrix(map, coords, lambda_smooth, sigma);
    auto pairs = jacobi_eigenpairs(std::move(a));
    result.objective = pairs.front().eigenvalue;
    flat = pairs.front().eigenvector;
  } else {
    Matrix<double> s = similarity_matrix(coords, sigma);
    // Gershgorin bound on L_s pushes the spectrum nonnegative, so power
    // iteration lands on the largest algebraic eigenvalue, not the
    // largest magnitude one.
    double max_degree = 0.0;
    for (int i = 0; i < n; ++i) {
      double degree = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) degree += s(i, j);
      max_degree = std::max(max_degree, degree);
    }
    const double shift = 2.0 * lambda_smooth * max_degree;

    MatVecOracle<double> oracle;
    oracle.dim = nd;
    oracle.apply = [&map, &s, lambda_smooth, shift, n, d](const std::vector<double>& v) {
      std::vector<double> y(static_cast<size_t>(n) * d, 0.0);
      for (int i = 0; i < n; ++i) {
        // B_i^T (B_i v_i)
        double r0 = 0.0, r1 = 0.0;
        for (int c = 0; c < d; ++c) {
          r0 += map.block(i, 0, c) * v[i * d + c];
          r1 += map.block(i, 1, c) * v[i * d + c];
        }
        for (int c = 0; c < d; ++c)
          y[i * d + c] = map.block(i, 0, c) * r0 + map.block(i, 1, c) * r1;
        // - lambda sum_j S(i,j) (v_i - v_j), plus the PSD shift
        for (int c = 0; c < d; ++c) {
          double lap = 0.0;
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            lap += s(i, j) * (v[i * d + c] - v[j * d + c]);
          }
          y[i * d + c] += shift * v[i * d + c] - lambda_smooth * lap;
        }
      }
      return y;
    };

    SolverOptions opt;
    opt.seed = seed;
    opt.max_iter = std::max(10 * nd, 2000);
    EigenPair<double> top = power_iteration(oracle, opt);
    result.objective = top.eigenvalue - shift;
    flat = std::move(top.eigenvector);
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) result.perturbation(i, j) = flat[i * d + j];
  if (result.objective < 0.0)
    result.warnings.push_back(
        "NegativeObjective: smoothing dominates the attainable change; lambda is likely too large");
  append_quality_warnings(result);
  return result;
}

PerturbationReport perturbation_report(const DiscoveryResult& result) {
  const int n = result.perturbation.rows();
  const int d = result.perturbation.cols();
  PerturbationReport report;
  report.magnitude_maps = Matrix<double>(n, d, 0.0);
  report.total_magnitude.assign(d, 0.0);
  for (int j = 0; j < d; ++j) {
    double maxmag = 0.0;
    for (int i = 0; i < n; ++i) {
      double mag = std::abs(result.perturbation(i, j));
      report.magnitude_maps(i, j) = mag;
      report.total_magnitude[j] += mag;
      maxmag = std::max(maxmag, mag);
    }
    if (maxmag > 0.0)
      for (int i = 0; i < n; ++i) report.magnitude_maps(i, j) /= maxmag;
  }
  report.dominant_dimension = static_cast<int>(
      std::max_element(report.total_magnitude.begin(), report.total_magnitude.end()) -
      report.total_magnitude.begin());
  return report;
}

}  // namespace dimreader
