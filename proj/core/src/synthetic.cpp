#include "dimreader/synthetic.hpp"

#include <cmath>

#include "dimreader/errors.hpp"
#include "dimreader/rng.hpp"

namespace dimreader {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SyntheticData make_s_curve(int n, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, 0x73637576ull);
  SyntheticData out;
  out.dataset.points = Matrix<double>(n, 3);
  out.dataset.dim_names = {"x", "y", "z"};
  out.params = Matrix<double>(n, 2);
  out.param_names = {"t", "u"};
  for (int i = 0; i < n; ++i) {
    double t = rng.uniform(-1.5 * kPi, 1.5 * kPi);
    double u = rng.uniform();
    out.params(i, 0) = t;
    out.params(i, 1) = u;
    double sign = t >= 0.0 ? 1.0 : -1.0;
    out.dataset.points(i, 0) = std::sin(t);
    out.dataset.points(i, 1) = 2.0 * u;
    out.dataset.points(i, 2) = sign * (std::cos(t) - 1.0);
  }
  return out;
}

SyntheticData make_swiss_roll(int n, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, 0x73777273ull);
  SyntheticData out;
  out.dataset.points = Matrix<double>(n, 3);
  out.dataset.dim_names = {"x", "y", "z"};
  out.params = Matrix<double>(n, 2);
  out.param_names = {"u", "v"};
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform(1.5 * kPi, 4.5 * kPi);
    double v = rng.uniform(0.0, 15.0);
    out.params(i, 0) = u;
    out.params(i, 1) = v;
    out.dataset.points(i, 0) = u * std::cos(u);
    out.dataset.points(i, 1) = u * std::sin(u);
    out.dataset.points(i, 2) = v;
  }
  return out;
}

SyntheticData make_interlocked_rings(int n, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, 0x72696e67ull);
  SyntheticData out;
  out.dataset.points = Matrix<double>(n, 3);
  out.dataset.dim_names = {"x", "y", "z"};
  out.dataset.labels.emplace();
  out.params = Matrix<double>(n, 1);
  out.param_names = {"angle"};
  for (int i = 0; i < n; ++i) {
    double angle = rng.uniform(0.0, 2.0 * kPi);
    out.params(i, 0) = angle;
    if (i % 2 == 0) {
      // ring in the xy plane centred at the origin
      out.dataset.points(i, 0) = std::cos(angle);
      out.dataset.points(i, 1) = std::sin(angle);
      out.dataset.points(i, 2) = 0.0;
      out.dataset.labels->push_back("ring0");
    } else {
      // ring in the xz plane threaded through the first
      out.dataset.points(i, 0) = 1.0 + std::cos(angle);
      out.dataset.points(i, 1) = 0.0;
      out.dataset.points(i, 2) = std::sin(angle);
      out.dataset.labels->push_back("ring1");
    }
  }
  return out;
}

SyntheticData make_gaussian_blobs(int n, int d, int k, double separation, double stddev,
                                  std::uint64_t seed) {
  Rng rng = Rng::substream(seed, 0x626c6f62ull);
  SyntheticData out;
  out.dataset.points = Matrix<double>(n, d);
  out.dataset.dim_names.reserve(d);
  for (int j = 0; j < d; ++j) out.dataset.dim_names.push_back("x" + std::to_string(j));
  out.dataset.labels.emplace();
  out.params = Matrix<double>(n, 1);
  out.param_names = {"blob"};

  Matrix<double> centers(k, d, 0.0);
  for (int c = 0; c < k; ++c)
    for (int j = 0; j < d; ++j) centers(c, j) = separation * rng.gaussian();

  for (int i = 0; i < n; ++i) {
    int c = i % k;
    out.params(i, 0) = c;
    out.dataset.labels->push_back("blob" + std::to_string(c));
    for (int j = 0; j < d; ++j)
      out.dataset.points(i, j) = centers(c, j) + stddev * rng.gaussian();
  }
  return out;
}

SyntheticData make_synthetic(const std::string& name, int n, std::uint64_t seed) {
  if (name == "scurve") return make_s_curve(n, seed);
  if (name == "swissroll") return make_swiss_roll(n, seed);
  if (name == "rings") return make_interlocked_rings(n, seed);
  if (name == "blobs") return make_gaussian_blobs(n, 10, 2, 10.0, 1.0, seed);
  throw ConfigError("unknown synthetic dataset: '" + name +
                    "' (expected scurve, swissroll, rings or blobs)");
}

Matrix<double> s_curve_tangent_field(const SyntheticData& data, int param_index) {
  const int n = data.dataset.n();
  Matrix<double> field(n, 3, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = data.params(i, 0);
    if (param_index == 0) {
      double sign = t >= 0.0 ? 1.0 : -1.0;
      field(i, 0) = std::cos(t);
      field(i, 1) = 0.0;
      field(i, 2) = -sign * std::sin(t);
    } else {
      field(i, 1) = 2.0;
    }
    double norm = std::sqrt(field(i, 0) * field(i, 0) + field(i, 1) * field(i, 1) +
                            field(i, 2) * field(i, 2));
    for (int j = 0; j < 3; ++j) field(i, j) /= norm;
  }
  return field;
}

Matrix<double> swiss_roll_tangent_field(const SyntheticData& data, int param_index) {
  const int n = data.dataset.n();
  Matrix<double> field(n, 3, 0.0);
  for (int i = 0; i < n; ++i) {
    double u = data.params(i, 0);
    if (param_index == 0) {
      field(i, 0) = std::cos(u) - u * std::sin(u);
      field(i, 1) = std::sin(u) + u * std::cos(u);
      field(i, 2) = 0.0;
    } else {
      field(i, 2) = 1.0;
    }
    double norm = std::sqrt(field(i, 0) * field(i, 0) + field(i, 1) * field(i, 1) +
                            field(i, 2) * field(i, 2));
    for (int j = 0; j < 3; ++j) field(i, j) /= norm;
  }
  return field;
}

}  // namespace dimreader
