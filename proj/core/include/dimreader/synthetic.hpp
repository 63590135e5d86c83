#pragma once

#include <cstdint>
#include <string>

#include "dimreader/dataset.hpp"
#include "dimreader/matrix.hpp"

namespace dimreader {

/// Built-in synthetic datasets. Each returns the point matrix in
/// `dataset` plus the generating manifold parameters in `params`
/// (aligned row-wise), so tests and perturbation fields can refer to
/// the ground truth.
struct SyntheticData {
  Dataset dataset;
  Matrix<double> params;                  // n x p generating parameters
  std::vector<std::string> param_names;
};

/// 3-D S-curve: x = sin t, y = 2u, z = sign(t)(cos t - 1) with
/// t uniform in [-3pi/2, 3pi/2] and u uniform in [0, 1].
SyntheticData make_s_curve(int n, std::uint64_t seed);

/// Swiss roll x = u cos u, y = u sin u, z = v with u in
/// [3pi/2, 9pi/2] and v in [0, 15].
SyntheticData make_swiss_roll(int n, std::uint64_t seed);

/// Two interlocked unit-radius rings in 3-D, n/2 points each, labelled
/// ring0/ring1.
SyntheticData make_interlocked_rings(int n, std::uint64_t seed);

/// k isotropic Gaussian blobs in d dimensions, labelled by blob.
SyntheticData make_gaussian_blobs(int n, int d, int k, double separation,
                                  double stddev, std::uint64_t seed);

/// Dispatch by name: "scurve", "swissroll", "rings", "blobs".
SyntheticData make_synthetic(const std::string& name, int n, std::uint64_t seed);

/// Unit tangent directions along a parameter column: row i is the
/// normalized derivative of the embedding map at params(i), giving the
/// "move along the manifold parameter" perturbation field.
Matrix<double> s_curve_tangent_field(const SyntheticData& data, int param_index);
Matrix<double> swiss_roll_tangent_field(const SyntheticData& data, int param_index);

}  // namespace dimreader
