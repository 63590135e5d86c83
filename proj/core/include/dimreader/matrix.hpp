#pragma once

#include <cassert>
#include <span>
#include <vector>

#include "dimreader/scalar.hpp"

namespace dimreader {

/// Dense row-major matrix over a Scalar type. Deliberately minimal:
/// the solvers in this library are matrix-free or hand-rolled, so all
/// this type needs to do is own storage and index it.
template <Scalar S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, S fill = S(0))
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    assert(rows >= 0 && cols >= 0);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  S& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  const S& operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  std::span<S> row(int i) {
    return {data_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)};
  }
  std::span<const S> row(int i) const {
    return {data_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)};
  }

  std::vector<S>& data() { return data_; }
  const std::vector<S>& data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<S> data_;
};

template <Scalar S>
bool all_finite(const Matrix<S>& m) {
  for (const auto& x : m.data()) {
    using std::isfinite;
    if (!isfinite(x)) return false;
  }
  return true;
}

/// Extracts the value channel of a matrix (identity for double).
template <Scalar S>
Matrix<double> value_channel(const Matrix<S>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (size_t i = 0; i < m.data().size(); ++i) out.data()[i] = value_of(m.data()[i]);
  return out;
}

/// Extracts the derivative channel (all zeros for double).
template <Scalar S>
Matrix<double> deriv_channel(const Matrix<S>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (size_t i = 0; i < m.data().size(); ++i) out.data()[i] = deriv_of(m.data()[i]);
  return out;
}

/// Lifts a plain matrix into scalar type S with per-entry derivative seeds.
template <Scalar S>
Matrix<S> seed_matrix(const Matrix<double>& values, const Matrix<double>& seeds) {
  assert(values.rows() == seeds.rows() && values.cols() == seeds.cols());
  Matrix<S> out(values.rows(), values.cols());
  for (size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] = make_scalar<S>(values.data()[i], seeds.data()[i]);
  return out;
}

template <Scalar S>
Matrix<S> lift_matrix(const Matrix<double>& values) {
  Matrix<S> out(values.rows(), values.cols());
  for (size_t i = 0; i < out.data().size(); ++i) out.data()[i] = S(values.data()[i]);
  return out;
}

// Small vector kernel used throughout the solvers. Fixed left-to-right
// summation order keeps every run bit-reproducible.

template <Scalar S>
S dot(std::span<const S> a, std::span<const S> b) {
  assert(a.size() == b.size());
  S acc(0);
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <Scalar S>
S dot(const std::vector<S>& a, const std::vector<S>& b) {
  return dot(std::span<const S>(a), std::span<const S>(b));
}

template <Scalar S>
S norm2(std::span<const S> a) {
  using std::sqrt;
  S sq = dot(a, a);
  if (value_of(sq) == 0.0) return S(0);
  return sqrt(sq);
}

template <Scalar S>
S norm2(const std::vector<S>& a) {
  return norm2(std::span<const S>(a));
}

template <Scalar S>
void axpy(S alpha, const std::vector<S>& x, std::vector<S>& y) {
  assert(x.size() == y.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

template <Scalar S>
void scale(std::vector<S>& x, S alpha) {
  for (auto& v : x) v *= alpha;
}

/// Euclidean distance between two points. Coincident points (zero value
/// channel) are in-domain and return a zero scalar instead of tripping
/// the sqrt domain check; the derivative there follows the subgradient
/// convention deriv = 0.
template <Scalar S>
S euclidean_distance(std::span<const S> a, std::span<const S> b) {
  assert(a.size() == b.size());
  S sq(0);
  for (size_t i = 0; i < a.size(); ++i) {
    S d = a[i] - b[i];
    sq += d * d;
  }
  if (value_of(sq) == 0.0) return S(0);
  using std::sqrt;
  return sqrt(sq);
}

template <Scalar S>
S squared_distance(std::span<const S> a, std::span<const S> b) {
  assert(a.size() == b.size());
  S sq(0);
  for (size_t i = 0; i < a.size(); ++i) {
    S d = a[i] - b[i];
    sq += d * d;
  }
  return sq;
}

}  // namespace dimreader
