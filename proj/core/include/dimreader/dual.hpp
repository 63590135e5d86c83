#pragma once

#include <cmath>
#include <compare>

#include "dimreader/errors.hpp"

namespace dimreader {

/// Forward-mode dual number: a value and the derivative of that value
/// with respect to the single active perturbation variable.
///
/// A plain real converts to a Dual with deriv() == 0; the active
/// variable is constructed with Dual::seeded, which sets deriv() to the
/// seed (1 by default). Arithmetic applies the usual derivative rules,
/// so any computation expressed over Dual carries the perturbation
/// channel alongside the value channel.
///
/// Comparisons, max/min and abs branch on the value channel only. This
/// keeps control flow (Dijkstra, pivoting, convergence tests) identical
/// to the plain-real execution of the same code.
class Dual {
 public:
  constexpr Dual() = default;
  constexpr Dual(double value) : v_(value) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(double value, double deriv) : v_(value), d_(deriv) {}

  /// The active perturbation variable: derivative channel starts at `seed`.
  static constexpr Dual seeded(double value, double seed = 1.0) {
    return Dual(value, seed);
  }

  constexpr double value() const { return v_; }
  constexpr double deriv() const { return d_; }

  constexpr Dual operator-() const { return Dual(-v_, -d_); }
  constexpr Dual operator+() const { return *this; }

  constexpr Dual& operator+=(const Dual& o) {
    v_ += o.v_;
    d_ += o.d_;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    v_ -= o.v_;
    d_ -= o.d_;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) {
    d_ = v_ * o.d_ + o.v_ * d_;
    v_ *= o.v_;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    if (o.v_ == 0.0) throw DomainError("dual division by zero value channel");
    d_ = (d_ * o.v_ - v_ * o.d_) / (o.v_ * o.v_);
    v_ /= o.v_;
    return *this;
  }

  friend constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }

  // Value-channel ordering; the derivative never influences a branch.
  friend constexpr bool operator==(const Dual& a, const Dual& b) {
    return a.v_ == b.v_;
  }
  friend constexpr std::partial_ordering operator<=>(const Dual& a,
                                                     const Dual& b) {
    return a.v_ <=> b.v_;
  }

 private:
  double v_ = 0.0;
  double d_ = 0.0;
};

inline Dual exp(const Dual& x) {
  double e = std::exp(x.value());
  return Dual(e, e * x.deriv());
}

inline Dual log(const Dual& x) {
  if (x.value() <= 0.0) throw DomainError("log of non-positive value channel");
  return Dual(std::log(x.value()), x.deriv() / x.value());
}

inline Dual sqrt(const Dual& x) {
  // The derivative of sqrt is unbounded at 0, so 0 is out of domain too.
  if (x.value() <= 0.0) throw DomainError("sqrt of non-positive value channel");
  double r = std::sqrt(x.value());
  return Dual(r, x.deriv() / (2.0 * r));
}

/// x^p for a constant real exponent.
inline Dual pow(const Dual& x, double p) {
  if (x.value() > 0.0) {
    double v = std::pow(x.value(), p);
    return Dual(v, p * std::pow(x.value(), p - 1.0) * x.deriv());
  }
  if (x.value() == 0.0 && p >= 1.0) {
    // d/dx x^p at 0 is 0 for p > 1 and 1 for p == 1.
    return Dual(0.0, p == 1.0 ? x.deriv() : 0.0);
  }
  double ip = 0.0;
  if (x.value() < 0.0 && std::modf(p, &ip) == 0.0) {
    double v = std::pow(x.value(), p);
    return Dual(v, p * std::pow(x.value(), p - 1.0) * x.deriv());
  }
  throw DomainError("pow outside real domain");
}

/// abs at value 0 uses the subgradient convention deriv = 0.
inline Dual abs(const Dual& x) {
  if (x.value() > 0.0) return x;
  if (x.value() < 0.0) return -x;
  return Dual(0.0, 0.0);
}

inline Dual max(const Dual& a, const Dual& b) { return a.value() >= b.value() ? a : b; }
inline Dual min(const Dual& a, const Dual& b) { return a.value() <= b.value() ? a : b; }

inline bool isfinite(const Dual& x) {
  return std::isfinite(x.value()) && std::isfinite(x.deriv());
}

}  // namespace dimreader
