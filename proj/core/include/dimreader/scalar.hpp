#pragma once

#include <concepts>
#include <type_traits>

#include "dimreader/dual.hpp"

namespace dimreader {

/// Projection code is written once over a Scalar type and instantiated
/// twice: with plain double and with Dual. With all-zero derivative
/// seeds the Dual instantiation performs the same operations on the
/// same value channel and is bit-identical to the double run.
template <class S>
concept Scalar = std::same_as<S, double> || std::same_as<S, Dual>;

inline constexpr double value_of(double x) { return x; }
inline constexpr double value_of(const Dual& x) { return x.value(); }

inline constexpr double deriv_of(double) { return 0.0; }
inline constexpr double deriv_of(const Dual& x) { return x.deriv(); }

/// Builds a scalar carrying a derivative seed; the double instantiation
/// drops the seed (there is no derivative channel to carry it).
template <Scalar S>
constexpr S make_scalar(double value, double seed) {
  if constexpr (std::same_as<S, Dual>) {
    return Dual(value, seed);
  } else {
    (void)seed;
    return value;
  }
}

template <Scalar S>
inline constexpr bool has_deriv_channel = std::same_as<S, Dual>;

}  // namespace dimreader
