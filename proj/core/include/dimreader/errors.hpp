#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dimreader {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An elementary function was evaluated outside its real domain
/// (sqrt at <= 0, log at <= 0, division by a zero value channel, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver did not meet its residual criterion within its
/// iteration budget. Usually signals a degenerate or clustered spectrum.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, int iterations)
      : Error(what), iterations(iterations) {}
  int iterations;
};

/// Conjugate gradients stagnated or met a non-positive curvature
/// direction; the system is singular or the shift is too small.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// The kNN graph has more than one connected component.
class DisconnectedGraph : public Error {
 public:
  DisconnectedGraph(const std::string& what, std::vector<int> component_sizes)
      : Error(what), component_sizes(std::move(component_sizes)) {}
  std::vector<int> component_sizes;
};

/// PCA cannot pick k principal directions because the leading
/// covariance eigenvalues are not distinct.
class DegenerateCovariance : public Error {
 public:
  using Error::Error;
};

/// The value channel of a t-SNE dual replay moved further than the
/// captured fixed point allows; the fixed point is stale.
class FixedPointMismatch : public Error {
 public:
  using Error::Error;
};

/// The randomized-halves driver exceeded its round budget; signals a
/// defective random source, not bad luck.
class RoundLimitExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (CSV or IDX).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A cell that should hold a number does not.
class NonNumericCell : public ParseError {
 public:
  using ParseError::ParseError;
};

/// The input file contains no data rows.
class EmptyDataset : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Bad run configuration (unknown dimension name, non-positive
/// parameter, unknown method, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while writing an artifact.
class IOFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace dimreader
