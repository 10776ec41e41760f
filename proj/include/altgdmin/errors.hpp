#pragma once

#include <stdexcept>
#include <string>

namespace altgdmin {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A matrix that must have full column rank is (numerically) rank deficient,
/// i.e. sigma_min <= 1e-12 * sigma_max.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// Truncation threshold alpha must be strictly positive.
class NonPositiveThreshold : public Error {
 public:
  using Error::Error;
};

/// Requested rank is out of range for the given dimensions.
class BadRank : public Error {
 public:
  using Error::Error;
};

/// Column index outside [0, q).
class BadColumn : public Error {
 public:
  using Error::Error;
};

/// Node count outside [1, q].
class BadGamma : public Error {
 public:
  using Error::Error;
};

/// All measurements are zero; spectral initialization is undefined.
class AllZeroData : public Error {
 public:
  using Error::Error;
};

/// An iterate picked up a NaN or infinity (step size too large).
class NonFiniteIterate : public Error {
 public:
  using Error::Error;
};

/// Ground-truth generation could not satisfy the requested constraints.
class GenerationFailed : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or solver configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File format or filesystem failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace altgdmin
