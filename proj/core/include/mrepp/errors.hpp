#pragma once

#include <stdexcept>
#include <string>

namespace mrepp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid hyperparameters or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed inputs: size mismatches, non-finite values, empty sets.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A covariance system could not be factorized.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// A query point is outside the set an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Partition construction produced an unusable layout (e.g. an empty region).
class BuildError : public Error {
 public:
  using Error::Error;
};

/// A predictive distribution cannot be scored (degenerate variance).
class ScoringError : public Error {
 public:
  using Error::Error;
};

/// Poisson-disk thinning could not place all points in the requested domain.
class DomainTooDenseError : public Error {
 public:
  DomainTooDenseError(const std::string& what, double suggested_side)
      : Error(what), suggested_side_(suggested_side) {}
  double suggested_side() const noexcept { return suggested_side_; }

 private:
  double suggested_side_;
};

}  // namespace mrepp
