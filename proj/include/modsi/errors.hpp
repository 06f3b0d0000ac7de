#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace modsi {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or invariant on caller-supplied data was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration document.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// The correction filter 1/R cannot be built: |R| vanishes on the band.
class SingularFilterError : public Error {
 public:
  SingularFilterError(std::vector<double> zeros, double T);

  /// Band frequencies (rad/s) where |R| fell below the zero tolerance.
  const std::vector<double>& zeros() const noexcept { return zeros_; }

 private:
  std::vector<double> zeros_;
};

/// Higher-order-difference unfolding could not place a residual on the 2λ lattice,
/// or no lattice offset satisfies the amplitude bound.
class LatticeRoundingError : public Error {
 public:
  LatticeRoundingError(const std::string& what, double slack);

  /// Distance to the nearest lattice point, in units of 2λ.
  double slack() const noexcept { return slack_; }

 private:
  double slack_;
};

}  // namespace modsi
