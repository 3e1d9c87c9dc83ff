#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace psq {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition on an argument (bad c, K, grid, profile, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Eigenvalues moved by more than the tolerance between orders M and 2M.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::vector<double> coarse,
                   std::vector<double> fine)
      : Error(what), coarse_(std::move(coarse)), fine_(std::move(fine)) {}

  const std::vector<double>& coarse_spectrum() const noexcept { return coarse_; }
  const std::vector<double>& fine_spectrum() const noexcept { return fine_; }

private:
  std::vector<double> coarse_;
  std::vector<double> fine_;
};

/// Requested more modes than the discretization can resolve.
class ResolutionError : public Error {
public:
  ResolutionError(const std::string& what, int largest_safe_k)
      : Error(what), largest_safe_k_(largest_safe_k) {}

  int largest_safe_k() const noexcept { return largest_safe_k_; }

private:
  int largest_safe_k_;
};

/// A finite integration range or grid misses a non-negligible part of a field.
class TruncationError : public Error {
public:
  TruncationError(const std::string& what, double measured, double suggestion,
                  std::vector<int> affected_modes = {})
      : Error(what), measured_(measured), suggestion_(suggestion),
        affected_(std::move(affected_modes)) {}

  /// Energy (or bound) that fell outside the range.
  double measured() const noexcept { return measured_; }
  /// Suggested extent / range that should fix it, 0 when not applicable.
  double suggestion() const noexcept { return suggestion_; }
  const std::vector<int>& affected_modes() const noexcept { return affected_; }

private:
  double measured_;
  double suggestion_;
  std::vector<int> affected_;
};

/// Loss of positive definiteness (covariance assembly, Cholesky).
class FactorizationError : public Error {
public:
  FactorizationError(const std::string& what, double value, int index)
      : Error(what), value_(value), index_(index) {}

  /// Most negative eigenvalue, or the failing pivot.
  double value() const noexcept { return value_; }
  /// Offending leading-minor size or eigen index.
  int index() const noexcept { return index_; }

private:
  double value_;
  int index_;
};

/// Malformed run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace psq
