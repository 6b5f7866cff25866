#pragma once

#include <stdexcept>
#include <string>

namespace gwm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Gamma-function pole (non-positive integer argument).
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Requested a finite-variance quantity with alpha*gamma <= n/2.
class InfiniteVarianceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// gamma == n/(2 alpha) exactly: the variance formula sits on a Gamma pole.
class VariancePoleError : public InfiniteVarianceError {
 public:
  using InfiniteVarianceError::InfiniteVarianceError;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double value, double error_estimate)
      : Error(what), value_(value), error_estimate_(error_estimate) {}

  double value() const noexcept { return value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

class EmbeddingError : public Error {
 public:
  EmbeddingError(const std::string& what, double clipped_fraction)
      : Error(what), clipped_fraction_(clipped_fraction) {}

  double clipped_fraction() const noexcept { return clipped_fraction_; }

 private:
  double clipped_fraction_;
};

class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range input data. `line` is 1-based, 0 when unknown.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gwm
