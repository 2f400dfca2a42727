#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace bls {

/// Base of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed network or experiment configuration. Carries the index of the
/// offending layer when one can be identified.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what,
                       std::optional<std::size_t> layer = std::nullopt)
      : Error(layer ? what + " (layer " + std::to_string(*layer) + ")" : what),
        layer_(layer) {}

  std::optional<std::size_t> layer() const noexcept { return layer_; }

 private:
  std::optional<std::size_t> layer_;
};

/// Argument violates a precondition (non-finite data, wrong dimension,
/// asymmetric or indefinite covariance, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Zero-length vector passed where a direction is required.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: non-converged SVD, non-finite update, ...
/// `iteration` is the sweep count for the SVD and the step index for
/// traversal and optimization loops.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what,
                        std::optional<long> iteration = std::nullopt)
      : Error(iteration ? what + " (iteration " + std::to_string(*iteration) + ")"
                        : what),
        iteration_(iteration) {}

  std::optional<long> iteration() const noexcept { return iteration_; }

 private:
  std::optional<long> iteration_;
};

/// Every singular direction of a frame fell below the threshold.
class DegenerateFrameError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bls
