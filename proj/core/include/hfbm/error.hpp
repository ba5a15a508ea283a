#pragma once

#include <stdexcept>
#include <string>

namespace hfbm {

/// Argument outside the mathematical domain of an operation (H out of range,
/// odd pairing size, indices out of bounds, complexity guard exceeded, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed (factorization, embedding, convergence).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed experiment configuration or CLI input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hfbm
