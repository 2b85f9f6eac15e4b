#pragma once

#include <stdexcept>
#include <string>

namespace pw {

// Invalid input: outside the domain of a function (rho <= 0, lambda = 0, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Dimension or truncation mismatch between objects that must agree.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parameters for which the requested integral or norm is infinite.
struct DivergenceError : std::domain_error {
  using std::domain_error::domain_error;
};

// A quadrature rule too coarse for the integrand it was asked to handle.
struct UnderResolvedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// NaN or Inf produced where a finite value was required.
struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed external input (JSON, polynomial strings, binary dumps).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pw
