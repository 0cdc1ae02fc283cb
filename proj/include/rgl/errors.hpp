#pragma once

#include <stdexcept>
#include <string>

namespace rgl {

// Invalid parameters or sector labels.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed configuration documents; the message names the offending field.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested allocation would exceed the configured memory budget.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigensolver or nonlinear-solver breakdown.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two spectral parameters (or a parameter and a fixed charge) coincide.
struct SingularityError : NumericError {
  using NumericError::NumericError;
};

}  // namespace rgl
