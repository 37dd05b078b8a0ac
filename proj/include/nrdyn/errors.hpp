#pragma once

#include <stdexcept>
#include <string>

namespace nrdyn {

/// Matrix shape does not fit the requested operation.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Parameter pair violating a > b > 0.
struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A computed object does not have the shape the theory predicts
/// (wrong root count, broken ordering, failed identity).
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A root or residual could not be brought under its tolerance.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nrdyn
