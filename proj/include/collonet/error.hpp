#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collonet {

/// Raised when a numerical routine cannot proceed: a non-positive Cholesky
/// pivot, or a line search whose every trial point was non-finite.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The interpolation matrix is not numerically SPD. `pivot` is the zero-based
/// row at which the factorization broke down.
class SingularMatrixError : public NumericalError {
public:
  SingularMatrixError(std::size_t pivot, double value)
      : NumericalError("interpolation matrix is not positive definite (pivot " +
                       std::to_string(pivot) + " = " + std::to_string(value) +
                       "); lambda is likely too small for this point spacing"),
        pivot_(pivot), value_(value) {}

  std::size_t pivot() const noexcept { return pivot_; }
  double pivot_value() const noexcept { return value_; }

private:
  std::size_t pivot_;
  double value_;
};

/// Two points closer than the allowed tolerance where distinct points are required.
class DegenerateGeometryError : public std::invalid_argument {
public:
  DegenerateGeometryError(std::size_t first, std::size_t second, double distance)
      : std::invalid_argument("points " + std::to_string(first) + " and " +
                              std::to_string(second) + " coincide (distance " +
                              std::to_string(distance) + ")"),
        first_(first), second_(second) {}

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

private:
  std::size_t first_;
  std::size_t second_;
};

/// The objective was not finite at the optimizer's starting point.
class InvalidStartError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace collonet
