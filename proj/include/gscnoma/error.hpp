#pragma once

#include <stdexcept>
#include <string>

namespace gscnoma {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configuration is structurally invalid (bad antenna counts, empty grid, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on inputs that violate its precondition, e.g. the
/// SC evaluator on a pair that is not selection combining.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Quadrature failed to converge, an integrand produced NaN, or a special
/// function overflowed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An analytic approximation was requested outside the range where it holds.
class ValidityError : public Error {
 public:
  using Error::Error;
};

}  // namespace gscnoma
