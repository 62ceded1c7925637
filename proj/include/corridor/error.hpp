#pragma once

#include <stdexcept>
#include <string>

namespace corridor {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quadrature or search touched a non-finite value, or an argument left its domain.
class NumericDomainError : public Error {
 public:
  using Error::Error;
};

/// find_root was handed an interval without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// A scenario or command argument violates an invariant. `field()` names the offending path.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// No bus frequency satisfies the capacity constraint inside the search range.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Bus service quantities requested with zero frequency.
class ServiceError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario or trajectory document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace corridor
