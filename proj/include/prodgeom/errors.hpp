#pragma once

#include <stdexcept>
#include <string>

namespace prodgeom {

/// Bad arguments: index out of range, dimension mismatch, zero parameters,
/// malformed boxes. The CLI maps these to exit status 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical domain violations: log or fractional power of a non-positive
/// argument, vanishing first partials. The CLI maps these to exit status 2.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace prodgeom
