#pragma once

#include <stdexcept>
#include <string>

namespace yulesim {

/// A parameter lies outside the domain where the requested law or
/// operation is defined (e.g. rho <= 0, theta <= 0 for total progeny).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent input data (mismatched lengths, bad files).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its requested accuracy.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tail fit cannot be computed on the given curve (nonpositive or
/// saturated estimates inside the fit range, too few points).
class FitDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace yulesim
