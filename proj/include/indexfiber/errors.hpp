#pragma once

#include <stdexcept>
#include <string>

namespace indexfiber {

// Invalid dimensions, out-of-range labels, malformed input.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fixed points that coincide (or nearly so) where distinct ones are required.
class DegenerateConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The residue system has no solution for the given configuration.
class InconsistentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Some component of the eliminated system vanishes identically.
class IdenticallyZeroPsi : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerically detected coincidence that cannot be a genuine degenerate solution.
class NumericalAmbiguity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumerated map failed re-verification against the requested spectrum.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace indexfiber
