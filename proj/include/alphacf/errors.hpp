#pragma once

#include <stdexcept>
#include <string>

namespace alphacf {

// Input outside the domain of an operation (x outside [alpha-1, alpha), bad rectangle, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A parameter outside the range an operation supports (alpha, sizes, counts).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A division by (numerically) zero inside a formula.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace alphacf
