#pragma once

#include <stdexcept>
#include <string>

namespace greencube {

// Bad input: malformed arguments, violated preconditions, dimension
// mismatches. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed on valid input (non-convergence, Cholesky
// breakdown, non-finite values).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written. The CLI maps this to exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace greencube
