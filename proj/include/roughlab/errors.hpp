#pragma once

#include <stdexcept>
#include <string>

namespace roughlab {

// Invalid parameters or inputs; the CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure during a run (non-convergence, singular factor, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

void require(bool condition, const std::string& message);

}  // namespace roughlab
