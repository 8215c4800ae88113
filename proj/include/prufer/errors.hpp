#pragma once

#include <stdexcept>
#include <string>

namespace prufer {

// Configuration / input validation failure (bad interval, nonpositive
// leading coefficient, malformed table, ...).  The CLI maps these to exit
// code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure during a computation (integration blow-up or step-size
// underflow surfacing through an operation that needs a complete trajectory,
// bracket exhaustion, ...).  The CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace prufer
