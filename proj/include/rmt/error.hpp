#pragma once

#include <stdexcept>
#include <string>

namespace rmt {

// Malformed input: bad parameters, schema violations, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A solver failed to converge or hit a singularity. Carries the last residual.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace rmt
