#pragma once

#include <stdexcept>
#include <string>

namespace tropitherm {

/// Malformed or invalid input data (files, models, scenarios).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double worst_residual)
      : std::runtime_error(what), worst_residual_(worst_residual) {}

  double worst_residual() const { return worst_residual_; }

private:
  double worst_residual_;
};

} // namespace tropitherm
