#pragma once

#include <stdexcept>
#include <string>

namespace lgstab {

// Error kinds raised by the library. All derive from std::runtime_error or
// std::invalid_argument so callers can catch broadly.

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OutOfDomain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The characteristic map folds or leaves the domain (step too large).
class StepConditionViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ConvergenceFailure : public SolverFailure {
 public:
  using SolverFailure::SolverFailure;
};

#define LGSTAB_REQUIRE(cond, Kind, msg) \
  do {                                  \
    if (!(cond)) throw Kind(msg);       \
  } while (0)

}  // namespace lgstab
