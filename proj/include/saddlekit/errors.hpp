#pragma once

#include <stdexcept>
#include <string>

namespace saddlekit {

// Base class for every error raised by the library. The CLI maps
// InvalidInputError to exit status 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on the caller's input does not hold.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// The requested (prox setup, feasible set) combination has no solver.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or an inner loop that failed to reach its tolerance.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual = 0.0,
                 long iterate = -1)
      : Error(what), residual_(residual), iterate_(iterate) {}

  double residual() const { return residual_; }
  // Index of the outer iterate at which the failure happened, -1 if unknown.
  long iterate() const { return iterate_; }

 private:
  double residual_;
  long iterate_;
};

// Line search gave up: the operator looks non-smooth or unbounded.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double last_M, long iteration)
      : Error(what), last_M_(last_M), iteration_(iteration) {}

  double last_M() const { return last_M_; }
  long iteration() const { return iteration_; }

 private:
  double last_M_;
  long iteration_;
};

// An inner solve ran out of budget before its certificate was met.
class UncertifiedError : public Error {
 public:
  using Error::Error;
};

// Tolerance planning could not produce a consistent plan.
class PlanningError : public Error {
 public:
  using Error::Error;
};

// A runtime audit contradicted the constants declared for a problem.
class ConstantsMisdeclaredError : public Error {
 public:
  using Error::Error;
};

}  // namespace saddlekit
