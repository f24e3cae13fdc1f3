#pragma once

#include <functional>
#include <limits>

#include "saddlekit/feasible_set.hpp"
#include "saddlekit/types.hpp"

namespace saddlekit {

struct InnerOptions {
  // Strong convexity modulus of the objective (0 allowed on bounded sets).
  double mu = 0.0;
  // Initial smoothness estimate; doubled whenever the local descent
  // condition fails.
  double L0 = 1.0;
  // Stop once f(x) - f* <= value_tol is certified ...
  double value_tol = std::numeric_limits<double>::infinity();
  // ... and |x - x*| <= dist_tol is certified.
  double dist_tol = std::numeric_limits<double>::infinity();
  int max_iterations = 100000;
};

struct InnerResult {
  Vector x;
  double value = 0.0;
  // Certified f(x) - f* <= value_gap and |x - x*| <= dist_bound.
  double value_gap = std::numeric_limits<double>::infinity();
  double dist_bound = std::numeric_limits<double>::infinity();
  int iterations = 0;
  long oracle_calls = 0;
  bool certified = false;
};

// Accelerated projected gradient for min_{x in set} f(x), f convex and
// mu-strongly convex, with backtracking on the smoothness constant and
// adaptive momentum restart.
//
// Certificates at the post-step point x+ = P(v - grad f(v) / L), with
// gradient mapping G = L (v - x+) and the local descent condition enforced:
//   f(x+) - f* <= |G|^2 / (2 mu)      |x+ - x*| <= 2 |G| / mu
// and, on bounded sets, the Frank-Wolfe bound
//   f(x+) - f* <= max_{z in set} <grad f(x+), x+ - z>.
// Never throws on budget exhaustion; `certified` reports the outcome.
InnerResult minimize_strongly_convex(
    const std::function<double(const Vector&)>& f,
    const std::function<Vector(const Vector&)>& grad, const FeasibleSet& set,
    const Vector& start, const InnerOptions& options);

}  // namespace saddlekit
