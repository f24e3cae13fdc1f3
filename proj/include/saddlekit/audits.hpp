#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include "saddlekit/problems.hpp"
#include "saddlekit/prox.hpp"

namespace saddlekit {

// Outcome of a sampled check of a declared inequality. `worst` is the
// largest amount by which any sample exceeded its allowed slack (<= 0 when
// every sample passed).
struct AuditResult {
  long samples = 0;
  long violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::string first_violation;

  bool passed() const { return violations == 0; }
  void record(double excess, const std::string& what);
};

// <g(y) - g(x), y - x> >= mu |y - x|^2 - sigma - tol with the operator's
// declared mu and sigma.
AuditResult audit_monotonicity(const VIOperator& op, const FeasibleSet& set,
                               long pairs, std::uint64_t seed,
                               double tol = 1e-8);

// <g(x), y - x> <= M sqrt(2 V(y, x)) + tol; requires constants.M.
AuditResult audit_relative_boundedness(const VIOperator& op,
                                       const ProxSetup& setup,
                                       const FeasibleSet& set, long pairs,
                                       std::uint64_t seed, double tol = 1e-8);

// Strong convexity in x and strong concavity in y with the declared moduli.
AuditResult audit_saddle_convexity(const SaddleProblem& problem, long pairs,
                                   std::uint64_t seed, double tol = 1e-6);

// The four Hoelder inequalities with the declared constants.
AuditResult audit_saddle_holder(const SaddleProblem& problem, long pairs,
                                std::uint64_t seed, double tol = 1e-6);

// Central finite differences of `f` against `grad`:
//   |fd - grad| <= rel_tol * max(1, |grad|).
// Points where `skip` returns true (non-differentiable) are not counted.
AuditResult audit_gradient(
    const std::function<double(const Vector&)>& f,
    const std::function<Vector(const Vector&)>& grad, const FeasibleSet& set,
    long points, std::uint64_t seed, double rel_tol = 1e-5,
    const std::function<bool(const Vector&)>& skip = {});

// grad_x and grad_y of a saddle problem against finite differences of f.
AuditResult audit_saddle_gradients(const SaddleProblem& problem, long points,
                                   std::uint64_t seed, double rel_tol = 1e-5);

}  // namespace saddlekit
