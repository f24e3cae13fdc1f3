#pragma once

#include <cstdint>
#include <vector>

#include "saddlekit/audits.hpp"
#include "saddlekit/problems.hpp"
#include "saddlekit/prox.hpp"
#include "saddlekit/report.hpp"

namespace saddlekit {

struct MDConfig {
  double epsilon = 0.0;
  // Relative-boundedness constant of the operator.
  double M = 0.0;
  // Bound on V(x*, x0). N grows linearly in it.
  double R_sq = 0.0;
  double sigma = 0.0;
  Vector x0;
  // Keep x^0 .. x^N in the report (needed by md_descent_audit).
  bool keep_iterates = false;
  // Refuse plans longer than this instead of running for hours.
  long max_iterations = 100'000'000;
};

// Step size h = eps / M^2.
double md_step_size(const MDConfig& cfg);
// N = ceil(2 R_sq M^2 / eps^2), at least 1.
long md_iteration_count(const MDConfig& cfg);

// Mirror descent x^{k+1} = Mirr_{x^k}(h g(x^k)) for N steps; the output is
// the uniform average of x^0 .. x^{N-1}. Metrics: "h", "N", "R_sq", "M",
// "epsilon", "sigma".
SolveReport md_solve(const VIOperator& op, const ProxSetup& setup,
                     const FeasibleSet& set, const MDConfig& cfg);

// Per-step inequality
//   h <g(x^k), x^k - x> <= h^2 M^2 / 2 + V(x, x^k) - V(x, x^{k+1}) + tol
// at every recorded step for each probe point x. Needs keep_iterates.
AuditResult md_descent_audit(const VIOperator& op, const ProxSetup& setup,
                             const SolveReport& report, const MDConfig& cfg,
                             const std::vector<Vector>& probes,
                             double tol = 1e-8);

// Averaged bound for a probe x:
//   <g(x), x~ - x> <= M^2 h / 2 + V(x, x^0) / (N h) + sigma + tol.
// Valid for any monotone-up-to-sigma operator.
AuditResult md_average_audit(const VIOperator& op, const ProxSetup& setup,
                             const SolveReport& report, const MDConfig& cfg,
                             const std::vector<Vector>& probes,
                             double tol = 1e-8);

}  // namespace saddlekit
