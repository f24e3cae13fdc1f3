#pragma once

#include <optional>
#include <ostream>

#include "saddlekit/problems.hpp"
#include "saddlekit/prox.hpp"
#include "saddlekit/report.hpp"

namespace saddlekit {

// When to stop the monotone mirror-prox loop.
struct StopRule {
  enum class Kind { kMaxIterations, kInverseMSum };
  Kind kind = Kind::kMaxIterations;
  long max_iterations = 1000;
  // For kInverseMSum: stop once sum 1/M_i >= threshold. max_iterations is
  // then a safety cap that raises DivergenceError when hit.
  double threshold = 0.0;

  static StopRule iterations(long k) {
    return {Kind::kMaxIterations, k, 0.0};
  }
  static StopRule inverse_m_sum(double threshold, long cap = 10'000'000) {
    return {Kind::kInverseMSum, cap, threshold};
  }
};

struct UMPConfig {
  double epsilon = 0.0;
  double L0 = 1.0;
  // Oracle inexactness; defaults to epsilon / 2.
  std::optional<double> delta;
  StopRule stop;
  // Starting point z_0; defaults to argmin of d over the set.
  std::optional<Vector> z0;
  int max_doublings = 60;
  // Store w_k and z_{k+1} in the trace.
  bool record_points = false;
};

struct RestartConfig {
  double epsilon = 0.0;
  double mu = 0.0;
  // Defaults to the setup's Omega.
  std::optional<double> omega;
  double R0_sq = 0.0;
  Vector x0;
  double L0 = 1.0;
  // Oracle inexactness passed to every inner run.
  double delta = 0.0;
  long max_inner_iterations = 10'000'000;
  int max_doublings = 60;
  bool record_points = false;
};

// Adaptive mirror prox. Each iteration starts the line search at L_k
// (M = L_k / 2, doubled once) and doubles M until
//   <g~(w) - g~(z), w - z+> <= M/2 (|w - z|^2 + |w - z+|^2) + eps/2 + delta,
// then sets L_{k+1} = M / 2. Output: the 1/M-weighted average of the w_k.
// Metrics: "inv_M_sum", "L_final", "delta", "epsilon".
SolveReport ump_solve(const VIOperator& op, const ProxSetup& setup,
                      const FeasibleSet& set, const UMPConfig& cfg);

// Restarts for mu-strongly monotone operators: every stage runs ump_solve
// with prox-function R_p^2 d((x - x_p) / R_p), tolerance eps/2 and the
// stopping rule sum 1/M_i >= Omega / mu, then shrinks
//   R_{p+1}^2 = R_0^2 2^-(p+1) + 2 (1 - 2^-(p+1)) eps / (4 mu)
// until p > log2(2 R_0^2 / eps). The smoothness estimate carries over
// between stages.
SolveReport restarted_ump(const VIOperator& op, const ProxSetup& setup,
                          const FeasibleSet& set, const RestartConfig& cfg);

// R_{p+1}^2 of the schedule above (p is 0-based).
double restart_radius_sq(double R0_sq, double epsilon, double mu, int p);

// Number of stages the until-clause produces: floor(log2(2 R0^2/eps)) + 1,
// at least 1.
int restart_count(double R0_sq, double epsilon);

// CSV with columns k,M_k,trials,inv_M_sum.
void write_trace_csv(std::ostream& os, const SolveReport& report);

}  // namespace saddlekit
