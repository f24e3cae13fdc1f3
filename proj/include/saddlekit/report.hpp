#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saddlekit/gap.hpp"
#include "saddlekit/types.hpp"

namespace saddlekit {

// One accepted iteration of the mirror-prox line search.
struct UMPIterRecord {
  long k = 0;
  double L_k = 0.0;  // smoothness estimate entering the iteration
  double M_k = 0.0;  // accepted trial, L_k * 2^(trials - 1)
  int trials = 0;
  double inv_M_sum = 0.0;  // sum_{i <= k} 1 / M_i
  Vector w;                // empty unless points are recorded
  Vector z_next;
};

struct RestartRecord {
  int p = 0;  // restart index, 0-based
  long inner_iterations = 0;
  double inv_M_sum = 0.0;
  double R_sq = 0.0;  // R_{p+1}^2 from the radius schedule
  Vector x;           // x_{p+1}
};

struct SolveReport {
  std::string solver;
  Vector x;
  std::optional<Vector> y;
  long iterations = 0;
  long oracle_calls = 0;
  std::optional<double> step_size;
  std::vector<UMPIterRecord> ump_trace;
  std::vector<RestartRecord> restarts;
  // Full trajectory x^0 .. x^N when requested (mirror descent).
  std::vector<Vector> iterates;
  // Per-iteration certified upper bound on the objective (accelerated
  // saddle solver).
  std::vector<double> objective_trace;
  std::vector<GapCertificate> gaps;
  // Named scalars: plan dumps, budgets, running sums.
  std::map<std::string, double> metrics;
  double wall_seconds = 0.0;
};

}  // namespace saddlekit
