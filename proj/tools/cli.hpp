#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "saddlekit/bench_covering.hpp"
#include "saddlekit/problems.hpp"
#include "saddlekit/report.hpp"

namespace saddlekit::cli {

// Everything a run needs. Field names match the config keys and the long
// flags (with '-' for '_').
struct RunConfig {
  std::string solver = "ump";
  std::string problem = "affine-vi";
  std::string prox = "euclidean";
  int dim = 2;
  double radius = 1.0;
  double eps = 0.05;
  std::uint64_t seed = 1;
  std::string out = "saddlekit_out";

  // Solver constants; unset ones are derived from the problem.
  std::optional<double> M;
  std::optional<double> R_sq;
  std::optional<double> sigma;
  std::optional<double> L0;
  std::optional<double> mu;
  std::optional<double> delta;
  long iters = 1000;

  // Covering benchmark.
  int case_id = 1;
  int n = 50;
  int m = 5;
  int N = 5;
  int reps = 1;
  double lambda_cap = 10.0;
  std::optional<double> x_radius;
  std::vector<double> eps_grid;  // bench only; empty means 1/2 .. 1/64

  // certify: file with one coordinate per line.
  std::string point;
};

// A built-in problem instance. Exactly one of vi / saddle is the primary
// form; saddle problems also carry their VI reduction.
struct BuiltProblem {
  VIInstance vi{VIOperator{}, FeasibleSet::full_space(1), std::nullopt};
  std::optional<SaddleProblem> saddle;
  std::optional<CoveringInstance> covering;
};

// Throws InvalidInputError for unknown ids or bad parameters.
BuiltProblem build_problem(const RunConfig& cfg);

struct SolveOutcome {
  SolveReport report;
  // Target the certificate is compared against, when one applies.
  std::optional<double> target;
  bool target_met = true;
};

// Dispatches to the selected solver and certifies the output. Does not
// write any files.
SolveOutcome run_solve(const RunConfig& cfg, const BuiltProblem& problem);

// Resolved config as "key = value" lines, loadable with --config.
std::string config_echo(const RunConfig& cfg, const std::string& command);

// Entry point used by main() and the tests. Exit status: 0 success,
// 1 solver error or uncertified target, 2 invalid configuration (nothing
// written).
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace saddlekit::cli
