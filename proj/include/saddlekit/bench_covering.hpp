#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "saddlekit/problems.hpp"

namespace saddlekit {

// Smallest covering ball with quadratic constraints:
//   min_{|x| <= x_radius} max_k |x - A_k|^2
//   s.t. phi_p(x) = sum_i alpha_pi x_i^2 - offset <= 0,  p = 1..m
// Indices in this API are 0-based.
struct CoveringInstance {
  int case_id = 1;
  int n = 0;
  int m = 0;
  int N = 0;
  std::uint64_t seed = 0;
  Matrix A;      // N x n, one point per row
  Matrix alpha;  // m x n
  double x_radius = 0.0;
  double lambda_cap = 10.0;
  double offset = 5.0;
};

// max_k |x - A_k|^2 and the lowest index attaining it.
std::pair<double, int> covering_objective(const CoveringInstance& inst,
                                          const Vector& x);

// phi_p(x); throws InvalidInputError for p outside [0, m).
double covering_constraint(const CoveringInstance& inst, int p,
                           const Vector& x);

// max_p phi_p(x).
double covering_max_constraint(const CoveringInstance& inst, const Vector& x);

// f(x) + sum lambda_p phi_p(x) - 1/2 |lambda|^2; rejects negative lambda.
double covering_lagrangian(const CoveringInstance& inst, const Vector& x,
                           const Vector& lambda);

// G(x, lambda) = (2 (x - A_k*) + sum lambda_p 2 alpha_p .* x,
//                 (lambda_p - phi_p(x))_p)
// on ball(x_radius) x {lambda >= 0, |lambda| <= lambda_cap}.
//
// Declared constants: for z, z' in the set
//   <G(z) - G(z'), z - z'> >= c |x - x'|^2 + |lambda - lambda'|^2,
//   c = 2 - 2 lambda_cap |a-|,  a-_p = max(0, -min_i alpha_pi),
// so mu = min(1, c) when c >= 0, and otherwise mu = 0 with
// sigma = -c (2 x_radius)^2. M bounds |G| on the set. holder[0] records the
// nu = 0 smoothness class.
VIInstance covering_operator(const CoveringInstance& inst);

// Start point (x^0, lambda^0) = 1 / sqrt(m + n), projected onto the set.
Vector covering_start(const CoveringInstance& inst);

// Data for case 1..4: alpha first (row-major), then the points uniformly
// on [0, 1)^n.
//   1: exponential(1)   2: Gumbel(0, 1)
//   3: inverse Gaussian(mean 1, shape 2)   4: integers 1..5
// x_radius defaults to sqrt(n).
CoveringInstance gen_case(int case_id, int n, int m, int N, std::uint64_t seed,
                          std::optional<double> x_radius = {},
                          double lambda_cap = 10.0, double offset = 5.0);

struct BenchConfig {
  int case_id = 1;
  int n = 50;
  int m = 5;
  int N = 5;
  std::vector<double> epsilons{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  int repetitions = 5;
  std::uint64_t seed = 1;
  std::optional<double> x_radius;
  double lambda_cap = 10.0;
  double offset = 5.0;
  // Strong monotonicity used by the restart schedule.
  double mu = 1.0;
  long max_inner_iterations = 10'000'000;
};

struct BenchRow {
  double inv_epsilon = 0.0;
  // Means over the successful repetitions.
  double iterations = 0.0;
  double time_seconds = 0.0;
  double f_best = 0.0;
  double g_out = 0.0;
  int failures = 0;
  std::string error;  // first failure message, if any
};

// One row per epsilon. Repetition r uses the instance with seed + r; the
// same instances are reused across epsilons. Solver errors are recorded in
// the row and the run continues.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);
void write_bench_markdown(std::ostream& os, const BenchConfig& cfg,
                          const std::vector<BenchRow>& rows);

// Plain-text instance dump: "key value" header lines, a line "data", then
// alpha and A row-major, one number per line.
void dump_instance(std::ostream& os, const CoveringInstance& inst);
CoveringInstance load_instance(std::istream& is);

}  // namespace saddlekit
