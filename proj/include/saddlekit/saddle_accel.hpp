#pragma once

#include <cstdint>
#include <optional>

#include "saddlekit/audits.hpp"
#include "saddlekit/problems.hpp"
#include "saddlekit/report.hpp"

namespace saddlekit {

// Hoelder data of the gradient of phi(x) = max_y f(x, y).
struct HolderProfile {
  double L_tilde = 0.0;
  double nu_tilde = 0.0;
  // Source constants.
  double L_xx = 0.0, L_xy = 0.0, mu_y = 0.0, D = 0.0, nu = 0.0;
};

// L~ = L_xy (2 L_xy / mu_y)^(nu/(2-nu)) + L_xx D^((nu - nu^2)/(2-nu)),
// nu~ = nu / (2 - nu).
HolderProfile holder_profile(double L_xx, double L_xy, double mu_y, double D,
                             double nu);

// Smoothness of the (delta0, L, mu)-model of a function with Hoelder
// gradient (L~, nu~):
//   L = L~ (L~ / (2 delta0) (1 - nu~)/(1 + nu~))^((1 - nu~)/(1 + nu~)).
double model_L(double L_tilde, double nu_tilde, double delta0);

struct TolerancePlan {
  double epsilon = 0.0;
  double delta0 = 0.0;       // model inexactness
  double Delta = 0.0;        // gradient inexactness
  double Delta_tilde = 0.0;  // distance tolerance of the inner argmax
  double delta = 0.0;        // D * Delta + delta0
  double L = 0.0;
  HolderProfile profile;
  double D = 0.0;    // diam(Q_x), enters Delta
  double R_x = 0.0;  // diam(Q_x), bound on the initial distance
  double R_y = 0.0;  // diam(Q_y)
  long outer_iters = 0;
  int sweeps = 0;  // fixed-point sweeps used for (delta0, L)
  // ln(2 L_yy R_y^2 / eps) and ln(2 L D^2 / eps), the two log factors of
  // the total complexity bound.
  double log_inner = 0.0;
  double log_outer = 0.0;
};

// Mutually consistent (delta0, L) by fixed-point iteration from eps/8
// (at most 100 sweeps, relative change < 1e-12), then
//   Delta = eps / (4 D (1 + sqrt(L / mu_x))),  Delta~ = (Delta / L_xy)^(1/nu),
//   outer = ceil(2 sqrt(L / mu_x) ln(2 L R_x^2 / eps)).
// At nu = 0 the gradient error is L_xy whatever Delta~ is; the plan is
// rejected unless L_xy <= Delta.
TolerancePlan tolerance_plan(const SaddleProblem& problem, double epsilon);

struct InnerMaxResult {
  Vector y;
  double dist_bound = 0.0;  // certified |y - y*(x)|
  // Certified bracket max_y f(x, y) in [value, value + value_gap].
  double value = 0.0;
  double value_gap = 0.0;
  int iterations = 0;
  long oracle_calls = 0;
};

// argmax_{y in Q_y} f(x, y) to a certified distance Delta_tilde. When
// Delta_tilde >= diam(Q_y) the start point is returned after 0 iterations.
// Throws UncertifiedError if the budget runs out first.
InnerMaxResult inner_max_solve(const SaddleProblem& problem, const Vector& x,
                               double Delta_tilde,
                               const std::optional<Vector>& warm_start = {},
                               int max_iterations = 100000);

struct FGMOptions {
  std::optional<Vector> x0;  // defaults to the interior point of Q_x
  // Check the upper model inequality at every step; a violation throws
  // ConstantsMisdeclaredError.
  bool check_model = true;
  // Compute saddle_gap of the output with tolerance eps / 100.
  bool certify = true;
  int max_inner_iterations = 100000;
};

struct FGMResult {
  Vector x;
  Vector y;
  SolveReport report;
  TolerancePlan plan;
};

// Similar-triangles fast gradient method for the mu_x-strongly convex
// phi(x) = max_y f(x, y) with inexact gradients grad_x f(x, y~), y~ from
// inner_max_solve, run for plan.outer_iters steps.
FGMResult fgm_solve(const SaddleProblem& problem, double epsilon,
                    const FGMOptions& options = {});

// Two-sided model inequality around x1 for sampled pairs (x1, x2):
//   mu_x/2 |x2-x1|^2 + <g~(x1), x2-x1> + phi(x1) - delta <= phi(x2)
//   phi(x2) <= phi(x1) + <g~(x1), x2-x1> + L/2 |x2-x1|^2 + delta
// with g~ the planned inexact gradient and delta = D Delta + delta0.
AuditResult audit_model_inequality(const SaddleProblem& problem,
                                   const TolerancePlan& plan, long pairs,
                                   std::uint64_t seed);

}  // namespace saddlekit
