#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "saddlekit/feasible_set.hpp"
#include "saddlekit/types.hpp"

namespace saddlekit {

// Declared constants of an operator. Every field is a claim made by whoever
// built the operator; the sampled audits in audits.hpp check them.
struct OperatorConstants {
  // Relative boundedness: <g(x), y - x> <= M sqrt(2 V(y, x)).
  std::optional<double> M;
  // sigma-monotonicity: <g(y) - g(x), y - x> >= -sigma.
  double sigma = 0.0;
  // Strong monotonicity modulus (0 for merely monotone operators).
  double mu = 0.0;
  // Hoelder constants L_nu keyed by exponent nu.
  std::map<double, double> holder;
};

// g(x) = A x + b.
struct AffineForm {
  Matrix A;
  Vector b;
};

struct VIOperator {
  int dim = 0;
  std::function<Vector(const Vector&)> eval;
  // Optional inexact oracle (x, delta) -> g~(x, delta).
  std::function<Vector(const Vector&, double)> eval_inexact;
  OperatorConstants constants;
  // Present when g is affine; lets vi_gap certify exactly.
  std::optional<AffineForm> affine;
  std::string name;

  Vector operator()(const Vector& x) const { return eval(x); }

  // g~(x, delta) when an inexact oracle exists, otherwise g(x).
  Vector evaluate(const Vector& x, double delta) const {
    return eval_inexact ? eval_inexact(x, delta) : eval(x);
  }
};

// An operator together with the set it is posed on and, when known, the
// analytic solution of the variational inequality.
struct VIInstance {
  VIOperator op;
  FeasibleSet set;
  std::optional<Vector> solution;
};

// min_{x in Q_x} max_{y in Q_y} f(x, y), f mu_x-strongly convex in x and
// mu_y-strongly concave in y, with Hoelder-continuous partial gradients:
//   |grad_x f(x,y) - grad_x f(x',y)| <= L_xx |x - x'|^nu
//   |grad_x f(x,y) - grad_x f(x,y')| <= L_xy |y - y'|^nu
//   |grad_y f(x,y) - grad_y f(x',y)| <= L_xy |x - x'|^nu
//   |grad_y f(x,y) - grad_y f(x,y')| <= L_yy |y - y'|
struct SaddleProblem {
  int nx = 0;
  int ny = 0;
  std::function<double(const Vector&, const Vector&)> f;
  std::function<Vector(const Vector&, const Vector&)> grad_x;
  std::function<Vector(const Vector&, const Vector&)> grad_y;
  double mu_x = 0.0;
  double mu_y = 0.0;
  double L_xx = 0.0;
  double L_xy = 0.0;
  double L_yy = 0.0;
  double nu = 1.0;
  FeasibleSet Q_x = FeasibleSet::full_space(1);
  FeasibleSet Q_y = FeasibleSet::full_space(1);
  // Affine form of the stacked operator (grad_x f, -grad_y f), if any.
  std::optional<AffineForm> operator_affine;
  std::string name;

  // diam(Q_x) and diam(Q_y); throw InvalidInputError on unbounded sets.
  double D() const;
  double R() const;

  // Checks sizes and constant ranges; throws InvalidInputError.
  void validate() const;
};

// G(z) = (grad_x f(x, y), -grad_y f(x, y)) on Q_x x Q_y, z = (x, y).
VIInstance saddle_to_vi(const SaddleProblem& problem);

// --- Built-in problems with closed-form solutions --------------------------

// g(x) = A (x - solution) on the Euclidean ball of given radius centered at
// the origin. mu is the smallest eigenvalue of (A + A^T)/2, M the sup of
// |g| over the ball, L_1 = |A|_2.
VIInstance affine_vi(const Matrix& A, const Vector& solution, double radius);

// A = mu I + s S with S a random unit-norm skew matrix; solution drawn in the
// ball of radius radius/2.
VIInstance random_affine_vi(int dim, double mu, double skew_scale,
                            double radius, std::uint64_t seed);

// The 2-D rotation field g(x, y) = (y, -x) on the ball of given radius.
VIInstance skew_vi(double radius);

// f(x, y) = x^T B y + c^T x + e^T y with c, e chosen so that (x_star, y_star)
// is the saddle point; Q_x, Q_y are origin balls of radii rx, ry.
SaddleProblem bilinear_saddle(const Matrix& B, const Vector& x_star,
                              const Vector& y_star, double rx, double ry);

// f(x, y) = mu_x/2 |x - a|^2 + x^T B y - mu_y/2 |y - b|^2 on origin balls.
SaddleProblem quadratic_saddle(double mu_x, double mu_y, const Matrix& B,
                               const Vector& a, const Vector& b, double rx,
                               double ry);

// Random instance of quadratic_saddle with |B|_2 = coupling, anchors a and b
// of norm at most radius/4.
SaddleProblem random_quadratic_saddle(int nx, int ny, double mu_x, double mu_y,
                                      double coupling, double radius,
                                      std::uint64_t seed);

// Saddle point of quadratic_saddle when it lies in the interior of the
// balls: solves the 2x2 block stationarity system.
std::pair<Vector, Vector> quadratic_saddle_solution(double mu_x, double mu_y,
                                                    const Matrix& B,
                                                    const Vector& a,
                                                    const Vector& b);

}  // namespace saddlekit
