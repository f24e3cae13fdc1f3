#include "saddlekit/inner_solver.hpp"

#include <algorithm>
#include <cmath>

#include "saddlekit/errors.hpp"

namespace saddlekit {
namespace {

constexpr int kMaxDoublings = 80;

}  // namespace

InnerResult minimize_strongly_convex(
    const std::function<double(const Vector&)>& f,
    const std::function<Vector(const Vector&)>& grad, const FeasibleSet& set,
    const Vector& start, const InnerOptions& options) {
  if (start.size() != set.dim()) {
    throw InvalidInputError("inner solver: start point has the wrong size");
  }
  const double mu = std::max(0.0, options.mu);
  const bool want_value = std::isfinite(options.value_tol);
  const bool frank_wolfe = want_value && set.bounded();
  double L = options.L0 > 0.0 ? options.L0 : 1.0;

  InnerResult res;
  Vector x_prev = set.project(start);
  double f_prev = f(x_prev);
  res.oracle_calls += 1;
  res.x = x_prev;
  res.value = f_prev;
  Vector v = x_prev;
  double t = 1.0;

  for (int it = 0; it < options.max_iterations; ++it) {
    const Vector gv = grad(v);
    const double fv = f(v);
    res.oracle_calls += 2;
    if (!gv.allFinite() || !std::isfinite(fv)) {
      throw NumericalError("inner solver: non-finite objective or gradient",
                           gv.norm(), it);
    }

    Vector xp;
    double fxp = 0.0;
    double step_sq = 0.0;
    for (int d = 0;; ++d) {
      xp = set.project(v - gv / L);
      const Vector step = xp - v;
      step_sq = step.squaredNorm();
      fxp = f(xp);
      res.oracle_calls += 1;
      const double model = fv + gv.dot(step) + 0.5 * L * step_sq;
      if (fxp <= model + 1e-14 * (1.0 + std::abs(fv)) || d >= kMaxDoublings) {
        break;
      }
      L *= 2.0;
    }

    const double gmap = L * std::sqrt(step_sq);
    double value_gap = std::numeric_limits<double>::infinity();
    double dist = std::numeric_limits<double>::infinity();
    if (mu > 0.0) {
      value_gap = gmap * gmap / (2.0 * mu);
      dist = 2.0 * gmap / mu;
    }
    if (frank_wolfe) {
      const Vector gx = grad(xp);
      res.oracle_calls += 1;
      const double fw = gx.dot(xp - set.linear_maximizer(-gx));
      value_gap = std::min(value_gap, std::max(0.0, fw));
    }

    res.x = xp;
    res.value = fxp;
    res.value_gap = value_gap;
    res.dist_bound = dist;
    res.iterations = it + 1;
    if (value_gap <= options.value_tol && dist <= options.dist_tol) {
      res.certified = true;
      return res;
    }

    if (fxp > f_prev) {
      // Momentum overshoot: restart from the new point.
      v = xp;
      t = 1.0;
    } else {
      double beta;
      if (mu > 0.0) {
        const double sl = std::sqrt(L), sm = std::sqrt(std::min(mu, L));
        beta = (sl - sm) / (sl + sm);
      } else {
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        beta = (t - 1.0) / t_next;
        t = t_next;
      }
      v = set.project(xp + beta * (xp - x_prev));
    }
    x_prev = xp;
    f_prev = fxp;
  }
  return res;
}

}  // namespace saddlekit
