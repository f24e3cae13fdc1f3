#include "saddlekit/saddle_accel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "saddlekit/errors.hpp"
#include "saddlekit/gap.hpp"
#include "saddlekit/inner_solver.hpp"
#include "saddlekit/rng.hpp"

namespace saddlekit {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kSweepTol = 1e-12;

void require_strongly_convex(const SaddleProblem& p) {
  p.validate();
  if (!(p.mu_x > 0.0) || !(p.mu_y > 0.0)) {
    throw InvalidInputError(
        "the accelerated saddle solver needs mu_x > 0 and mu_y > 0");
  }
  if (!p.Q_x.bounded() || !p.Q_y.bounded()) {
    throw InvalidInputError("the accelerated saddle solver needs compact sets");
  }
}

double delta0_cap(double epsilon, double L, double mu_x) {
  return epsilon / (4.0 * (1.0 + std::sqrt(L / mu_x)));
}

// phi(x) bracket from an inner solve certified in value.
struct PhiBracket {
  double lo = 0.0, hi = 0.0;
  Vector y;
  long calls = 0;
};

PhiBracket phi_bracket(const SaddleProblem& p, const Vector& x,
                       const Vector& y_start) {
  InnerOptions opt;
  opt.mu = p.mu_y;
  opt.L0 = p.L_yy > 0.0 ? p.L_yy : 1.0;
  const double scale = 1.0 + std::abs(p.f(x, y_start));
  opt.value_tol = 1e-12 * scale;
  opt.max_iterations = 200000;
  const InnerResult r = minimize_strongly_convex(
      [&](const Vector& y) { return -p.f(x, y); },
      [&](const Vector& y) -> Vector { return -p.grad_y(x, y); }, p.Q_y,
      y_start, opt);
  if (!r.certified) {
    throw UncertifiedError("model audit: could not certify max_y f(x, y)");
  }
  return {-r.value, -r.value + r.value_gap, r.x, r.oracle_calls};
}

}  // namespace

HolderProfile holder_profile(double L_xx, double L_xy, double mu_y, double D,
                             double nu) {
  if (!(nu >= 0.0 && nu <= 1.0)) {
    throw InvalidInputError("holder_profile: nu must lie in [0, 1]");
  }
  if (!(mu_y > 0.0)) throw InvalidInputError("holder_profile: mu_y must be > 0");
  if (L_xx < 0.0 || L_xy < 0.0 || D < 0.0) {
    throw InvalidInputError("holder_profile: constants must be nonnegative");
  }
  HolderProfile h;
  h.L_xx = L_xx;
  h.L_xy = L_xy;
  h.mu_y = mu_y;
  h.D = D;
  h.nu = nu;
  h.nu_tilde = nu / (2.0 - nu);
  // pow(0, 0) is 1, which is the right reading of D^0 for D = 0.
  h.L_tilde = L_xy * std::pow(2.0 * L_xy / mu_y, nu / (2.0 - nu)) +
              L_xx * std::pow(D, (nu - nu * nu) / (2.0 - nu));
  if (!(h.L_tilde > 0.0)) {
    throw InvalidInputError("holder_profile: L_xx and L_xy are both zero");
  }
  return h;
}

double model_L(double L_tilde, double nu_tilde, double delta0) {
  if (!(nu_tilde >= 0.0 && nu_tilde <= 1.0)) {
    throw InvalidInputError("model_L: nu_tilde must lie in [0, 1]");
  }
  if (!(L_tilde > 0.0)) throw InvalidInputError("model_L: L_tilde must be > 0");
  if (nu_tilde == 1.0) return L_tilde;
  if (!(delta0 > 0.0)) {
    throw InvalidInputError("model_L: delta0 must be > 0 when nu_tilde < 1");
  }
  const double e = (1.0 - nu_tilde) / (1.0 + nu_tilde);
  return L_tilde * std::pow(L_tilde / (2.0 * delta0) * e, e);
}

TolerancePlan tolerance_plan(const SaddleProblem& problem, double epsilon) {
  require_strongly_convex(problem);
  if (!(epsilon > 0.0)) throw InvalidInputError("plan: epsilon must be > 0");
  TolerancePlan plan;
  plan.epsilon = epsilon;
  plan.D = problem.D();
  plan.R_x = plan.D;
  plan.R_y = problem.R();
  plan.profile = holder_profile(problem.L_xx, problem.L_xy, problem.mu_y,
                                plan.D, problem.nu);
  const double Lt = plan.profile.L_tilde;
  const double nt = plan.profile.nu_tilde;
  const double mu_x = problem.mu_x;

  if (nt == 1.0) {
    plan.L = Lt;
    plan.delta0 = delta0_cap(epsilon, plan.L, mu_x);
    plan.sweeps = 1;
  } else {
    double d0 = epsilon / 8.0;
    bool converged = false;
    for (int s = 1; s <= kMaxSweeps; ++s) {
      const double next = delta0_cap(epsilon, model_L(Lt, nt, d0), mu_x);
      const double change = std::abs(next - d0) / d0;
      d0 = next;
      plan.sweeps = s;
      if (change < kSweepTol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw PlanningError("plan: (delta0, L) fixed point did not converge");
    }
    // The map is increasing with slope < 1 in log scale, so a slightly
    // smaller delta0 sits strictly below its own cap.
    plan.delta0 = d0 * (1.0 - 1e-6);
    plan.L = model_L(Lt, nt, plan.delta0);
    if (plan.delta0 > delta0_cap(epsilon, plan.L, mu_x)) {
      throw PlanningError("plan: delta0 exceeds its cap after the fixed point");
    }
  }

  const double root = 1.0 + std::sqrt(plan.L / mu_x);
  plan.Delta = plan.D > 0.0 ? epsilon / (4.0 * plan.D * root)
                            : epsilon / (4.0 * root);
  if (problem.nu == 0.0) {
    if (problem.L_xy > plan.Delta) {
      std::ostringstream os;
      os << "plan: nu = 0 leaves a gradient error of L_xy = " << problem.L_xy
         << ", above the allowed Delta = " << plan.Delta;
      throw PlanningError(os.str());
    }
    plan.Delta_tilde = plan.R_y;
  } else if (problem.L_xy == 0.0) {
    plan.Delta_tilde = plan.R_y;
  } else {
    plan.Delta_tilde = std::pow(plan.Delta / problem.L_xy, 1.0 / problem.nu);
  }
  plan.delta = plan.D * plan.Delta + plan.delta0;

  const double lg = std::log(2.0 * plan.L * plan.R_x * plan.R_x / epsilon);
  const double k = std::ceil(2.0 * std::sqrt(plan.L / mu_x) * lg);
  plan.outer_iters = std::max(1L, static_cast<long>(k));
  plan.log_inner =
      std::log(2.0 * problem.L_yy * plan.R_y * plan.R_y / epsilon);
  plan.log_outer = std::log(2.0 * plan.L * plan.D * plan.D / epsilon);
  return plan;
}

InnerMaxResult inner_max_solve(const SaddleProblem& problem, const Vector& x,
                               double Delta_tilde,
                               const std::optional<Vector>& warm_start,
                               int max_iterations) {
  problem.validate();
  if (!(problem.mu_y > 0.0)) {
    throw InvalidInputError("inner_max_solve needs mu_y > 0");
  }
  if (!(Delta_tilde > 0.0)) {
    throw InvalidInputError("inner_max_solve: Delta_tilde must be > 0");
  }
  const Vector start = problem.Q_y.project(
      warm_start ? *warm_start : problem.Q_y.interior_point());
  InnerMaxResult out;
  const auto diam = problem.Q_y.diameter();
  if (diam && Delta_tilde >= *diam) {
    out.y = start;
    out.dist_bound = *diam;
    out.value = problem.f(x, start);
    out.value_gap = std::numeric_limits<double>::infinity();
    out.oracle_calls = 1;
    return out;
  }
  InnerOptions opt;
  opt.mu = problem.mu_y;
  opt.L0 = problem.L_yy > 0.0 ? problem.L_yy : 1.0;
  opt.dist_tol = Delta_tilde;
  opt.max_iterations = max_iterations;
  const InnerResult r = minimize_strongly_convex(
      [&](const Vector& y) { return -problem.f(x, y); },
      [&](const Vector& y) -> Vector { return -problem.grad_y(x, y); },
      problem.Q_y, start, opt);
  if (!r.certified) {
    std::ostringstream os;
    os << "inner_max_solve: distance " << Delta_tilde
       << " not certified within " << max_iterations << " iterations (bound "
       << r.dist_bound << ")";
    throw UncertifiedError(os.str());
  }
  out.y = r.x;
  out.dist_bound = r.dist_bound;
  out.value = -r.value;
  out.value_gap = r.value_gap;
  out.iterations = r.iterations;
  out.oracle_calls = r.oracle_calls;
  return out;
}

FGMResult fgm_solve(const SaddleProblem& problem, double epsilon,
                    const FGMOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  FGMResult res;
  res.plan = tolerance_plan(problem, epsilon);
  const TolerancePlan& plan = res.plan;
  const FeasibleSet& Qx = problem.Q_x;
  const double mu = problem.mu_x;
  const double L = plan.L;

  Vector x = Qx.project(options.x0 ? *options.x0 : Qx.interior_point());
  Vector u = x;
  double A = 0.0;
  Vector y_warm = problem.Q_y.interior_point();
  SolveReport& rep = res.report;
  rep.solver = "saddle-fgm";

  auto inexact = [&](const Vector& at) {
    InnerMaxResult r = inner_max_solve(problem, at, plan.Delta_tilde, y_warm,
                                       options.max_inner_iterations);
    y_warm = r.y;
    rep.oracle_calls += r.oracle_calls;
    rep.metrics["inner_iterations"] += r.iterations;
    return r;
  };

  InnerMaxResult at_x = inexact(x);
  rep.objective_trace.push_back(at_x.value + at_x.value_gap);
  for (long k = 0; k < plan.outer_iters; ++k) {
    const double c = 1.0 + A * mu;
    const double alpha = (c + std::sqrt(c * c + 4.0 * L * A * c)) / (2.0 * L);
    const double A_next = A + alpha;
    const Vector yk = (A * x + alpha * u) / A_next;
    const InnerMaxResult at_y = inexact(yk);
    const Vector g = problem.grad_x(yk, at_y.y);
    rep.oracle_calls += 1;
    if (!g.allFinite()) {
      throw NumericalError("fgm: non-finite gradient", g.norm(), k);
    }
    u = Qx.project((alpha * mu * yk + c * u - alpha * g) / (1.0 + A_next * mu));
    const Vector x_next = (A * x + alpha * u) / A_next;
    at_x = inexact(x_next);

    if (options.check_model) {
      // A vacuous inner tolerance gives no value bracket; tighten it here.
      auto bracketed = [&](const Vector& at, const InnerMaxResult& r) {
        if (std::isfinite(r.value_gap)) return r;
        const double tight = 1e-3 * problem.Q_y.diameter().value_or(1.0);
        InnerMaxResult t = inner_max_solve(problem, at, tight, r.y,
                                           options.max_inner_iterations);
        rep.oracle_calls += t.oracle_calls;
        return t;
      };
      const InnerMaxResult by = bracketed(yk, at_y);
      const InnerMaxResult bx = bracketed(x_next, at_x);
      const Vector step = x_next - yk;
      const double upper = by.value + g.dot(step) +
                           0.5 * L * step.squaredNorm() + plan.delta;
      const double lhs = bx.value;
      const double slack = 1e-8 * (1.0 + std::abs(lhs) + std::abs(upper));
      if (lhs > upper + by.value_gap + slack) {
        std::ostringstream os;
        os << "fgm: upper model violated at step " << k << " (" << lhs
           << " > " << upper << "); declared constants look too small";
        throw ConstantsMisdeclaredError(os.str());
      }
    }
    x = x_next;
    A = A_next;
    rep.objective_trace.push_back(at_x.value + at_x.value_gap);
  }

  // Final y~ at x~, a little tighter than the planned tolerance.
  const InnerMaxResult final_y =
      inner_max_solve(problem, x, 0.01 * plan.Delta_tilde, y_warm,
                      options.max_inner_iterations);
  rep.oracle_calls += final_y.oracle_calls;
  res.x = x;
  res.y = final_y.y;
  rep.x = x;
  rep.y = final_y.y;
  rep.iterations = plan.outer_iters;

  auto& m = rep.metrics;
  m["epsilon"] = plan.epsilon;
  m["delta0"] = plan.delta0;
  m["Delta"] = plan.Delta;
  m["Delta_tilde"] = plan.Delta_tilde;
  m["delta"] = plan.delta;
  m["L"] = plan.L;
  m["L_tilde"] = plan.profile.L_tilde;
  m["nu_tilde"] = plan.profile.nu_tilde;
  m["outer_iters"] = static_cast<double>(plan.outer_iters);
  m["R_x"] = plan.R_x;
  m["log_inner"] = plan.log_inner;
  m["log_outer"] = plan.log_outer;
  m["A_final"] = A;

  if (options.certify) {
    rep.gaps.push_back(saddle_gap(problem, res.x, res.y, 0.01 * epsilon));
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

AuditResult audit_model_inequality(const SaddleProblem& problem,
                                   const TolerancePlan& plan, long pairs,
                                   std::uint64_t seed) {
  require_strongly_convex(problem);
  AuditResult out;
  rng::Engine g(seed);
  const Vector y0 = problem.Q_y.interior_point();
  for (long i = 0; i < pairs; ++i) {
    const Vector x1 = problem.Q_x.sample(g);
    const Vector x2 = problem.Q_x.sample(g);
    const InnerMaxResult r1 = inner_max_solve(problem, x1, plan.Delta_tilde);
    const Vector gt = problem.grad_x(x1, r1.y);
    const PhiBracket p1 = phi_bracket(problem, x1, y0);
    const PhiBracket p2 = phi_bracket(problem, x2, y0);
    const Vector d = x2 - x1;
    const double lin = gt.dot(d);
    const double lower =
        0.5 * problem.mu_x * d.squaredNorm() + lin + p1.lo - plan.delta;
    const double upper =
        p1.hi + lin + 0.5 * plan.L * d.squaredNorm() + plan.delta;
    const double tol =
        1e-8 * (1.0 + std::abs(p1.hi) + std::abs(p2.hi) + std::abs(lin));
    std::ostringstream lo_msg, hi_msg;
    lo_msg << "lower model at pair " << i << ": " << lower << " > "
           << p2.hi;
    hi_msg << "upper model at pair " << i << ": " << p2.lo << " > " << upper;
    out.record(lower - p2.hi - tol, lo_msg.str());
    out.record(p2.lo - upper - tol, hi_msg.str());
  }
  return out;
}

}  // namespace saddlekit
