#include "saddlekit/audits.hpp"

#include <cmath>
#include <sstream>

#include "saddlekit/errors.hpp"
#include "saddlekit/rng.hpp"

namespace saddlekit {

void AuditResult::record(double excess, const std::string& what) {
  ++samples;
  worst = std::max(worst, excess);
  if (excess > 0.0) {
    if (violations == 0) first_violation = what;
    ++violations;
  }
}

namespace {

std::string describe(const char* label, double lhs, double rhs) {
  std::ostringstream os;
  os.precision(12);
  os << label << ": " << lhs << " vs allowed " << rhs;
  return os.str();
}

// |grad_x f(x,y) - grad_x f(x',y)| style check: lhs <= L |d|^nu + tol.
void holder_check(AuditResult& out, const char* label, double lhs, double L,
                  double dist, double nu, double tol) {
  const double rhs = L * std::pow(dist, nu) + tol;
  out.record(lhs - rhs, describe(label, lhs, rhs));
}

}  // namespace

AuditResult audit_monotonicity(const VIOperator& op, const FeasibleSet& set,
                               long pairs, std::uint64_t seed, double tol) {
  AuditResult out;
  rng::Engine g(seed);
  const double mu = op.constants.mu;
  const double sigma = op.constants.sigma;
  for (long i = 0; i < pairs; ++i) {
    const Vector x = set.sample(g);
    const Vector y = set.sample(g);
    const double lhs = (op.eval(y) - op.eval(x)).dot(y - x);
    const double rhs = mu * (y - x).squaredNorm() - sigma - tol;
    out.record(rhs - lhs, describe("monotonicity", lhs, rhs));
  }
  return out;
}

AuditResult audit_relative_boundedness(const VIOperator& op,
                                       const ProxSetup& setup,
                                       const FeasibleSet& set, long pairs,
                                       std::uint64_t seed, double tol) {
  if (!op.constants.M) {
    throw InvalidInputError("operator declares no relative-boundedness M");
  }
  const double M = *op.constants.M;
  AuditResult out;
  rng::Engine g(seed);
  for (long i = 0; i < pairs; ++i) {
    const Vector x = set.sample(g);
    const Vector y = set.sample(g);
    const double lhs = op.eval(x).dot(y - x);
    const double rhs = M * std::sqrt(2.0 * bregman(setup, y, x)) + tol;
    out.record(lhs - rhs, describe("relative boundedness", lhs, rhs));
  }
  return out;
}

AuditResult audit_saddle_convexity(const SaddleProblem& p, long pairs,
                                   std::uint64_t seed, double tol) {
  p.validate();
  AuditResult out;
  rng::Engine g(seed);
  for (long i = 0; i < pairs; ++i) {
    const Vector x1 = p.Q_x.sample(g), x2 = p.Q_x.sample(g);
    const Vector y1 = p.Q_y.sample(g), y2 = p.Q_y.sample(g);
    const Vector y = p.Q_y.sample(g), x = p.Q_x.sample(g);
    const double cx = (p.grad_x(x1, y) - p.grad_x(x2, y)).dot(x1 - x2);
    const double rx = p.mu_x * (x1 - x2).squaredNorm() - tol;
    out.record(rx - cx, describe("strong convexity in x", cx, rx));
    const double cy = -(p.grad_y(x, y1) - p.grad_y(x, y2)).dot(y1 - y2);
    const double ry = p.mu_y * (y1 - y2).squaredNorm() - tol;
    out.record(ry - cy, describe("strong concavity in y", cy, ry));
  }
  return out;
}

AuditResult audit_saddle_holder(const SaddleProblem& p, long pairs,
                                std::uint64_t seed, double tol) {
  p.validate();
  AuditResult out;
  rng::Engine g(seed);
  for (long i = 0; i < pairs; ++i) {
    const Vector x = p.Q_x.sample(g), x2 = p.Q_x.sample(g);
    const Vector y = p.Q_y.sample(g), y2 = p.Q_y.sample(g);
    const double dx = (x - x2).norm(), dy = (y - y2).norm();
    holder_check(out, "L_xx", (p.grad_x(x, y) - p.grad_x(x2, y)).norm(),
                 p.L_xx, dx, p.nu, tol);
    holder_check(out, "L_xy", (p.grad_x(x, y) - p.grad_x(x, y2)).norm(),
                 p.L_xy, dy, p.nu, tol);
    holder_check(out, "L_yx", (p.grad_y(x, y) - p.grad_y(x2, y)).norm(),
                 p.L_xy, dx, p.nu, tol);
    holder_check(out, "L_yy", (p.grad_y(x, y) - p.grad_y(x, y2)).norm(),
                 p.L_yy, dy, 1.0, tol);
  }
  return out;
}

AuditResult audit_gradient(const std::function<double(const Vector&)>& f,
                           const std::function<Vector(const Vector&)>& grad,
                           const FeasibleSet& set, long points,
                           std::uint64_t seed, double rel_tol,
                           const std::function<bool(const Vector&)>& skip) {
  AuditResult out;
  rng::Engine g(seed);
  for (long i = 0; i < points; ++i) {
    const Vector x = set.sample(g);
    if (skip && skip(x)) continue;
    const Vector an = grad(x);
    Vector fd(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      Vector xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      fd[j] = (f(xp) - f(xm)) / (2.0 * h);
    }
    const double err = (fd - an).norm();
    const double allowed = rel_tol * std::max(1.0, an.norm());
    out.record(err - allowed, describe("finite differences", err, allowed));
  }
  return out;
}

AuditResult audit_saddle_gradients(const SaddleProblem& p, long points,
                                   std::uint64_t seed, double rel_tol) {
  p.validate();
  AuditResult out;
  rng::Engine g(seed);
  for (long i = 0; i < points; ++i) {
    const Vector x = p.Q_x.sample(g);
    const Vector y = p.Q_y.sample(g);
    const FeasibleSet around_x = FeasibleSet::ball(x, 1e-12);
    const FeasibleSet around_y = FeasibleSet::ball(y, 1e-12);
    const AuditResult ax = audit_gradient(
        [&](const Vector& u) { return p.f(u, y); },
        [&](const Vector& u) -> Vector { return p.grad_x(u, y); }, around_x, 1,
        seed + i, rel_tol);
    const AuditResult ay = audit_gradient(
        [&](const Vector& v) { return p.f(x, v); },
        [&](const Vector& v) -> Vector { return p.grad_y(x, v); }, around_y, 1,
        seed + i, rel_tol);
    out.record(ax.worst, "grad_x " + ax.first_violation);
    out.record(ay.worst, "grad_y " + ay.first_violation);
  }
  return out;
}

}  // namespace saddlekit
