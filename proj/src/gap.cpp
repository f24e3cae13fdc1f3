#include "saddlekit/gap.hpp"

#include <algorithm>
#include <cmath>

#include "saddlekit/errors.hpp"
#include "saddlekit/inner_solver.hpp"

namespace saddlekit {
namespace {

double positive_or(double v, double fallback) { return v > 0.0 ? v : fallback; }

GapCertificate affine_gap(const AffineForm& aff, const FeasibleSet& set,
                          const Vector& xt) {
  GapCertificate cert;
  cert.kind = GapKind::kVIRestricted;
  cert.upper_bound = true;
  const Matrix& A = aff.A;
  const Vector& b = aff.b;
  const double normA = A.norm();

  if (normA == 0.0) {
    // Constant g = b: max_x <b, x~ - x> is a linear program over the set.
    cert.value = b.dot(xt - set.linear_maximizer(-b));
    cert.method = "linear-exact";
    cert.certified = true;
    return cert;
  }

  // h(x) = <A x + b, x~ - x> is concave when A + A^T is PSD; minimize -h.
  const Matrix S = A + A.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues().minCoeff();
  const double lam_max = es.eigenvalues().maxCoeff();
  const Vector Atx = A.transpose() * xt;
  auto neg_h = [&](const Vector& x) { return (A * x + b).dot(x - xt); };
  auto neg_h_grad = [&](const Vector& x) -> Vector {
    return S * x + b - Atx;
  };
  const double scale = 1.0 + std::abs(b.dot(xt)) + normA;
  InnerOptions opt;
  opt.mu = std::max(0.0, lam_min);
  opt.L0 = positive_or(lam_max, 1.0);
  opt.value_tol = 1e-11 * scale;
  opt.max_iterations = 200000;
  const InnerResult r = minimize_strongly_convex(neg_h, neg_h_grad, set, xt, opt);
  cert.value = -r.value + r.value_gap;
  cert.tolerance = r.value_gap;
  cert.oracle_calls = r.oracle_calls;
  cert.certified = r.certified;
  cert.method = "affine-concave-certified";
  return cert;
}

GapCertificate sampled_gap(const VIOperator& op, const FeasibleSet& set,
                           const Vector& xt, long budget, std::uint64_t seed) {
  GapCertificate cert;
  cert.kind = GapKind::kVIRestricted;
  cert.method = "sampled-lower-bound";
  cert.tolerance = std::numeric_limits<double>::infinity();
  rng::Engine g(seed);
  auto h = [&](const Vector& x) {
    ++cert.oracle_calls;
    return op.eval(x).dot(xt - x);
  };
  // x = x~ gives h = 0, so the bound is never negative.
  Vector best = xt;
  double best_val = 0.0;
  const long n_samples = std::max<long>(1, budget / 2);
  for (long i = 0; i < n_samples; ++i) {
    const Vector x = set.sample(g);
    const double v = h(x);
    if (v > best_val) {
      best_val = v;
      best = x;
    }
  }
  // Local random search around the incumbent with a shrinking radius.
  double radius = 0.25 * set.diameter().value_or(1.0);
  const long n_local = budget - n_samples;
  for (long i = 0; i < n_local && radius > 1e-12; ++i) {
    Vector step(set.dim());
    for (int j = 0; j < set.dim(); ++j) step[j] = rng::standard_normal(g);
    const Vector cand = set.project(best + radius * step / step.norm());
    const double v = h(cand);
    if (v > best_val) {
      best_val = v;
      best = cand;
      radius *= 1.5;
    } else {
      radius *= 0.97;
    }
  }
  cert.value = best_val;
  return cert;
}

}  // namespace

std::string to_string(GapKind kind) {
  return kind == GapKind::kSaddle ? "saddle" : "vi-restricted";
}

GapCertificate saddle_gap(const SaddleProblem& problem, const Vector& x_tilde,
                          const Vector& y_tilde, double tol,
                          int max_inner_iterations) {
  problem.validate();
  if (!(tol > 0.0)) throw InvalidInputError("saddle_gap: tol must be > 0");
  if (!problem.Q_x.contains(x_tilde, 1e-7) ||
      !problem.Q_y.contains(y_tilde, 1e-7)) {
    throw InvalidInputError("saddle_gap: candidate is not feasible");
  }

  // Upper bound on max_y f(x~, y): minimize -f(x~, .) over Q_y.
  InnerOptions oy;
  oy.mu = problem.mu_y;
  oy.L0 = positive_or(problem.L_yy, 1.0);
  oy.value_tol = tol;
  oy.max_iterations = max_inner_iterations;
  const InnerResult ry = minimize_strongly_convex(
      [&](const Vector& y) { return -problem.f(x_tilde, y); },
      [&](const Vector& y) -> Vector { return -problem.grad_y(x_tilde, y); },
      problem.Q_y, y_tilde, oy);

  // Lower bound on min_x f(x, y~).
  InnerOptions ox;
  ox.mu = problem.mu_x;
  ox.L0 = positive_or(problem.L_xx, 1.0);
  ox.value_tol = tol;
  ox.max_iterations = max_inner_iterations;
  const InnerResult rx = minimize_strongly_convex(
      [&](const Vector& x) { return problem.f(x, y_tilde); },
      [&](const Vector& x) -> Vector { return problem.grad_x(x, y_tilde); },
      problem.Q_x, x_tilde, ox);

  GapCertificate cert;
  cert.kind = GapKind::kSaddle;
  const double upper_max = -ry.value + ry.value_gap;
  const double lower_min = rx.value - rx.value_gap;
  cert.value = upper_max - lower_min;
  cert.tolerance = ry.value_gap + rx.value_gap;
  cert.oracle_calls = ry.oracle_calls + rx.oracle_calls;
  cert.upper_bound = std::isfinite(cert.value);
  cert.certified = ry.certified && rx.certified;
  cert.method = "inner-apg(gradient-mapping|frank-wolfe)";
  return cert;
}

GapCertificate vi_gap(const VIOperator& op, const FeasibleSet& set,
                      const Vector& x_tilde, long budget, std::uint64_t seed) {
  if (!set.bounded()) {
    throw InvalidInputError(
        "vi_gap needs a compact feasible set to certify the restricted gap");
  }
  if (x_tilde.size() != set.dim() || op.dim != set.dim()) {
    throw InvalidInputError("vi_gap: dimension mismatch");
  }
  if (op.affine) {
    const Matrix S = op.affine->A + op.affine->A.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
    const double tol = 1e-12 * (1.0 + S.norm());
    if (S.size() == 0 || es.eigenvalues().minCoeff() >= -tol) {
      return affine_gap(*op.affine, set, x_tilde);
    }
  }
  return sampled_gap(op, set, x_tilde, budget, seed);
}

}  // namespace saddlekit
