#include <cmath>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "saddlekit/audits.hpp"
#include "saddlekit/errors.hpp"
#include "saddlekit/gap.hpp"
#include "saddlekit/inner_solver.hpp"
#include "saddlekit/problems.hpp"
#include "saddlekit/rng.hpp"

using namespace saddlekit;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double t : v) x(i++) = t;
  return x;
}

// f(x, y) = a/2 x^2 - b/2 y^2 + c x y in one dimension each, on [-r, r]^2.
SaddleProblem scalar_quadratic(double a, double b, double c, double r) {
  SaddleProblem p;
  p.nx = p.ny = 1;
  p.f = [=](const Vector& x, const Vector& y) {
    return 0.5 * a * x(0) * x(0) - 0.5 * b * y(0) * y(0) + c * x(0) * y(0);
  };
  p.grad_x = [=](const Vector& x, const Vector& y) -> Vector {
    return vec({a * x(0) + c * y(0)});
  };
  p.grad_y = [=](const Vector& x, const Vector& y) -> Vector {
    return vec({c * x(0) - b * y(0)});
  };
  p.mu_x = a;
  p.mu_y = b;
  p.L_xx = a;
  p.L_yy = b;
  p.L_xy = std::abs(c);
  p.Q_x = FeasibleSet::box(1, -r, r);
  p.Q_y = FeasibleSet::box(1, -r, r);
  p.name = "scalar-quadratic";
  return p;
}

Matrix random_matrix(rng::Engine& g, int r, int c) {
  Matrix M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = rng::standard_normal(g);
  return M;
}

}  // namespace

TEST(SaddleToVI, BilinearScalarGivesRotation) {
  const auto vi = saddle_to_vi(scalar_quadratic(0, 0, 1, 1));
  const Vector G = vi.op(vec({0.3, -0.7}));
  EXPECT_DOUBLE_EQ(G(0), -0.7);
  EXPECT_DOUBLE_EQ(G(1), -0.3);
  EXPECT_EQ(vi.set.dim(), 2);
}

TEST(SaddleToVI, MonotonicityIdentities) {
  rng::Engine g(1);
  const Matrix B = random_matrix(g, 3, 2);
  const auto bil = saddle_to_vi(
      bilinear_saddle(B, vec({0.1, 0.2, -0.1}), vec({0.3, 0.0}), 1, 1));
  const auto quad = saddle_to_vi(scalar_quadratic(1, 1, 1, 2));
  for (int t = 0; t < 200; ++t) {
    const Vector z1 = bil.set.sample(g), z2 = bil.set.sample(g);
    EXPECT_NEAR((bil.op(z1) - bil.op(z2)).dot(z1 - z2), 0.0, 1e-12);
    const Vector w1 = quad.set.sample(g), w2 = quad.set.sample(g);
    EXPECT_NEAR((quad.op(w1) - quad.op(w2)).dot(w1 - w2),
                (w1 - w2).squaredNorm(), 1e-12);
  }
}

// min(mu_x, mu_y)-strong monotonicity of the reduction.
TEST(SaddleToVI, StrongMonotonicityProperty) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto p = random_quadratic_saddle(3, 4, 0.5 * seed, 2.0, 1.5, 2.0, seed);
    const auto vi = saddle_to_vi(p);
    EXPECT_DOUBLE_EQ(vi.op.constants.mu, std::min(p.mu_x, p.mu_y));
    const auto a = audit_monotonicity(vi.op, vi.set, 1000, seed, 1e-6);
    EXPECT_TRUE(a.passed()) << a.first_violation;
  }
}

TEST(SaddleGap, ClosedFormExamples) {
  const auto p = scalar_quadratic(1, 1, 0, 2);
  const auto at_saddle = saddle_gap(p, vec({0}), vec({0}), 1e-10);
  EXPECT_TRUE(at_saddle.certified);
  EXPECT_NEAR(at_saddle.value, 0.0, 1e-9);
  const auto off = saddle_gap(p, vec({1}), vec({0}), 1e-10);
  EXPECT_TRUE(off.upper_bound);
  EXPECT_NEAR(off.value, 0.5, 1e-9);
  EXPECT_GE(off.value, 0.5 - 1e-12);
}

TEST(SaddleGap, BilinearAtKnownSaddle) {
  rng::Engine g(2);
  const Matrix B = random_matrix(g, 3, 3);
  const Vector xs = vec({0.2, -0.1, 0.3}), ys = vec({-0.25, 0.1, 0.05});
  const auto p = bilinear_saddle(B, xs, ys, 1.0, 1.0);
  const double tol = 1e-6;
  const auto c = saddle_gap(p, xs, ys, tol);
  EXPECT_TRUE(c.certified);
  EXPECT_LE(c.value, 10 * tol);
}

// Nonnegativity up to the certification tolerance at random feasible pairs.
TEST(SaddleGap, NonnegativeProperty) {
  rng::Engine g(9);
  const auto p = random_quadratic_saddle(2, 3, 1, 1, 2, 1.5, 4);
  for (int t = 0; t < 30; ++t) {
    const auto c = saddle_gap(p, p.Q_x.sample(g), p.Q_y.sample(g), 1e-8);
    EXPECT_TRUE(c.certified);
    EXPECT_GE(c.value, -2 * c.tolerance - 1e-12);
  }
}

TEST(SaddleGap, InfeasibleCandidateRejected) {
  const auto p = scalar_quadratic(1, 1, 0, 1);
  EXPECT_THROW(saddle_gap(p, vec({3}), vec({0}), 1e-6), InvalidInputError);
}

TEST(VIGap, Examples) {
  VIOperator zero;
  zero.dim = 2;
  zero.eval = [](const Vector&) -> Vector { return Vector::Zero(2); };
  EXPECT_EQ(vi_gap(zero, FeasibleSet::ball(2, 1), vec({0.2, 0.1})).value, 0.0);

  const auto c = affine_vi(Matrix::Zero(1, 1), Vector::Zero(1), 1.0);
  VIOperator constant = c.op;
  constant.affine = AffineForm{Matrix::Zero(1, 1), vec({1.0})};
  constant.eval = [](const Vector&) -> Vector { return vec({1.0}); };
  const auto box = FeasibleSet::box(1, -1, 1);
  const auto cc = vi_gap(constant, box, vec({0}));
  EXPECT_TRUE(cc.certified);
  EXPECT_DOUBLE_EQ(cc.value, 1.0);
}

// g(x) = x on [-1, 1] at x~ = 0: max_x -x^2 is 0, confirmed by a grid.
TEST(VIGap, IdentityOnIntervalIsZero) {
  const double grid =
      oracle::grid_max([](double x) { return x * (0.0 - x); }, -1, 1, 200000);
  EXPECT_EQ(grid, 0.0);
  auto inst = affine_vi(Matrix::Identity(1, 1), Vector::Zero(1), 1.0);
  const auto cert = vi_gap(inst.op, FeasibleSet::box(1, -1, 1), vec({0}));
  EXPECT_TRUE(cert.certified);
  EXPECT_NEAR(cert.value, grid, 1e-10);
  // Off the solution the certified value still brackets the grid maximum.
  const auto off = vi_gap(inst.op, FeasibleSet::box(1, -1, 1), vec({0.6}));
  const double g2 =
      oracle::grid_max([](double x) { return x * (0.6 - x); }, -1, 1, 200000);
  EXPECT_GE(off.value, g2 - 1e-12);
  EXPECT_LE(off.value - off.tolerance, g2 + 1e-8);
}

TEST(VIGap, AtSolutionOfBuiltins) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto vi = random_affine_vi(4, 1.0, 2.0, 1.5, seed);
    const auto c = vi_gap(vi.op, vi.set, *vi.solution);
    EXPECT_TRUE(c.certified);
    EXPECT_LE(c.value, 1e-9);
  }
  const auto skew = skew_vi(1.0);
  EXPECT_LE(vi_gap(skew.op, skew.set, Vector::Zero(2)).value, 1e-9);

  Matrix B(2, 2);
  B << 1, 2, -1, 0.5;
  const Vector a = vec({0.1, -0.2}), b = vec({0.05, 0.1});
  const auto q = quadratic_saddle(1, 1, B, a, b, 2, 2);
  const auto [xs, ys] = oracle::quadratic_saddle_point(1, 1, B, a, b);
  const auto vi = saddle_to_vi(q);
  Vector z(4);
  z << xs, ys;
  EXPECT_LE(vi_gap(vi.op, vi.set, z).value, 1e-9);
}

TEST(VIGap, NonlinearGetsLowerBound) {
  VIOperator op;
  op.dim = 1;
  op.eval = [](const Vector& x) -> Vector { return vec({std::pow(x(0), 3)}); };
  const auto c = vi_gap(op, FeasibleSet::box(1, -1, 1), vec({0.5}), 4000);
  EXPECT_FALSE(c.upper_bound);
  const double grid = oracle::grid_max(
      [](double x) { return x * x * x * (0.5 - x); }, -1, 1, 100000);
  EXPECT_LE(c.value, grid + 1e-12);
  EXPECT_GE(c.value, grid - 1e-3);
  EXPECT_THROW(vi_gap(op, FeasibleSet::full_space(1), vec({0})),
               InvalidInputError);
}

TEST(QuadraticSaddle, LibrarySolutionMatchesSchurOracle) {
  rng::Engine g(31);
  for (int t = 0; t < 10; ++t) {
    const Matrix B = random_matrix(g, 3, 2);
    const Vector a = random_matrix(g, 3, 1), b = random_matrix(g, 2, 1);
    const auto [x1, y1] = quadratic_saddle_solution(0.7, 1.3, B, a, b);
    const auto [x2, y2] = oracle::quadratic_saddle_point(0.7, 1.3, B, a, b);
    EXPECT_LE((x1 - x2).norm() + (y1 - y2).norm(), 1e-10);
  }
}

// Declared constants of every built-in operator survive sampled audits.
TEST(BuiltinAudits, MonotonicityAndRelativeBoundedness) {
  rng::Engine g(3);
  std::vector<VIInstance> ops{
      random_affine_vi(3, 1.0, 1.0, 1.0, 1), random_affine_vi(5, 0.2, 3.0, 2, 2),
      skew_vi(1.0),
      saddle_to_vi(bilinear_saddle(random_matrix(g, 2, 3), vec({0.1, 0.1}),
                                   vec({0, 0.2, -0.2}), 1, 1)),
      saddle_to_vi(random_quadratic_saddle(2, 2, 1, 1, 1, 1, 5))};
  const auto e = ProxSetup::euclidean();
  for (const auto& vi : ops) {
    const auto m = audit_monotonicity(vi.op, vi.set, 1000, 17);
    EXPECT_TRUE(m.passed()) << vi.op.name << ": " << m.first_violation;
    const auto r = audit_relative_boundedness(vi.op, e, vi.set, 1000, 18);
    EXPECT_TRUE(r.passed()) << vi.op.name << ": " << r.first_violation;
  }
}

// A misdeclared constant is caught by the audit.
TEST(BuiltinAudits, DetectsMisdeclaredConstants) {
  auto vi = random_affine_vi(3, 1.0, 1.0, 1.0, 1);
  vi.op.constants.mu = 5.0;
  EXPECT_FALSE(audit_monotonicity(vi.op, vi.set, 1000, 1).passed());
  vi.op.constants.M = 0.01;
  EXPECT_FALSE(audit_relative_boundedness(vi.op, ProxSetup::euclidean(),
                                          vi.set, 1000, 1)
                   .passed());
}

TEST(BuiltinAudits, SaddleGradientsConvexityHolder) {
  rng::Engine g(6);
  std::vector<SaddleProblem> ps{
      random_quadratic_saddle(3, 2, 1, 2, 1.5, 1, 1),
      bilinear_saddle(random_matrix(g, 2, 2), vec({0, 0.1}), vec({0.2, 0}), 1,
                      1),
      scalar_quadratic(2, 3, -1, 1)};
  for (const auto& p : ps) {
    auto fd = audit_saddle_gradients(p, 100, 1);
    EXPECT_TRUE(fd.passed()) << p.name << ": " << fd.first_violation;
    auto cv = audit_saddle_convexity(p, 1000, 2);
    EXPECT_TRUE(cv.passed()) << p.name << ": " << cv.first_violation;
    auto h = audit_saddle_holder(p, 1000, 3);
    EXPECT_TRUE(h.passed()) << p.name << ": " << h.first_violation;
  }
}

TEST(InnerSolver, CertifiesStronglyConvexQuadratic) {
  // min 1/2 |x - c|^2 over the unit ball, c outside: x* = c / |c|.
  const Vector c = vec({3, 4});
  InnerOptions o;
  o.mu = 1;
  o.value_tol = 1e-12;
  o.dist_tol = 1e-7;
  const auto r = minimize_strongly_convex(
      [&](const Vector& x) { return 0.5 * (x - c).squaredNorm(); },
      [&](const Vector& x) -> Vector { return x - c; },
      FeasibleSet::ball(2, 1), Vector::Zero(2), o);
  EXPECT_TRUE(r.certified);
  EXPECT_LE((r.x - c / 5.0).norm(), 1e-7);
  EXPECT_LE((r.x - c / 5.0).norm(), r.dist_bound + 1e-15);
}
