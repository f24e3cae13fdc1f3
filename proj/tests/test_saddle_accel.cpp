#include <cmath>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "saddlekit/errors.hpp"
#include "saddlekit/gap.hpp"
#include "saddlekit/rng.hpp"
#include "saddlekit/saddle_accel.hpp"

using namespace saddlekit;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double t : v) x(i++) = t;
  return x;
}

struct QuadData {
  double mu_x, mu_y;
  Matrix B;
  Vector a, b;
};

QuadData quad_data(std::uint64_t seed, int nx, int ny) {
  rng::Engine g(seed);
  QuadData d{1.0, 2.0, Matrix(nx, ny), Vector(nx), Vector(ny)};
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) d.B(i, j) = 0.5 * rng::standard_normal(g);
  for (int i = 0; i < nx; ++i) d.a(i) = 0.3 * rng::standard_normal(g);
  for (int j = 0; j < ny; ++j) d.b(j) = 0.3 * rng::standard_normal(g);
  return d;
}

SaddleProblem quad(const QuadData& d, double rx, double ry) {
  return quadratic_saddle(d.mu_x, d.mu_y, d.B, d.a, d.b, rx, ry);
}

// f = mu_x/2 |x|^2 - mu_y/2 |y - c|^2, decoupled.
SaddleProblem separable(double mu_x, double mu_y, const Vector& c, double r) {
  SaddleProblem p;
  p.nx = 2;
  p.ny = static_cast<int>(c.size());
  p.f = [=](const Vector& x, const Vector& y) {
    return 0.5 * mu_x * x.squaredNorm() - 0.5 * mu_y * (y - c).squaredNorm();
  };
  p.grad_x = [=](const Vector& x, const Vector&) -> Vector { return mu_x * x; };
  p.grad_y = [=](const Vector&, const Vector& y) -> Vector {
    return -mu_y * (y - c);
  };
  p.mu_x = p.L_xx = mu_x;
  p.mu_y = p.L_yy = mu_y;
  p.L_xy = 0.0;
  p.nu = 1.0;
  p.Q_x = FeasibleSet::ball(2, r);
  p.Q_y = FeasibleSet::ball(p.ny, r);
  p.name = "separable";
  return p;
}

}  // namespace

TEST(HolderProfile, TabulatedCases) {
  const auto h1 = holder_profile(0.7, 1.3, 0.4, 2.5, 1.0);
  EXPECT_DOUBLE_EQ(h1.L_tilde, 2 * 1.3 * 1.3 / 0.4 + 0.7);
  EXPECT_EQ(h1.nu_tilde, 1.0);
  const auto h0 = holder_profile(0.7, 1.3, 0.4, 2.5, 0.0);
  EXPECT_DOUBLE_EQ(h0.L_tilde, 1.3 + 0.7);
  EXPECT_EQ(h0.nu_tilde, 0.0);
  const auto hh = holder_profile(1.0, 1.0, 2.0, 1.0, 0.5);
  EXPECT_EQ(hh.L_tilde, 2.0);
  EXPECT_EQ(hh.nu_tilde, 1.0 / 3.0);
}

TEST(HolderProfile, MatchesScalarOracle) {
  rng::Engine g(2);
  for (int t = 0; t < 100; ++t) {
    const double Lxx = rng::uniform01(g) * 3, Lxy = rng::uniform01(g) * 3 + 0.1;
    const double muy = rng::uniform01(g) + 0.1, D = rng::uniform01(g) * 4;
    const double nu = rng::uniform01(g);
    const auto h = holder_profile(Lxx, Lxy, muy, D, nu);
    EXPECT_NEAR(h.L_tilde, oracle::holder_L(Lxx, Lxy, muy, D, nu),
                1e-12 * h.L_tilde);
    EXPECT_EQ(h.nu_tilde, nu / (2 - nu));
  }
}

TEST(HolderProfile, RejectsBadInput) {
  EXPECT_THROW(holder_profile(1, 1, 1, 1, 1.5), InvalidInputError);
  EXPECT_THROW(holder_profile(1, 1, 1, 1, -0.1), InvalidInputError);
  EXPECT_THROW(holder_profile(1, 1, 0, 1, 0.5), InvalidInputError);
}

TEST(ModelL, TabulatedCases) {
  EXPECT_EQ(model_L(3.7, 1.0, 1e-9), 3.7);
  EXPECT_EQ(model_L(3.7, 1.0, 0.0), 3.7);
  EXPECT_DOUBLE_EQ(model_L(2.0, 0.0, 1.0), oracle::model_L(2.0, 0.0, 1.0));
  EXPECT_DOUBLE_EQ(model_L(2.0, 0.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(model_L(2.0, 0.0, 0.5), 4.0);
  EXPECT_NEAR(model_L(1.5, 1.0 / 3.0, 0.01), oracle::model_L(1.5, 1.0 / 3.0, 0.01),
              1e-12);
  EXPECT_THROW(model_L(2.0, 0.5, 0.0), InvalidInputError);
}

TEST(TolerancePlan, SmoothExample) {
  // nu = 1, L_xy = 1, mu_y = 1, L_xx = 0, mu_x = 1, D = 1, eps = 0.1.
  auto p = separable(1.0, 1.0, Vector::Zero(1), 0.5);
  p.L_xx = 0.0;
  p.L_xy = 1.0;
  const auto plan = tolerance_plan(p, 0.1);
  EXPECT_DOUBLE_EQ(plan.L, 2.0);
  EXPECT_EQ(plan.sweeps, 1);
  EXPECT_NEAR(plan.delta0, 0.1 / (4 * (1 + std::sqrt(2.0))), 1e-15);
  EXPECT_NEAR(plan.delta0, 0.010355, 1e-6);
  EXPECT_DOUBLE_EQ(plan.Delta, plan.delta0);
  EXPECT_DOUBLE_EQ(plan.Delta_tilde, plan.Delta);
  EXPECT_EQ(plan.outer_iters,
            static_cast<long>(std::ceil(2 * std::sqrt(2.0) *
                                        std::log(2 * 2.0 * 1.0 / 0.1))));
}

// Caps hold by construction for every exponent.
TEST(TolerancePlan, InvariantsAcrossExponents) {
  for (double nu : {0.25, 0.5, 0.75, 1.0}) {
    auto p = separable(1.0, 2.0, Vector::Zero(1), 1.0);
    p.L_xy = 0.5;
    p.L_xx = 1.5;
    p.nu = nu;
    for (double eps : {1e-1, 1e-3}) {
      const auto plan = tolerance_plan(p, eps);
      const double root = 1 + std::sqrt(plan.L / p.mu_x);
      EXPECT_LE(plan.delta0, eps / (4 * root));
      EXPECT_LE(plan.Delta, eps / (4 * plan.D * root) * (1 + 1e-15));
      EXPECT_LE(plan.delta * root, eps / 2 * (1 + 1e-12));
      EXPECT_GT(plan.delta0, 0);
      EXPECT_GT(plan.Delta_tilde, 0);
      EXPECT_NEAR(plan.L,
                  model_L(plan.profile.L_tilde, plan.profile.nu_tilde,
                          plan.delta0),
                  1e-12 * plan.L);
      if (nu < 1) EXPECT_GT(plan.sweeps, 1);
    }
  }
}

TEST(TolerancePlan, NuZeroRequiresSmallCoupling) {
  auto p = separable(1.0, 1.0, Vector::Zero(1), 1.0);
  p.nu = 0.0;
  p.L_xy = 1.0;
  EXPECT_THROW(tolerance_plan(p, 1e-2), PlanningError);
  p.L_xy = 1e-9;
  const auto plan = tolerance_plan(p, 1e-2);
  EXPECT_EQ(plan.Delta_tilde, plan.R_y);
}

TEST(InnerMax, ConcaveQuadraticInterior) {
  const Vector c = vec({0.2, -0.3});
  const auto p = separable(1.0, 3.0, c, 1.0);
  const auto r = inner_max_solve(p, vec({0.1, 0.1}), 1e-8);
  EXPECT_LE((r.y - c).norm(), 1e-8);
  EXPECT_LE(r.dist_bound, 1e-8);
}

TEST(InnerMax, QuadraticBestResponse) {
  const auto d = quad_data(3, 3, 2);
  const auto p = quad(d, 1.0, 10.0);  // y*(x) stays interior
  rng::Engine g(5);
  for (int t = 0; t < 30; ++t) {
    const Vector x = p.Q_x.sample(g);
    const double Dt = std::pow(10.0, -2 - t % 7);
    const auto r = inner_max_solve(p, x, Dt);
    const Vector ystar = oracle::quadratic_best_response(d.mu_y, d.B, d.b, x);
    EXPECT_LE((r.y - ystar).norm(), Dt);
    EXPECT_LE((r.y - ystar).norm(), r.dist_bound + 1e-14);
  }
}

TEST(InnerMax, VacuousToleranceTakesNoIterations) {
  const auto p = quad(quad_data(1, 2, 2), 1.0, 1.0);
  const auto r = inner_max_solve(p, vec({0.1, 0.2}), 5.0);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_TRUE(p.Q_y.contains(r.y));
}

TEST(InnerMax, BudgetExhaustionIsUncertified) {
  const auto p = quad(quad_data(1, 2, 2), 1.0, 10.0);
  EXPECT_THROW(inner_max_solve(p, vec({0.5, 0.5}), 1e-14, std::nullopt, 1),
               UncertifiedError);
}

// |grad_x f(x, y~) - grad phi(x)| <= Delta, grad phi(x) = grad_x f(x, y*(x)).
TEST(InexactGradient, WithinPlannedDelta) {
  const auto d = quad_data(7, 3, 3);
  const auto p = quad(d, 1.0, 10.0);
  const auto plan = tolerance_plan(p, 1e-3);
  rng::Engine g(1);
  for (int t = 0; t < 50; ++t) {
    const Vector x = p.Q_x.sample(g);
    const auto r = inner_max_solve(p, x, plan.Delta_tilde);
    const Vector ystar = oracle::quadratic_best_response(d.mu_y, d.B, d.b, x);
    EXPECT_LE((p.grad_x(x, r.y) - p.grad_x(x, ystar)).norm(),
              plan.Delta * (1 + 1e-12));
  }
}

// |y*(x1) - y*(x2)| <= (2 L_xy / mu_y)^(1/(2-nu)) |x1 - x2|^(1/(2-nu)).
TEST(BestResponse, HolderProperty) {
  const auto d = quad_data(9, 2, 3);
  const auto p = quad(d, 1.0, 10.0);
  rng::Engine g(4);
  for (int t = 0; t < 200; ++t) {
    const Vector x1 = p.Q_x.sample(g), x2 = p.Q_x.sample(g);
    const Vector y1 = oracle::quadratic_best_response(d.mu_y, d.B, d.b, x1);
    const Vector y2 = oracle::quadratic_best_response(d.mu_y, d.B, d.b, x2);
    EXPECT_LE((y1 - y2).norm(),
              2 * p.L_xy / p.mu_y * (x1 - x2).norm() + 1e-6);
  }
}

TEST(FGM, SeparableConvergesToOrigin) {
  const auto p = separable(1.0, 1.0, Vector::Zero(2), 1.0);
  FGMOptions o;
  o.x0 = vec({0.6, -0.5});
  const auto res = fgm_solve(p, 1e-4, o);
  ASSERT_EQ(res.report.gaps.size(), 1u);
  EXPECT_LE(res.report.gaps[0].value, 1e-4);
  EXPECT_LE(res.x.norm(), 1e-2);
}

TEST(FGM, QuadraticBilinearCertifiedGap) {
  const auto d = quad_data(11, 3, 2);
  const auto p = quad(d, 1.0, 1.0);
  const auto [xs, ys] =
      oracle::quadratic_saddle_point(d.mu_x, d.mu_y, d.B, d.a, d.b);
  ASSERT_LT(xs.norm(), 1.0);
  ASSERT_LT(ys.norm(), 1.0);
  const auto res = fgm_solve(p, 1e-3);
  const auto& gap = res.report.gaps.at(0);
  EXPECT_TRUE(gap.certified);
  EXPECT_LE(gap.value, 1e-3);
  EXPECT_EQ(res.report.iterations,
            static_cast<long>(std::ceil(
                2 * std::sqrt(res.plan.L / p.mu_x) *
                std::log(2 * res.plan.L * std::pow(res.plan.R_x, 2) / 1e-3))));
  EXPECT_EQ(res.report.metrics.at("outer_iters"), res.plan.outer_iters);
  // Distance to the analytic saddle is consistent with the gap.
  EXPECT_LE((res.x - xs).squaredNorm(), 2 * 1e-3 / p.mu_x);
  const auto audit = audit_model_inequality(p, res.plan, 200, 1);
  EXPECT_TRUE(audit.passed()) << audit.first_violation;
}

// The certified objective is non-increasing up to delta per step.
TEST(FGM, ObjectiveTraceDescends) {
  const auto p = quad(quad_data(13, 4, 3), 1.0, 1.0);
  const auto res = fgm_solve(p, 1e-4);
  const auto& tr = res.report.objective_trace;
  ASSERT_EQ(static_cast<long>(tr.size()), res.plan.outer_iters + 1);
  EXPECT_LE(tr.back(), tr.front());
}

TEST(FGM, MisdeclaredConstantsDetected) {
  auto p = separable(5.0, 1.0, Vector::Zero(1), 1.0);
  p.mu_x = 0.01;
  p.L_xx = 0.01;
  FGMOptions o;
  o.x0 = vec({0.9, 0.0});
  EXPECT_THROW(fgm_solve(p, 1e-3, o), ConstantsMisdeclaredError);
}

TEST(FGM, HolderExponentBelowOne) {
  // On sets of diameter 1 a quadratic also satisfies the nu = 1/2
  // conditions with the same constants: |d| <= |d|^(1/2).
  const auto d = quad_data(17, 2, 2);
  auto p = quad(d, 0.5, 0.5);
  p.nu = 0.5;
  EXPECT_TRUE(audit_saddle_holder(p, 500, 1).passed());
  const auto res = fgm_solve(p, 1e-2);
  EXPECT_LE(res.report.gaps.at(0).value, 1e-2);
}
