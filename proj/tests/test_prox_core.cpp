#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "saddlekit/errors.hpp"
#include "saddlekit/feasible_set.hpp"
#include "saddlekit/prox.hpp"
#include "saddlekit/rng.hpp"

using namespace saddlekit;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double t : v) x(i++) = t;
  return x;
}

Vector gaussian(rng::Engine& g, int n, double scale = 1.0) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * rng::standard_normal(g);
  return v;
}

}  // namespace

TEST(Bregman, EuclideanExamples) {
  const auto e = ProxSetup::euclidean();
  const Vector x = vec({0.3, -1.2, 4.0});
  EXPECT_EQ(bregman(e, x, x), 0.0);
  EXPECT_DOUBLE_EQ(bregman(e, vec({1, 0}), vec({0, 0})), 0.5);
}

TEST(Bregman, EntropyMatchesHighPrecisionKL) {
  const auto ent = ProxSetup::entropy(2);
  const double v = bregman(ent, vec({0.5, 0.5}), vec({0.25, 0.75}));
  const double ref = oracle::kl({0.5, 0.5}, {0.25, 0.75});
  EXPECT_NEAR(v, ref, 1e-14);
  EXPECT_NEAR(v, 0.14384, 1e-5);

  rng::Engine g(11);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 5;
    const auto s = ProxSetup::entropy(n);
    Vector x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x(i) = rng::uniform_open01(g);
      y(i) = rng::uniform_open01(g);
    }
    x /= x.sum();
    y /= y.sum();
    std::vector<double> xs(x.data(), x.data() + n), ys(y.data(), y.data() + n);
    EXPECT_NEAR(bregman(s, y, x), oracle::kl(ys, xs), 1e-12);
  }
}

TEST(Bregman, EntropyRejectsNonpositiveBase) {
  const auto ent = ProxSetup::entropy(2);
  EXPECT_THROW(bregman(ent, vec({0.5, 0.5}), vec({0.0, 1.0})),
               InvalidInputError);
  EXPECT_THROW(bregman(ent, vec({-0.1, 1.1}), vec({0.5, 0.5})),
               InvalidInputError);
}

// V(y, x) >= 1/2 |y - x|^2 in the declared norm, V(x, x) = 0, V >= 0.
TEST(Bregman, StrongConvexityProperty) {
  rng::Engine g(5);
  const auto e = ProxSetup::euclidean();
  const auto simplex = FeasibleSet::simplex(4);
  const auto ent = ProxSetup::entropy(4);
  const auto scaled = scaled_prox(e, vec({1, -2, 0.5, 0}), 3.0);
  for (int t = 0; t < 1000; ++t) {
    const Vector a = gaussian(g, 4);
    const Vector b = gaussian(g, 4);
    EXPECT_NEAR(bregman(e, a, b), 0.5 * (a - b).squaredNorm(), 1e-12);
    EXPECT_GE(bregman(scaled, a, b), 0.5 * (a - b).squaredNorm() - 1e-10);

    Vector x = simplex.sample(g), y = simplex.sample(g);
    x = (x.array() + 1e-3).matrix() / (x.sum() + 4e-3);
    const double v = bregman(ent, y, x);
    EXPECT_GE(v, 0.0);
    EXPECT_GE(v, 0.5 * std::pow((y - x).lpNorm<1>(), 2) - 1e-10);
    EXPECT_NEAR(bregman(ent, x, x), 0.0, 1e-15);
  }
}

TEST(MirrorStep, EuclideanExamples) {
  const auto e = ProxSetup::euclidean();
  const Vector x = vec({0.2, 0.4});
  const Vector p = vec({3.0, -1.0});
  EXPECT_TRUE(mirror_step(e, FeasibleSet::full_space(2), x, p)
                  .isApprox(x - p, 1e-15));
  const Vector y = mirror_step(e, FeasibleSet::ball(2, 1.0), vec({0, 0}),
                               vec({-2, 0}));
  EXPECT_NEAR((y - vec({1, 0})).norm(), 0.0, 1e-15);
  const Vector yo = oracle::project_ball(vec({2, 0}), vec({0, 0}), 1.0);
  EXPECT_NEAR((y - yo).norm(), 0.0, 1e-12);
}

// Euclidean mirror step is the projection of x - p; compared against
// bisection / ternary-search projections.
TEST(MirrorStep, EuclideanMatchesProjectionOracle) {
  rng::Engine g(21);
  const auto e = ProxSetup::euclidean();
  double worst = 0.0;
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + t % 6;
    const Vector p = gaussian(g, n, 2.0);
    Vector ref;
    Vector y;
    switch (t % 4) {
      case 0: {
        const Vector c = gaussian(g, n);
        const double r = 0.5 + rng::uniform01(g);
        const auto set = FeasibleSet::ball(c, r);
        const Vector x = set.sample(g);
        y = mirror_step(e, set, x, p);
        ref = oracle::project_ball(x - p, c, r);
        break;
      }
      case 1: {
        const Vector lo = gaussian(g, n);
        const Vector hi = lo + Vector::Constant(n, 0.1 + rng::uniform01(g));
        const auto set = FeasibleSet::box(lo, hi);
        const Vector x = set.sample(g);
        y = mirror_step(e, set, x, p);
        ref = oracle::project_box(x - p, lo, hi);
        break;
      }
      case 2: {
        const auto set = FeasibleSet::nonnegative_orthant(n);
        const Vector x = set.sample(g);
        y = mirror_step(e, set, x, p);
        ref = oracle::project_orthant(x - p);
        break;
      }
      default: {
        const auto set = FeasibleSet::simplex(n);
        const Vector x = set.sample(g);
        y = mirror_step(e, set, x, p);
        ref = oracle::project_simplex(x - p);
        break;
      }
    }
    worst = std::max(worst, (y - ref).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(MirrorStep, EntropySimplexMultiplicativeUpdate) {
  const auto ent = ProxSetup::entropy(3);
  const auto set = FeasibleSet::simplex(3);
  const Vector x = Vector::Constant(3, 1.0 / 3.0);
  const Vector p = vec({0.7, -0.4, 1.3});
  const Vector y = mirror_step(ent, set, x, p);
  const Vector closed =
      (x.array() * (-p.array()).exp()).matrix() /
      (x.array() * (-p.array()).exp()).sum();
  EXPECT_LE((y - closed).cwiseAbs().maxCoeff(), 1e-12);
  // Dense-grid argmin agrees to grid resolution.
  const Vector grid = oracle::entropy_step_grid(x, p, 1000);
  EXPECT_LE((y - grid).cwiseAbs().maxCoeff(), 2e-3);

  const auto ent2 = ProxSetup::entropy(2);
  const Vector x2 = vec({0.3, 0.7});
  const Vector p2 = vec({-0.2, 0.9});
  const Vector y2 = mirror_step(ent2, FeasibleSet::simplex(2), x2, p2);
  EXPECT_LE((y2 - oracle::entropy_step_grid(x2, p2, 100000))
                .cwiseAbs()
                .maxCoeff(),
            2e-5);
}

// First-order optimality <p + grad d(y) - grad d(x), z - y> >= 0.
TEST(MirrorStep, OptimalityProperty) {
  rng::Engine g(3);
  struct Case {
    ProxSetup setup;
    FeasibleSet set;
  };
  std::vector<Case> cases{
      {ProxSetup::euclidean(), FeasibleSet::ball(3, 1.5)},
      {ProxSetup::euclidean(), FeasibleSet::box(3, -1, 2)},
      {ProxSetup::euclidean(), FeasibleSet::simplex(3)},
      {ProxSetup::euclidean(), FeasibleSet::nonnegative_ball(3, 1.0)},
      {ProxSetup::entropy(3), FeasibleSet::simplex(3)},
      {ProxSetup::entropy(3), FeasibleSet::box(3, 0.1, 2.0)},
      {ProxSetup::euclidean(),
       FeasibleSet::product({FeasibleSet::ball(2, 1.0),
                             FeasibleSet::nonnegative_ball(1, 2.0)})},
  };
  for (const auto& c : cases) {
    for (int t = 0; t < 20; ++t) {
      Vector x = c.set.sample(g);
      if (c.setup.kind() == ProxKind::kEntropy) {
        x = (x.array() + 0.05).matrix();
        x = c.set.kind() == SetKind::kSimplex ? Vector(x / x.sum())
                                              : c.set.project(x);
      }
      const Vector p = gaussian(g, 3);
      const Vector y = mirror_step(c.setup, c.set, x, p);
      ASSERT_TRUE(c.set.contains(y, 1e-9));
      const Vector r = p + c.setup.gradient(y) - c.setup.gradient(x);
      for (int s = 0; s < 100; ++s) {
        const Vector z = c.set.sample(g);
        EXPECT_GE(r.dot(z - y), -1e-8) << c.set.id();
      }
    }
  }
}

TEST(MirrorStep, UnsupportedPairRaisesCapabilityError) {
  const auto ent = ProxSetup::entropy(2);
  EXPECT_THROW(mirror_step(ent, FeasibleSet::ball(2, 1.0), vec({0.5, 0.5}),
                           vec({0, 0})),
               CapabilityError);
}

TEST(ScaledProx, Examples) {
  const auto e = ProxSetup::euclidean();
  const Vector y = vec({2, 0}), x = vec({0, 0});
  const auto s1 = scaled_prox(e, vec({5, -3}), 1.0);
  EXPECT_NEAR(bregman(s1, y, x), 0.5 * (y - x).squaredNorm(), 1e-14);
  const auto s2 = scaled_prox(e, vec({0, 0}), 2.0);
  EXPECT_NEAR(bregman(s2, y, x), 2.0, 1e-14);
  const Vector c = vec({0.4, -0.1});
  EXPECT_EQ(bregman(scaled_prox(e, c, 3.0), c, c), 0.0);
}

TEST(ScaledProx, DivergenceTransformsAsDeclared) {
  rng::Engine g(8);
  const auto ent = ProxSetup::entropy(3);
  const Vector c = vec({-0.2, -0.3, -0.1});
  const double R = 0.5;
  const auto s = scaled_prox(ent, c, R);
  for (int t = 0; t < 50; ++t) {
    Vector u = FeasibleSet::simplex(3).sample(g);
    Vector w = FeasibleSet::simplex(3).sample(g);
    w = (w.array() + 0.01).matrix() / (w.sum() + 0.03);
    const Vector y = c + R * u;
    const Vector x = c + R * w;
    EXPECT_NEAR(bregman(s, y, x), R * R * bregman(ent, u, w), 1e-12);
  }
}

TEST(ProxCenter, MinimizerOfD) {
  const auto e = ProxSetup::euclidean();
  const auto box = FeasibleSet::box(2, 1.0, 3.0);
  EXPECT_TRUE(prox_center(e, box, vec({2, 2})).isApprox(vec({1, 1}), 1e-14));
  const auto ent = ProxSetup::entropy(4);
  const Vector u =
      prox_center(ent, FeasibleSet::simplex(4), vec({0.1, 0.2, 0.3, 0.4}));
  EXPECT_LE((u - Vector::Constant(4, 0.25)).norm(), 1e-12);
  // d vanishes at its minimizer over the simplex.
  EXPECT_NEAR(ent.value(u), 0.0, 1e-12);
}

TEST(FeasibleSet, ProductDiameterComposes) {
  const auto p = FeasibleSet::product(
      {FeasibleSet::ball(2, 1.5), FeasibleSet::box(1, 0.0, 4.0)});
  EXPECT_DOUBLE_EQ(*p.diameter(), std::hypot(3.0, 4.0));
  EXPECT_FALSE(FeasibleSet::nonnegative_orthant(2).diameter().has_value());
}

// Declared diameter is never smaller than an observed pairwise distance.
TEST(FeasibleSet, DiameterDominatesSamples) {
  rng::Engine g(4);
  for (const auto& set :
       {FeasibleSet::ball(3, 2.0), FeasibleSet::box(3, -1, 1),
        FeasibleSet::simplex(3), FeasibleSet::nonnegative_ball(3, 1.0)}) {
    for (int t = 0; t < 1000; ++t) {
      const Vector a = set.sample(g), b = set.sample(g);
      ASSERT_TRUE(set.contains(a));
      EXPECT_LE((a - b).norm(), *set.diameter() + 1e-12);
    }
  }
}

TEST(FeasibleSet, ParseIds) {
  EXPECT_EQ(parse_set("ball:2", 3).kind(), SetKind::kBall);
  EXPECT_EQ(parse_set("box:-1:1", 2).upper()(1), 1.0);
  EXPECT_EQ(parse_set("product:ball:1@2+nonneg-ball:3@1", 3).dim(), 3);
  EXPECT_THROW(parse_set("ellipsoid", 2), InvalidInputError);
  EXPECT_THROW(parse_set("ball:-1", 2), InvalidInputError);
  EXPECT_THROW(parse_prox("bregman", 2), InvalidInputError);
}

TEST(FeasibleSet, LinearMaximizer) {
  const auto box = FeasibleSet::box(2, -1.0, 1.0);
  EXPECT_TRUE(box.linear_maximizer(vec({1, -2})).isApprox(vec({1, -1})));
  const auto ball = FeasibleSet::ball(2, 2.0);
  EXPECT_TRUE(ball.linear_maximizer(vec({3, 4})).isApprox(vec({1.2, 1.6})));
  EXPECT_THROW(FeasibleSet::full_space(2).linear_maximizer(vec({1, 0})),
               InvalidInputError);
}
