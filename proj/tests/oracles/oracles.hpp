#pragma once

// Reference computations used by the tests. Each one is written from the
// defining formula with a method different from the library's, so agreement
// is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using big = boost::multiprecision::cpp_bin_float_50;

// KL(y || x) = sum y_i ln(y_i / x_i) in 50-digit arithmetic. For points on
// the simplex this is the entropy Bregman divergence.
inline double kl(const std::vector<double>& y, const std::vector<double>& x) {
  big s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) continue;
    big yi = y[i];
    big xi = x[i];
    s += yi * boost::multiprecision::log(yi / xi);
  }
  return static_cast<double>(s);
}

// Bisection on a monotone scalar function h, h(lo) <= 0 <= h(hi).
inline double bisect(const std::function<double(double)>& h, double lo,
                     double hi, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) <= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Ternary search for the minimizer of a unimodal scalar function.
inline double ternary_min(const std::function<double(double)>& f, double lo,
                          double hi, int iters = 300) {
  for (int i = 0; i < iters; ++i) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    (f(a) < f(b) ? hi : lo) = (f(a) < f(b) ? b : a);
  }
  return 0.5 * (lo + hi);
}

// Ball projection via the multiplier: y = c + (v - c) / (1 + t) with t >= 0
// the smallest value making |y - c| <= r.
inline Vec project_ball(const Vec& v, const Vec& c, double r) {
  const double n = (v - c).norm();
  if (n <= r) return v;
  const double t = bisect([&](double t) { return r - n / (1.0 + t); }, 0.0,
                          n / r + 1.0);
  return c + (v - c) / (1.0 + t);
}

// Box projection coordinate by coordinate with ternary search.
inline Vec project_box(const Vec& v, const Vec& lo, const Vec& hi) {
  Vec y(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    y(i) = ternary_min([&](double t) { return (t - v(i)) * (t - v(i)); },
                       lo(i), hi(i));
  }
  return y;
}

inline Vec project_orthant(const Vec& v) {
  Vec y(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double hi = std::max(1.0, std::abs(v(i)) + 1.0);
    y(i) = ternary_min([&](double t) { return (t - v(i)) * (t - v(i)); }, 0.0,
                       hi);
  }
  return y;
}

// Simplex projection: y_i = max(v_i - tau, 0) with sum y = 1, tau by
// bisection.
inline Vec project_simplex(const Vec& v) {
  auto mass = [&](double tau) {
    return 1.0 - (v.array() - tau).max(0.0).sum();
  };
  const double tau = bisect(mass, v.minCoeff() - 1.0, v.maxCoeff());
  return (v.array() - tau).max(0.0).matrix();
}

// argmin over a dense grid of the simplex (dimension 2 or 3) of
// <p, y> + KL(y || x). Returns the best grid point.
inline Vec entropy_step_grid(const Vec& x, const Vec& p, int steps) {
  auto obj = [&](const Vec& y) {
    double s = p.dot(y);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) > 0) s += y(i) * std::log(y(i) / x(i));
    }
    return s;
  };
  Vec best;
  double bestv = std::numeric_limits<double>::infinity();
  const double h = 1.0 / steps;
  if (x.size() == 2) {
    for (int i = 0; i <= steps; ++i) {
      Vec y(2);
      y << i * h, 1.0 - i * h;
      const double v = obj(y);
      if (v < bestv) bestv = v, best = y;
    }
  } else {
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; i + j <= steps; ++j) {
        Vec y(3);
        y << i * h, j * h, std::max(0.0, 1.0 - (i + j) * h);
        const double v = obj(y);
        if (v < bestv) bestv = v, best = y;
      }
    }
  }
  return best;
}

// Scalar mirror descent on [lo, hi] with Euclidean prox: the recursion is a
// clipped gradient step. Returns the uniform average of x^0..x^{N-1}.
inline double clipped_md_average(const std::function<double(double)>& g,
                                 double x0, double h, long N, double lo,
                                 double hi) {
  double x = x0;
  long double sum = 0;
  for (long k = 0; k < N; ++k) {
    sum += x;
    x = std::clamp(x - h * g(x), lo, hi);
  }
  return static_cast<double>(sum / N);
}

// Saddle point of mu_x/2 |x-a|^2 + x^T B y - mu_y/2 |y-b|^2 by eliminating x
// (Schur complement in y, Cholesky solve).
inline std::pair<Vec, Vec> quadratic_saddle_point(double mu_x, double mu_y,
                                                  const Mat& B, const Vec& a,
                                                  const Vec& b) {
  const Mat S = B.transpose() * B / mu_x +
                mu_y * Mat::Identity(B.cols(), B.cols());
  const Vec y = S.llt().solve(B.transpose() * a + mu_y * b);
  const Vec x = a - B * y / mu_x;
  return {x, y};
}

// argmax_y of the same quadratic for fixed x (unconstrained).
inline Vec quadratic_best_response(double mu_y, const Mat& B, const Vec& b,
                                   const Vec& x) {
  return b + B.transpose() * x / mu_y;
}

// max over a dense 1-D grid of f on [lo, hi].
inline double grid_max(const std::function<double(double)>& f, double lo,
                       double hi, int points) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= points; ++i) {
    best = std::max(best, f(lo + (hi - lo) * i / points));
  }
  return best;
}

// Smoothness of an inexact model, written with long double.
inline double model_L(double Lt, double nut, double d0) {
  const long double e = (1.0L - nut) / (1.0L + nut);
  return static_cast<double>(
      Lt * std::pow((long double)Lt / (2.0L * d0) * e, e));
}

inline double holder_L(double Lxx, double Lxy, double muy, double D,
                       double nu) {
  const long double a = std::pow(2.0L * Lxy / muy, nu / (2.0L - nu));
  const long double b =
      D == 0.0 ? (nu == 0.0 || nu == 1.0 ? 1.0L : 0.0L)
               : std::pow((long double)D, (nu - nu * nu) / (2.0L - nu));
  return static_cast<double>(Lxy * a + Lxx * b);
}

}  // namespace oracle
