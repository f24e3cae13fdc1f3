#include "saddlekit/rng.hpp"

#include <cmath>
#include <numbers>

namespace saddlekit::rng {

double standard_normal(Engine& g) {
  // Box-Muller, cosine branch only: two uniforms per draw, no cached state.
  const double u1 = uniform_open01(g);
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double exponential(Engine& g) { return -std::log1p(-uniform01(g)); }

double gumbel(Engine& g, double location, double scale) {
  return location - scale * std::log(-std::log(uniform_open01(g)));
}

double inverse_gaussian(Engine& g, double mean, double shape) {
  // Michael, Schucany and Haas (1976).
  const double v = standard_normal(g);
  const double y = v * v;
  const double mu = mean;
  const double x = mu + mu * mu * y / (2.0 * shape) -
                   mu / (2.0 * shape) *
                       std::sqrt(4.0 * mu * shape * y + mu * mu * y * y);
  const double z = uniform01(g);
  return z <= mu / (mu + x) ? x : mu * mu / x;
}

long discrete_uniform(Engine& g, long lo, long hi_exclusive) {
  const double span = static_cast<double>(hi_exclusive - lo);
  return lo + static_cast<long>(std::floor(span * uniform01(g)));
}

}  // namespace saddlekit::rng
