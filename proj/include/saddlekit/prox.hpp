#pragma once

#include <string>
#include <string_view>

#include "saddlekit/feasible_set.hpp"
#include "saddlekit/types.hpp"

namespace saddlekit {

enum class ProxKind { kEuclidean, kEntropy };

// Norm the prox-function is 1-strongly convex against.
enum class NormTag { kL2, kL1 };

// A prox-function d, possibly rescaled as R^2 d((x - c) / R).
//
// Built-ins:
//   euclidean  d(x) = 1/2 |x|_2^2               (l2, Omega = 1)
//   entropy    d(x) = sum x_i ln x_i + ln n     (l1 on the simplex,
//                                                Omega = 2 ln n)
// The constant in the entropy makes d vanish at its minimizer over the
// simplex; constants never change Bregman divergences or mirror steps.
class ProxSetup {
 public:
  static ProxSetup euclidean();
  static ProxSetup entropy(int dim);

  ProxKind kind() const { return kind_; }
  NormTag norm_tag() const;
  // Omega with d(x) <= Omega / 2 on the unit ball of the declared norm.
  double omega() const { return omega_; }

  bool scaled() const { return center_.size() > 0; }
  // Empty when the setup is not scaled.
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }

  double value(const Vector& x) const;
  // Entropy coordinates below 1e-300 are clamped to that floor.
  Vector gradient(const Vector& x) const;

  double norm(const Vector& v) const;
  double dual_norm(const Vector& v) const;

  std::string id() const;

 private:
  friend ProxSetup scaled_prox(const ProxSetup&, const Vector&, double);

  ProxSetup(ProxKind kind, double omega, double offset)
      : kind_(kind), omega_(omega), offset_(offset) {}

  // (x - center) / radius, or x itself when unscaled.
  Vector local(const Vector& x) const;

  ProxKind kind_;
  double omega_;
  double offset_;
  Vector center_;
  double radius_ = 1.0;
};

inline constexpr double kEntropyFloor = 1e-300;

// V(y, x) = d(y) - d(x) - <grad d(x), y - x>, clamped at 0 against rounding.
// Entropy setups reject x with a nonpositive coordinate (in local
// coordinates) and y with a negative one.
double bregman(const ProxSetup& setup, const Vector& y, const Vector& x);

// Setup with prox-function R^2 d((x - center) / R). Scaling an already
// scaled setup composes the two maps.
ProxSetup scaled_prox(const ProxSetup& setup, const Vector& center,
                      double radius);

// argmin_{y in set} <p, y> + V(y, x).
//
// Closed forms: Euclidean on every set kind (projection of x - p); entropy
// on simplex, orthant and box, including scaled entropy. Entropy on a
// nonnegative ball goes through a projected-gradient loop (tolerance 1e-10,
// at most 1e4 iterations). Unsupported pairs throw CapabilityError; a
// stalled inner loop throws NumericalError carrying the residual.
Vector mirror_step(const ProxSetup& setup, const FeasibleSet& set,
                   const Vector& x, const Vector& p);

// argmin_{y in set} d(y), computed as a mirror step from `reference` with
// p = grad d(reference). `reference` must lie in the domain of d.
Vector prox_center(const ProxSetup& setup, const FeasibleSet& set,
                   const Vector& reference);

// "euclidean" or "entropy".
ProxSetup parse_prox(std::string_view id, int dim);

}  // namespace saddlekit
