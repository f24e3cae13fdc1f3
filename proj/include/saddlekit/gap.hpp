#pragma once

#include <cstdint>
#include <string>

#include "saddlekit/feasible_set.hpp"
#include "saddlekit/problems.hpp"

namespace saddlekit {

enum class GapKind { kSaddle, kVIRestricted };

// A gap value together with how it was obtained.
//
// When `upper_bound` is true the true gap is at most `value`, provided the
// declared problem constants hold. Otherwise `value` is only a lower bound
// found by search (general nonlinear operators). `tolerance` is the width of
// the certificate: the true gap lies in [value - tolerance, value] for
// certified upper bounds.
struct GapCertificate {
  GapKind kind = GapKind::kSaddle;
  double value = 0.0;
  double tolerance = 0.0;
  std::string method;
  long oracle_calls = 0;
  bool upper_bound = false;
  bool certified = false;
};

// max_y f(x~, y) - min_x f(x, y~), each inner problem solved to tolerance
// `tol` by the accelerated inner solver. Budget exhaustion leaves
// `certified` false instead of throwing.
GapCertificate saddle_gap(const SaddleProblem& problem, const Vector& x_tilde,
                          const Vector& y_tilde, double tol,
                          int max_inner_iterations = 200000);

// Restricted (Minty) gap max_{x in set} <g(x), x~ - x> on a compact set.
//
// Affine operators with a monotone linear part are certified from above
// (accelerated ascent plus Frank-Wolfe bound, exact for constant g). Other
// operators get a lower bound from `budget` random samples refined by local
// ascent. Unbounded sets throw InvalidInputError.
GapCertificate vi_gap(const VIOperator& op, const FeasibleSet& set,
                      const Vector& x_tilde, long budget = 2000,
                      std::uint64_t seed = 7);

std::string to_string(GapKind kind);

}  // namespace saddlekit
