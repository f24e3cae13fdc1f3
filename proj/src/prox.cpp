#include "saddlekit/prox.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "saddlekit/errors.hpp"

namespace saddlekit {
namespace {

constexpr double kFallbackTolerance = 1e-10;
constexpr int kFallbackMaxIterations = 10000;

void require_same_size(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << what << ": size mismatch (" << a.size() << " vs " << b.size() << ")";
    throw InvalidInputError(os.str());
  }
}

Vector clamp_floor(const Vector& u) { return u.cwiseMax(kEntropyFloor); }

// Generalized KL divergence sum u ln(u/v) - u + v, v > 0, u >= 0.
double kl_terms(const Vector& u, const Vector& v) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double term =
        u[i] > 0.0 ? u[i] * std::log(u[i] / v[i]) - u[i] + v[i] : v[i];
    total += term;
  }
  return total;
}

// Entropy geometry restricted to one block: prox-function
// R^2 * sum u ln u with u = (y - c) / R.
struct EntropyBlock {
  const Vector& c;
  double R;

  Vector local(const Vector& y) const { return (y - c) / R; }
};

Vector entropy_simplex(const EntropyBlock& g, const Vector& x,
                       const Vector& p) {
  const double mass = 1.0 - g.c.sum();
  if ((g.c.array() < 0.0).any() || !(mass > 0.0)) {
    throw CapabilityError(
        "scaled entropy on the simplex needs a center c >= 0 with sum c < 1");
  }
  // log-weights ln u_x - p / R, normalized in log space to avoid overflow.
  const Vector u = clamp_floor(g.local(x));
  Vector lw = u.array().log() - p.array() / g.R;
  lw.array() -= lw.maxCoeff();
  Vector w = lw.array().exp();
  return g.c + (mass / w.sum()) * w;
}

Vector entropy_unconstrained(const EntropyBlock& g, const Vector& x,
                             const Vector& p) {
  const Vector u = clamp_floor(g.local(x));
  Vector y = g.c + g.R * (u.array() * (-p.array() / g.R).exp()).matrix();
  if (!y.allFinite()) {
    throw NumericalError("entropy mirror step overflowed", y.norm());
  }
  return y;
}

// Projected gradient for sets without a closed form (nonnegative ball).
Vector entropy_projected_gradient(const FeasibleSet& set, const EntropyBlock& g,
                                  const Vector& x, const Vector& p) {
  const Vector ux = clamp_floor(g.local(x));
  const Vector log_ux = ux.array().log();
  auto clamp_domain = [&](Vector y) {
    return y.cwiseMax(g.c + Vector::Constant(y.size(), kEntropyFloor * g.R));
  };
  auto objective = [&](const Vector& y) {
    return p.dot(y) + g.R * g.R * kl_terms(g.local(y), ux);
  };
  auto gradient = [&](const Vector& y) -> Vector {
    const Vector uy = clamp_floor(g.local(y));
    return p + g.R * (uy.array().log() - log_ux.array()).matrix();
  };

  Vector y = clamp_domain(set.project(x));
  double t = 1.0;
  double residual = 0.0;
  for (int it = 0; it < kFallbackMaxIterations; ++it) {
    const Vector grad = gradient(y);
    residual = (y - clamp_domain(set.project(y - grad))).norm();
    if (residual <= kFallbackTolerance) return y;
    const double fy = objective(y);
    while (true) {
      const Vector cand = clamp_domain(set.project(y - t * grad));
      const Vector step = cand - y;
      const double bound = fy + grad.dot(step) + step.squaredNorm() / (2.0 * t);
      if (objective(cand) <= bound + 1e-15 * std::abs(fy) || t < 1e-30) {
        y = cand;
        break;
      }
      t *= 0.5;
    }
    t *= 2.0;
  }
  throw NumericalError("mirror step inner loop did not converge", residual);
}

Vector entropy_step(const FeasibleSet& set, const Vector& x, const Vector& p,
                    const Vector& c, double R) {
  const EntropyBlock g{c, R};
  switch (set.kind()) {
    case SetKind::kSimplex:
      return entropy_simplex(g, x, p);
    case SetKind::kNonnegativeOrthant:
      return entropy_unconstrained(g, x, p).cwiseMax(0.0);
    case SetKind::kBox: {
      if ((set.upper().array() <= c.array()).any()) {
        throw CapabilityError("box lies outside the entropy domain");
      }
      // Separable and strictly convex per coordinate: clipping is exact.
      return entropy_unconstrained(g, x, p)
          .cwiseMax(set.lower())
          .cwiseMin(set.upper());
    }
    case SetKind::kNonnegativeBall:
      return entropy_projected_gradient(set, g, x, p);
    case SetKind::kProduct: {
      Vector out(set.dim());
      for (std::size_t i = 0; i < set.parts().size(); ++i) {
        const auto& part = set.parts()[i];
        const int off = set.part_offset(i);
        const Vector ci = c.segment(off, part.dim());
        out.segment(off, part.dim()) =
            entropy_step(part, x.segment(off, part.dim()),
                         p.segment(off, part.dim()), ci, R);
      }
      return out;
    }
    case SetKind::kBall:
    case SetKind::kFullSpace:
      break;
  }
  throw CapabilityError("entropy prox-function is not supported on set '" +
                        set.id() + "'");
}

}  // namespace

ProxSetup ProxSetup::euclidean() {
  return ProxSetup(ProxKind::kEuclidean, 1.0, 0.0);
}

ProxSetup ProxSetup::entropy(int dim) {
  if (dim <= 0) throw InvalidInputError("entropy setup needs dim > 0");
  const double log_n = std::log(static_cast<double>(dim));
  return ProxSetup(ProxKind::kEntropy, 2.0 * std::log(std::max(dim, 2)), log_n);
}

NormTag ProxSetup::norm_tag() const {
  return kind_ == ProxKind::kEuclidean ? NormTag::kL2 : NormTag::kL1;
}

Vector ProxSetup::local(const Vector& x) const {
  if (!scaled()) return x;
  require_same_size(x, center_, "prox-function");
  return (x - center_) / radius_;
}

double ProxSetup::value(const Vector& x) const {
  const Vector u = local(x);
  const double r2 = radius_ * radius_;
  if (kind_ == ProxKind::kEuclidean) return r2 * 0.5 * u.squaredNorm();
  if ((u.array() < 0.0).any()) {
    throw InvalidInputError("entropy prox-function at a negative coordinate");
  }
  double s = offset_;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] > 0.0) s += u[i] * std::log(u[i]);
  }
  return r2 * s;
}

Vector ProxSetup::gradient(const Vector& x) const {
  const Vector u = local(x);
  if (kind_ == ProxKind::kEuclidean) return radius_ * u;
  return radius_ * (clamp_floor(u).array().log() + 1.0).matrix();
}

double ProxSetup::norm(const Vector& v) const {
  return norm_tag() == NormTag::kL2 ? v.norm() : v.lpNorm<1>();
}

double ProxSetup::dual_norm(const Vector& v) const {
  return norm_tag() == NormTag::kL2 ? v.norm() : v.lpNorm<Eigen::Infinity>();
}

std::string ProxSetup::id() const {
  std::string s = kind_ == ProxKind::kEuclidean ? "euclidean" : "entropy";
  if (scaled()) {
    std::ostringstream os;
    os.precision(17);
    os << s << "(R=" << radius_ << ")";
    return os.str();
  }
  return s;
}

double bregman(const ProxSetup& setup, const Vector& y, const Vector& x) {
  require_same_size(y, x, "bregman");
  if (setup.kind() == ProxKind::kEuclidean) {
    return 0.5 * (y - x).squaredNorm();
  }
  const Vector ux = setup.scaled() ? Vector((x - setup.center()) / setup.radius())
                                   : x;
  const Vector uy = setup.scaled() ? Vector((y - setup.center()) / setup.radius())
                                   : y;
  if ((ux.array() <= 0.0).any()) {
    throw InvalidInputError(
        "entropy divergence needs a strictly positive second argument");
  }
  if ((uy.array() < 0.0).any()) {
    throw InvalidInputError(
        "entropy divergence needs a nonnegative first argument");
  }
  const double r2 = setup.radius() * setup.radius();
  return std::max(0.0, r2 * kl_terms(uy, ux));
}

ProxSetup scaled_prox(const ProxSetup& setup, const Vector& center,
                      double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidInputError("scaled_prox radius must be positive and finite");
  }
  if (!center.allFinite()) {
    throw InvalidInputError("scaled_prox center must be finite");
  }
  ProxSetup out = setup;
  // R'^2 [R^2 d(((x - c')/R' - c)/R)] = (R R')^2 d((x - (c' + R' c))/(R R')).
  if (setup.scaled()) {
    require_same_size(center, setup.center_, "scaled_prox");
    out.center_ = center + radius * setup.center_;
  } else {
    out.center_ = center;
  }
  out.radius_ = setup.radius_ * radius;
  return out;
}

Vector mirror_step(const ProxSetup& setup, const FeasibleSet& set,
                   const Vector& x, const Vector& p) {
  if (x.size() != set.dim() || p.size() != set.dim()) {
    throw InvalidInputError("mirror_step: point/dual vector size mismatch");
  }
  if (!p.allFinite()) {
    throw NumericalError("mirror_step: non-finite dual vector", p.norm());
  }
  if (setup.kind() == ProxKind::kEuclidean) {
    // R^2 * 1/2 |(y - x)/R|^2 = 1/2 |y - x|^2 whatever the scaling.
    return set.project(x - p);
  }
  const Vector c = setup.scaled() ? setup.center() : Vector::Zero(set.dim());
  return entropy_step(set, x, p, c, setup.radius());
}

Vector prox_center(const ProxSetup& setup, const FeasibleSet& set,
                   const Vector& reference) {
  return mirror_step(setup, set, reference, setup.gradient(reference));
}

ProxSetup parse_prox(std::string_view id, int dim) {
  if (id == "euclidean") return ProxSetup::euclidean();
  if (id == "entropy") return ProxSetup::entropy(dim);
  throw InvalidInputError("unknown prox id '" + std::string(id) + "'");
}

}  // namespace saddlekit
