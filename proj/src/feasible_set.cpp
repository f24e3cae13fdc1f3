#include "saddlekit/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "saddlekit/errors.hpp"

namespace saddlekit {
namespace {

void require_dim(int dim) {
  if (dim <= 0) throw InvalidInputError("set dimension must be positive");
}

void require_size(const FeasibleSet& set, const Vector& x) {
  if (x.size() != set.dim()) {
    std::ostringstream os;
    os << "point of size " << x.size() << " does not match set dimension "
       << set.dim();
    throw InvalidInputError(os.str());
  }
}

double parse_double(std::string_view s) {
  // std::from_chars for double is not available on every libstdc++ we target.
  std::string tmp(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tmp, &used);
  } catch (const std::exception&) {
    throw InvalidInputError("malformed number '" + tmp + "' in set id");
  }
  if (used != tmp.size()) {
    throw InvalidInputError("malformed number '" + tmp + "' in set id");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  require_dim(static_cast<int>(center.size()));
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidInputError("ball radius must be positive and finite");
  }
  FeasibleSet s;
  s.kind_ = SetKind::kBall;
  s.dim_ = static_cast<int>(center.size());
  s.center_ = std::move(center);
  s.radius_ = radius;
  return s;
}

FeasibleSet FeasibleSet::ball(int dim, double radius) {
  require_dim(dim);
  return ball(Vector::Zero(dim), radius);
}

FeasibleSet FeasibleSet::box(Vector lo, Vector hi) {
  require_dim(static_cast<int>(lo.size()));
  if (lo.size() != hi.size()) {
    throw InvalidInputError("box bounds have different sizes");
  }
  if ((lo.array() > hi.array()).any() || !lo.allFinite() || !hi.allFinite()) {
    throw InvalidInputError("box bounds must be finite with lo <= hi");
  }
  FeasibleSet s;
  s.kind_ = SetKind::kBox;
  s.dim_ = static_cast<int>(lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

FeasibleSet FeasibleSet::box(int dim, double lo, double hi) {
  require_dim(dim);
  return box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

FeasibleSet FeasibleSet::nonnegative_orthant(int dim) {
  require_dim(dim);
  FeasibleSet s;
  s.kind_ = SetKind::kNonnegativeOrthant;
  s.dim_ = dim;
  return s;
}

FeasibleSet FeasibleSet::simplex(int dim) {
  require_dim(dim);
  FeasibleSet s;
  s.kind_ = SetKind::kSimplex;
  s.dim_ = dim;
  return s;
}

FeasibleSet FeasibleSet::nonnegative_ball(int dim, double radius) {
  require_dim(dim);
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidInputError("ball radius must be positive and finite");
  }
  FeasibleSet s;
  s.kind_ = SetKind::kNonnegativeBall;
  s.dim_ = dim;
  s.radius_ = radius;
  return s;
}

FeasibleSet FeasibleSet::product(std::vector<FeasibleSet> parts) {
  if (parts.empty()) throw InvalidInputError("product of zero sets");
  FeasibleSet s;
  s.kind_ = SetKind::kProduct;
  int offset = 0;
  for (const auto& p : parts) {
    s.offsets_.push_back(offset);
    offset += p.dim();
  }
  s.dim_ = offset;
  s.parts_ = std::move(parts);
  return s;
}

FeasibleSet FeasibleSet::full_space(int dim) {
  require_dim(dim);
  FeasibleSet s;
  s.kind_ = SetKind::kFullSpace;
  s.dim_ = dim;
  return s;
}

bool FeasibleSet::bounded() const {
  switch (kind_) {
    case SetKind::kBall:
    case SetKind::kBox:
    case SetKind::kSimplex:
    case SetKind::kNonnegativeBall:
      return true;
    case SetKind::kProduct:
      return std::all_of(parts_.begin(), parts_.end(),
                         [](const FeasibleSet& p) { return p.bounded(); });
    case SetKind::kNonnegativeOrthant:
    case SetKind::kFullSpace:
      return false;
  }
  return false;
}

std::optional<double> FeasibleSet::diameter() const {
  switch (kind_) {
    case SetKind::kBall:
      return 2.0 * radius_;
    case SetKind::kBox:
      return (hi_ - lo_).norm();
    case SetKind::kSimplex:
      return dim_ == 1 ? 0.0 : std::sqrt(2.0);
    case SetKind::kNonnegativeBall:
      // |a - b|^2 = |a|^2 + |b|^2 - 2<a, b> <= 2 r^2 since <a, b> >= 0.
      return dim_ == 1 ? radius_ : std::sqrt(2.0) * radius_;
    case SetKind::kProduct: {
      double sq = 0.0;
      for (const auto& p : parts_) {
        const auto d = p.diameter();
        if (!d) return std::nullopt;
        sq += *d * *d;
      }
      return std::sqrt(sq);
    }
    case SetKind::kNonnegativeOrthant:
    case SetKind::kFullSpace:
      return std::nullopt;
  }
  return std::nullopt;
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim_ || !x.allFinite()) return false;
  switch (kind_) {
    case SetKind::kBall:
      return (x - center_).norm() <= radius_ + tol;
    case SetKind::kBox:
      return (x.array() >= lo_.array() - tol).all() &&
             (x.array() <= hi_.array() + tol).all();
    case SetKind::kNonnegativeOrthant:
      return (x.array() >= -tol).all();
    case SetKind::kSimplex:
      return (x.array() >= -tol).all() && std::abs(x.sum() - 1.0) <= tol;
    case SetKind::kNonnegativeBall:
      return (x.array() >= -tol).all() && x.norm() <= radius_ + tol;
    case SetKind::kProduct:
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (!parts_[i].contains(x.segment(offsets_[i], parts_[i].dim()), tol))
          return false;
      }
      return true;
    case SetKind::kFullSpace:
      return true;
  }
  return false;
}

Vector project_simplex(const Vector& v) {
  // Held, Wolfe and Crowder; see also Duchi et al. (2008).
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

Vector FeasibleSet::project(const Vector& v) const {
  require_size(*this, v);
  switch (kind_) {
    case SetKind::kBall: {
      const Vector diff = v - center_;
      const double n = diff.norm();
      if (n <= radius_) return v;
      return center_ + (radius_ / n) * diff;
    }
    case SetKind::kBox:
      return v.cwiseMax(lo_).cwiseMin(hi_);
    case SetKind::kNonnegativeOrthant:
      return v.cwiseMax(0.0);
    case SetKind::kSimplex:
      return project_simplex(v);
    case SetKind::kNonnegativeBall: {
      // The ball is centered at the origin, so projecting onto the cone
      // first and then radially onto the ball is exact.
      Vector y = v.cwiseMax(0.0);
      const double n = y.norm();
      if (n > radius_) y *= radius_ / n;
      return y;
    }
    case SetKind::kProduct: {
      Vector out(dim_);
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        out.segment(offsets_[i], parts_[i].dim()) =
            parts_[i].project(v.segment(offsets_[i], parts_[i].dim()));
      }
      return out;
    }
    case SetKind::kFullSpace:
      return v;
  }
  return v;
}

Vector FeasibleSet::linear_maximizer(const Vector& c) const {
  require_size(*this, c);
  switch (kind_) {
    case SetKind::kBall: {
      const double n = c.norm();
      if (n == 0.0) return center_;
      return center_ + (radius_ / n) * c;
    }
    case SetKind::kBox: {
      Vector out(dim_);
      for (int i = 0; i < dim_; ++i) out[i] = c[i] > 0.0 ? hi_[i] : lo_[i];
      return out;
    }
    case SetKind::kSimplex: {
      Eigen::Index best = 0;
      c.maxCoeff(&best);
      Vector out = Vector::Zero(dim_);
      out[best] = 1.0;
      return out;
    }
    case SetKind::kNonnegativeBall: {
      Vector out = c.cwiseMax(0.0);
      const double n = out.norm();
      if (n == 0.0) return Vector::Zero(dim_);
      return (radius_ / n) * out;
    }
    case SetKind::kProduct: {
      Vector out(dim_);
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        out.segment(offsets_[i], parts_[i].dim()) = parts_[i].linear_maximizer(
            c.segment(offsets_[i], parts_[i].dim()));
      }
      return out;
    }
    case SetKind::kNonnegativeOrthant:
    case SetKind::kFullSpace:
      break;
  }
  throw InvalidInputError("linear maximization over an unbounded set (" +
                          id() + ")");
}

Vector FeasibleSet::interior_point() const {
  switch (kind_) {
    case SetKind::kBall:
      return center_;
    case SetKind::kBox:
      return 0.5 * (lo_ + hi_);
    case SetKind::kNonnegativeOrthant:
      return Vector::Ones(dim_);
    case SetKind::kSimplex:
      return Vector::Constant(dim_, 1.0 / dim_);
    case SetKind::kNonnegativeBall:
      return Vector::Constant(dim_, 0.5 * radius_ / std::sqrt(double(dim_)));
    case SetKind::kProduct: {
      Vector out(dim_);
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        out.segment(offsets_[i], parts_[i].dim()) = parts_[i].interior_point();
      }
      return out;
    }
    case SetKind::kFullSpace:
      return Vector::Zero(dim_);
  }
  return Vector::Zero(dim_);
}

Vector FeasibleSet::sample(rng::Engine& g) const {
  Vector out(dim_);
  switch (kind_) {
    case SetKind::kBall:
    case SetKind::kNonnegativeBall: {
      for (int i = 0; i < dim_; ++i) out[i] = rng::standard_normal(g);
      const double n = out.norm();
      const double r =
          radius_ * std::pow(rng::uniform01(g), 1.0 / static_cast<double>(dim_));
      out *= (n > 0.0 ? r / n : 0.0);
      if (kind_ == SetKind::kNonnegativeBall) return out.cwiseAbs();
      return center_ + out;
    }
    case SetKind::kBox:
      for (int i = 0; i < dim_; ++i) {
        out[i] = lo_[i] + (hi_[i] - lo_[i]) * rng::uniform01(g);
      }
      return out;
    case SetKind::kNonnegativeOrthant:
      for (int i = 0; i < dim_; ++i) out[i] = rng::uniform01(g);
      return out;
    case SetKind::kSimplex: {
      // Dirichlet(1, ..., 1) via normalized exponentials.
      for (int i = 0; i < dim_; ++i) out[i] = rng::exponential(g);
      return out / out.sum();
    }
    case SetKind::kProduct:
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        out.segment(offsets_[i], parts_[i].dim()) = parts_[i].sample(g);
      }
      return out;
    case SetKind::kFullSpace:
      for (int i = 0; i < dim_; ++i) out[i] = 2.0 * rng::uniform01(g) - 1.0;
      return out;
  }
  return out;
}

std::string FeasibleSet::id() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case SetKind::kBall:
      os << "ball:" << radius_;
      if (!center_.isZero(0.0)) os << "(off-center)";
      break;
    case SetKind::kBox:
      if (lo_.isConstant(lo_[0], 0.0) && hi_.isConstant(hi_[0], 0.0)) {
        os << "box:" << lo_[0] << ":" << hi_[0];
      } else {
        os << "box(custom)";
      }
      break;
    case SetKind::kNonnegativeOrthant:
      os << "orthant";
      break;
    case SetKind::kSimplex:
      os << "simplex";
      break;
    case SetKind::kNonnegativeBall:
      os << "nonneg-ball:" << radius_;
      break;
    case SetKind::kProduct:
      os << "product:";
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << "+";
        os << parts_[i].id() << "@" << parts_[i].dim();
      }
      break;
    case SetKind::kFullSpace:
      os << "full";
      break;
  }
  return os.str();
}

FeasibleSet parse_set(std::string_view id, int dim) {
  if (id.rfind("product:", 0) == 0) {
    std::vector<FeasibleSet> parts;
    int total = 0;
    for (auto piece : split(id.substr(8), '+')) {
      const auto at = piece.rfind('@');
      if (at == std::string_view::npos) {
        throw InvalidInputError("product part '" + std::string(piece) +
                                "' lacks an @dim suffix");
      }
      const double d = parse_double(piece.substr(at + 1));
      if (d != std::floor(d) || d <= 0) {
        throw InvalidInputError("bad part dimension in '" + std::string(piece) +
                                "'");
      }
      parts.push_back(parse_set(piece.substr(0, at), static_cast<int>(d)));
      total += static_cast<int>(d);
    }
    if (dim > 0 && total != dim) {
      throw InvalidInputError("product part dimensions sum to " +
                              std::to_string(total) + ", expected " +
                              std::to_string(dim));
    }
    return FeasibleSet::product(std::move(parts));
  }
  const auto fields = split(id, ':');
  const std::string_view name = fields[0];
  auto arity = [&](std::size_t n) {
    if (fields.size() != n + 1) {
      throw InvalidInputError("set id '" + std::string(id) + "' expects " +
                              std::to_string(n) + " parameter(s)");
    }
  };
  if (name == "full") {
    arity(0);
    return FeasibleSet::full_space(dim);
  }
  if (name == "orthant") {
    arity(0);
    return FeasibleSet::nonnegative_orthant(dim);
  }
  if (name == "simplex") {
    arity(0);
    return FeasibleSet::simplex(dim);
  }
  if (name == "ball") {
    arity(1);
    return FeasibleSet::ball(dim, parse_double(fields[1]));
  }
  if (name == "nonneg-ball") {
    arity(1);
    return FeasibleSet::nonnegative_ball(dim, parse_double(fields[1]));
  }
  if (name == "box") {
    arity(2);
    return FeasibleSet::box(dim, parse_double(fields[1]),
                            parse_double(fields[2]));
  }
  throw InvalidInputError("unknown set id '" + std::string(id) + "'");
}

}  // namespace saddlekit
