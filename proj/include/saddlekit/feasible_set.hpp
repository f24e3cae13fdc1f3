#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saddlekit/rng.hpp"
#include "saddlekit/types.hpp"

namespace saddlekit {

enum class SetKind {
  kBall,
  kBox,
  kNonnegativeOrthant,
  kSimplex,
  kNonnegativeBall,  // {x >= 0, |x|_2 <= r}
  kProduct,
  kFullSpace,
};

// A closed convex set with the handful of exact primitives the solvers need:
// membership, Euclidean projection, linear maximization and sampling.
// Immutable after construction; copies are cheap for the simple kinds.
class FeasibleSet {
 public:
  static FeasibleSet ball(Vector center, double radius);
  static FeasibleSet ball(int dim, double radius);
  static FeasibleSet box(Vector lo, Vector hi);
  static FeasibleSet box(int dim, double lo, double hi);
  static FeasibleSet nonnegative_orthant(int dim);
  static FeasibleSet simplex(int dim);
  static FeasibleSet nonnegative_ball(int dim, double radius);
  static FeasibleSet product(std::vector<FeasibleSet> parts);
  static FeasibleSet full_space(int dim);

  SetKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool bounded() const;

  // Declared upper bound on |x - y|_2 over the set; empty when unbounded.
  // Product sets compose as the Euclidean norm of the part diameters.
  std::optional<double> diameter() const;

  bool contains(const Vector& x, double tol = 1e-9) const;

  // Euclidean projection.
  Vector project(const Vector& v) const;

  // argmax_{z in set} <c, z>. Throws InvalidInputError on unbounded sets.
  Vector linear_maximizer(const Vector& c) const;

  // A point in the relative interior (center of ball, box midpoint,
  // barycenter of the simplex, ...).
  Vector interior_point() const;

  // A random point of the set. Unbounded kinds sample a bounded region
  // around the origin (unit cube for the orthant, [-1, 1]^n otherwise).
  Vector sample(rng::Engine& g) const;

  // Parameters; meaningful only for the matching kinds.
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  const Vector& lower() const { return lo_; }
  const Vector& upper() const { return hi_; }
  const std::vector<FeasibleSet>& parts() const { return parts_; }
  // Offset of part i inside the stacked product vector.
  int part_offset(std::size_t i) const { return offsets_.at(i); }

  // Identifier in the config grammar, e.g. "ball:1", "box:-1:1".
  std::string id() const;

 private:
  FeasibleSet() = default;

  SetKind kind_ = SetKind::kFullSpace;
  int dim_ = 0;
  Vector center_;
  double radius_ = 0.0;
  Vector lo_, hi_;
  std::vector<FeasibleSet> parts_;
  std::vector<int> offsets_;
};

// Parses a set identifier:
//   "full", "orthant", "simplex", "ball:r", "nonneg-ball:r", "box:lo:hi",
//   "product:<id>@<dim>+<id>@<dim>+..."
// Throws InvalidInputError for malformed ids.
FeasibleSet parse_set(std::string_view id, int dim);

// Euclidean projection onto the probability simplex (sort based).
Vector project_simplex(const Vector& v);

}  // namespace saddlekit
