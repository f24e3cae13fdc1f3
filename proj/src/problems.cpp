#include "saddlekit/problems.hpp"

#include <algorithm>
#include <cmath>

#include "saddlekit/errors.hpp"
#include "saddlekit/rng.hpp"

namespace saddlekit {
namespace {

double spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

double min_symmetric_eigenvalue(const Matrix& A) {
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Vector random_in_ball(rng::Engine& g, int dim, double radius) {
  return FeasibleSet::ball(dim, radius).sample(g);
}

Matrix random_gaussian(rng::Engine& g, int rows, int cols) {
  Matrix M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = rng::standard_normal(g);
  return M;
}

// Constants shared by every affine operator posed on an origin ball.
OperatorConstants affine_constants(const Matrix& A, const Vector& b,
                                   double radius) {
  OperatorConstants c;
  const double normA = spectral_norm(A);
  const double lam = min_symmetric_eigenvalue(A);
  c.mu = std::max(0.0, lam);
  // (y-x)^T A (y-x) >= lam |y-x|^2 >= lam (2r)^2 when lam < 0.
  c.sigma = lam < 0.0 ? -lam * 4.0 * radius * radius : 0.0;
  // |A x + b| <= |A| r + |b| on the ball; Euclidean V makes this M.
  c.M = normA * radius + b.norm();
  c.holder[1.0] = normA;
  return c;
}

}  // namespace

double SaddleProblem::D() const {
  const auto d = Q_x.diameter();
  if (!d) throw InvalidInputError("Q_x must be bounded");
  return *d;
}

double SaddleProblem::R() const {
  const auto d = Q_y.diameter();
  if (!d) throw InvalidInputError("Q_y must be bounded");
  return *d;
}

void SaddleProblem::validate() const {
  if (nx <= 0 || ny <= 0) throw InvalidInputError("saddle dims must be > 0");
  if (Q_x.dim() != nx || Q_y.dim() != ny) {
    throw InvalidInputError("saddle feasible sets do not match nx, ny");
  }
  if (!f || !grad_x || !grad_y) {
    throw InvalidInputError("saddle problem is missing an oracle");
  }
  if (mu_x < 0 || mu_y < 0 || L_xx < 0 || L_xy < 0 || L_yy < 0) {
    throw InvalidInputError("saddle constants must be nonnegative");
  }
  if (!(nu >= 0.0 && nu <= 1.0)) {
    throw InvalidInputError("Hoelder exponent must lie in [0, 1]");
  }
}

VIInstance saddle_to_vi(const SaddleProblem& problem) {
  problem.validate();
  VIInstance out{VIOperator{}, FeasibleSet::product({problem.Q_x, problem.Q_y}),
                 std::nullopt};
  const int nx = problem.nx;
  const int ny = problem.ny;
  auto gx = problem.grad_x;
  auto gy = problem.grad_y;
  out.op.dim = nx + ny;
  out.op.name = "saddle(" + problem.name + ")";
  out.op.eval = [gx, gy, nx, ny](const Vector& z) {
    const Vector x = z.head(nx);
    const Vector y = z.tail(ny);
    Vector g(nx + ny);
    g.head(nx) = gx(x, y);
    g.tail(ny) = -gy(x, y);
    return g;
  };
  out.op.constants.mu = std::min(problem.mu_x, problem.mu_y);
  if (problem.nu == 1.0) {
    out.op.constants.holder[1.0] =
        std::max(problem.L_xx, problem.L_yy) + problem.L_xy;
  }
  if (problem.operator_affine) {
    out.op.affine = problem.operator_affine;
    const auto& aff = *problem.operator_affine;
    const double diam = *out.set.diameter();
    const Vector g0 = aff.A * out.set.interior_point() + aff.b;
    out.op.constants.M = spectral_norm(aff.A) * diam + g0.norm();
    const double lam = min_symmetric_eigenvalue(aff.A);
    if (lam < 0.0) out.op.constants.sigma = -lam * diam * diam;
  }
  return out;
}

VIInstance affine_vi(const Matrix& A, const Vector& solution, double radius) {
  if (A.rows() != A.cols() || A.rows() != solution.size()) {
    throw InvalidInputError("affine_vi: A must be square and match solution");
  }
  const int n = static_cast<int>(A.rows());
  VIInstance out{VIOperator{}, FeasibleSet::ball(n, radius), solution};
  const Vector b = -A * solution;
  out.op.dim = n;
  out.op.name = "affine-vi";
  out.op.eval = [A, b](const Vector& x) -> Vector { return A * x + b; };
  out.op.constants = affine_constants(A, b, radius);
  out.op.affine = AffineForm{A, b};
  return out;
}

VIInstance random_affine_vi(int dim, double mu, double skew_scale,
                            double radius, std::uint64_t seed) {
  if (dim <= 0) throw InvalidInputError("dim must be positive");
  rng::Engine g(seed);
  Matrix A = mu * Matrix::Identity(dim, dim);
  if (dim > 1 && skew_scale != 0.0) {
    const Matrix G = random_gaussian(g, dim, dim);
    const Matrix S = G - G.transpose();
    A += skew_scale * S / spectral_norm(S);
  }
  const Vector sol = random_in_ball(g, dim, 0.5 * radius);
  return affine_vi(A, sol, radius);
}

VIInstance skew_vi(double radius) {
  Matrix A(2, 2);
  A << 0.0, 1.0, -1.0, 0.0;
  VIInstance out = affine_vi(A, Vector::Zero(2), radius);
  out.op.name = "skew";
  return out;
}

SaddleProblem bilinear_saddle(const Matrix& B, const Vector& x_star,
                              const Vector& y_star, double rx, double ry) {
  if (B.rows() != x_star.size() || B.cols() != y_star.size()) {
    throw InvalidInputError("bilinear_saddle: B does not match x*, y*");
  }
  SaddleProblem p;
  p.nx = static_cast<int>(x_star.size());
  p.ny = static_cast<int>(y_star.size());
  const Vector c = -B * y_star;
  const Vector e = -B.transpose() * x_star;
  p.f = [B, c, e](const Vector& x, const Vector& y) {
    return x.dot(B * y) + c.dot(x) + e.dot(y);
  };
  p.grad_x = [B, c](const Vector&, const Vector& y) -> Vector {
    return B * y + c;
  };
  p.grad_y = [B, e](const Vector& x, const Vector&) -> Vector {
    return B.transpose() * x + e;
  };
  p.L_xy = spectral_norm(B);
  p.nu = 1.0;
  p.Q_x = FeasibleSet::ball(p.nx, rx);
  p.Q_y = FeasibleSet::ball(p.ny, ry);
  Matrix A = Matrix::Zero(p.nx + p.ny, p.nx + p.ny);
  A.topRightCorner(p.nx, p.ny) = B;
  A.bottomLeftCorner(p.ny, p.nx) = -B.transpose();
  Vector b(p.nx + p.ny);
  b << c, -e;
  p.operator_affine = AffineForm{A, b};
  p.name = "bilinear";
  return p;
}

SaddleProblem quadratic_saddle(double mu_x, double mu_y, const Matrix& B,
                               const Vector& a, const Vector& b, double rx,
                               double ry) {
  if (B.rows() != a.size() || B.cols() != b.size()) {
    throw InvalidInputError("quadratic_saddle: B does not match a, b");
  }
  if (!(mu_x > 0.0) || !(mu_y > 0.0)) {
    throw InvalidInputError("quadratic_saddle needs mu_x, mu_y > 0");
  }
  SaddleProblem p;
  p.nx = static_cast<int>(a.size());
  p.ny = static_cast<int>(b.size());
  p.f = [=](const Vector& x, const Vector& y) {
    return 0.5 * mu_x * (x - a).squaredNorm() + x.dot(B * y) -
           0.5 * mu_y * (y - b).squaredNorm();
  };
  p.grad_x = [=](const Vector& x, const Vector& y) -> Vector {
    return mu_x * (x - a) + B * y;
  };
  p.grad_y = [=](const Vector& x, const Vector& y) -> Vector {
    return B.transpose() * x - mu_y * (y - b);
  };
  p.mu_x = mu_x;
  p.mu_y = mu_y;
  p.L_xx = mu_x;
  p.L_xy = spectral_norm(B);
  p.L_yy = mu_y;
  p.nu = 1.0;
  p.Q_x = FeasibleSet::ball(p.nx, rx);
  p.Q_y = FeasibleSet::ball(p.ny, ry);
  const int n = p.nx + p.ny;
  Matrix A(n, n);
  A.topLeftCorner(p.nx, p.nx) = mu_x * Matrix::Identity(p.nx, p.nx);
  A.topRightCorner(p.nx, p.ny) = B;
  A.bottomLeftCorner(p.ny, p.nx) = -B.transpose();
  A.bottomRightCorner(p.ny, p.ny) = mu_y * Matrix::Identity(p.ny, p.ny);
  Vector off(n);
  off << -mu_x * a, -mu_y * b;
  p.operator_affine = AffineForm{A, off};
  p.name = "quadratic-saddle";
  return p;
}

SaddleProblem random_quadratic_saddle(int nx, int ny, double mu_x, double mu_y,
                                      double coupling, double radius,
                                      std::uint64_t seed) {
  if (nx <= 0 || ny <= 0) throw InvalidInputError("dims must be positive");
  rng::Engine g(seed);
  Matrix B = random_gaussian(g, nx, ny);
  B *= coupling / spectral_norm(B);
  const Vector a = random_in_ball(g, nx, 0.25 * radius);
  const Vector b = random_in_ball(g, ny, 0.25 * radius);
  return quadratic_saddle(mu_x, mu_y, B, a, b, radius, radius);
}

std::pair<Vector, Vector> quadratic_saddle_solution(double mu_x, double mu_y,
                                                    const Matrix& B,
                                                    const Vector& a,
                                                    const Vector& b) {
  // mu_x (x - a) + B y = 0 and B^T x - mu_y (y - b) = 0.
  const auto nx = a.size();
  const auto ny = b.size();
  Matrix K(nx + ny, nx + ny);
  K.topLeftCorner(nx, nx) = mu_x * Matrix::Identity(nx, nx);
  K.topRightCorner(nx, ny) = B;
  K.bottomLeftCorner(ny, nx) = B.transpose();
  K.bottomRightCorner(ny, ny) = -mu_y * Matrix::Identity(ny, ny);
  Vector rhs(nx + ny);
  rhs << mu_x * a, -mu_y * b;
  const Vector z = K.partialPivLu().solve(rhs);
  return {z.head(nx), z.tail(ny)};
}

}  // namespace saddlekit
