#include "saddlekit/md_relative.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "saddlekit/errors.hpp"

namespace saddlekit {
namespace {

void validate(const MDConfig& cfg, const FeasibleSet& set, int op_dim) {
  if (!(cfg.epsilon > 0.0)) throw InvalidInputError("md: epsilon must be > 0");
  if (!(cfg.M > 0.0)) throw InvalidInputError("md: M must be > 0");
  if (!(cfg.R_sq >= 0.0)) throw InvalidInputError("md: R_sq must be >= 0");
  if (!(cfg.sigma >= 0.0)) throw InvalidInputError("md: sigma must be >= 0");
  if (cfg.x0.size() != set.dim() || op_dim != set.dim()) {
    throw InvalidInputError("md: dimension mismatch between x0, set, operator");
  }
  if (!set.contains(cfg.x0, 1e-9)) {
    throw InvalidInputError("md: x0 is not in the feasible set");
  }
}

std::string at_step(long k) {
  std::ostringstream os;
  os << "step " << k;
  return os.str();
}

}  // namespace

double md_step_size(const MDConfig& cfg) { return cfg.epsilon / (cfg.M * cfg.M); }

long md_iteration_count(const MDConfig& cfg) {
  const double n =
      std::ceil(2.0 * cfg.R_sq * cfg.M * cfg.M / (cfg.epsilon * cfg.epsilon));
  return std::max(1L, static_cast<long>(n));
}

SolveReport md_solve(const VIOperator& op, const ProxSetup& setup,
                     const FeasibleSet& set, const MDConfig& cfg) {
  validate(cfg, set, op.dim);
  const double planned =
      std::ceil(2.0 * cfg.R_sq * cfg.M * cfg.M / (cfg.epsilon * cfg.epsilon));
  if (planned > static_cast<double>(cfg.max_iterations)) {
    throw InvalidInputError("md: planned iteration count exceeds the cap");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const double h = md_step_size(cfg);
  const long N = md_iteration_count(cfg);

  SolveReport rep;
  rep.solver = "md-rb";
  rep.step_size = h;
  Vector x = cfg.x0;
  Vector sum = Vector::Zero(x.size());
  if (cfg.keep_iterates) rep.iterates.push_back(x);
  for (long k = 0; k < N; ++k) {
    const Vector g = op.eval(x);
    ++rep.oracle_calls;
    if (!g.allFinite()) {
      throw NumericalError("md: operator returned a non-finite value",
                           g.norm(), k);
    }
    sum += x;
    x = mirror_step(setup, set, x, h * g);
    if (!x.allFinite()) {
      throw NumericalError("md: mirror step produced a non-finite iterate",
                           0.0, k);
    }
    if (cfg.keep_iterates) rep.iterates.push_back(x);
  }
  rep.x = sum / static_cast<double>(N);
  rep.iterations = N;
  rep.metrics = {{"h", h},
                 {"N", static_cast<double>(N)},
                 {"R_sq", cfg.R_sq},
                 {"M", cfg.M},
                 {"epsilon", cfg.epsilon},
                 {"sigma", cfg.sigma}};
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

AuditResult md_descent_audit(const VIOperator& op, const ProxSetup& setup,
                             const SolveReport& report, const MDConfig& cfg,
                             const std::vector<Vector>& probes, double tol) {
  if (report.iterates.size() < 2) {
    throw InvalidInputError("md_descent_audit needs keep_iterates");
  }
  const double h = md_step_size(cfg);
  const double slack = 0.5 * h * h * cfg.M * cfg.M;
  AuditResult out;
  for (std::size_t k = 0; k + 1 < report.iterates.size(); ++k) {
    const Vector& xk = report.iterates[k];
    const Vector& xn = report.iterates[k + 1];
    const Vector g = op.eval(xk);
    for (const Vector& p : probes) {
      const double lhs = h * g.dot(xk - p);
      const double rhs =
          slack + bregman(setup, p, xk) - bregman(setup, p, xn) + tol;
      out.record(lhs - rhs, at_step(static_cast<long>(k)));
    }
  }
  return out;
}

AuditResult md_average_audit(const VIOperator& op, const ProxSetup& setup,
                             const SolveReport& report, const MDConfig& cfg,
                             const std::vector<Vector>& probes, double tol) {
  const double h = md_step_size(cfg);
  const double N = static_cast<double>(report.iterations);
  AuditResult out;
  for (const Vector& p : probes) {
    const double lhs = op.eval(p).dot(report.x - p);
    const double rhs = 0.5 * cfg.M * cfg.M * h +
                       bregman(setup, p, cfg.x0) / (N * h) + cfg.sigma + tol;
    out.record(lhs - rhs, "averaged bound");
  }
  return out;
}

}  // namespace saddlekit
