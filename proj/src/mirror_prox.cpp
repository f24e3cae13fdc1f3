#include "saddlekit/mirror_prox.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "saddlekit/errors.hpp"

namespace saddlekit {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Vector checked(const Vector& g, long k) {
  if (!g.allFinite()) {
    throw NumericalError("ump: operator returned a non-finite value", g.norm(),
                         k);
  }
  return g;
}

}  // namespace

SolveReport ump_solve(const VIOperator& op, const ProxSetup& setup,
                      const FeasibleSet& set, const UMPConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw InvalidInputError("ump: epsilon must be > 0");
  if (!(cfg.L0 > 0.0)) throw InvalidInputError("ump: L0 must be > 0");
  const double delta = cfg.delta.value_or(0.5 * cfg.epsilon);
  if (!(delta >= 0.0)) throw InvalidInputError("ump: delta must be >= 0");
  if (op.dim != set.dim()) throw InvalidInputError("ump: dimension mismatch");
  const StopRule& stop = cfg.stop;
  if (stop.max_iterations < 1) {
    throw InvalidInputError("ump: iteration limit must be >= 1");
  }
  if (stop.kind == StopRule::Kind::kInverseMSum && !(stop.threshold > 0.0)) {
    throw InvalidInputError("ump: inverse-M-sum threshold must be > 0");
  }

  const auto t0 = std::chrono::steady_clock::now();
  Vector z;
  if (cfg.z0) {
    if (!set.contains(*cfg.z0, 1e-9)) {
      throw InvalidInputError("ump: z0 is not in the feasible set");
    }
    z = *cfg.z0;
  } else {
    z = prox_center(setup, set,
                    setup.scaled() ? setup.center() : set.interior_point());
  }

  SolveReport rep;
  rep.solver = "ump";
  const double slack = 0.5 * cfg.epsilon + delta;
  double L = cfg.L0;
  double inv_sum = 0.0;
  Vector weighted = Vector::Zero(set.dim());

  for (long k = 0;; ++k) {
    if (k >= stop.max_iterations) {
      if (stop.kind == StopRule::Kind::kMaxIterations) break;
      throw DivergenceError(
          "ump: iteration cap reached before the inverse-M-sum threshold", L,
          k);
    }
    const Vector gz = checked(op.evaluate(z, delta), k);
    rep.oracle_calls += 1;
    double M = 0.5 * L;
    Vector w, z_next;
    int trials = 0;
    for (;;) {
      if (trials >= cfg.max_doublings) {
        throw DivergenceError("ump: line search exceeded the doubling cap", M,
                              k);
      }
      M *= 2.0;
      ++trials;
      w = mirror_step(setup, set, z, gz / M);
      const Vector gw = checked(op.evaluate(w, delta), k);
      rep.oracle_calls += 1;
      z_next = mirror_step(setup, set, z, gw / M);
      const double lhs = (gw - gz).dot(w - z_next);
      const double a = setup.norm(w - z);
      const double b = setup.norm(w - z_next);
      const double rhs = 0.5 * M * (a * a + b * b) + slack;
      if (lhs <= rhs) break;
    }
    inv_sum += 1.0 / M;
    weighted += w / M;

    UMPIterRecord rec;
    rec.k = k;
    rec.L_k = L;
    rec.M_k = M;
    rec.trials = trials;
    rec.inv_M_sum = inv_sum;
    if (cfg.record_points) {
      rec.w = w;
      rec.z_next = z_next;
    }
    rep.ump_trace.push_back(std::move(rec));

    L = 0.5 * M;
    z = std::move(z_next);
    rep.iterations = k + 1;
    if (stop.kind == StopRule::Kind::kInverseMSum &&
        inv_sum >= stop.threshold) {
      break;
    }
  }

  rep.x = weighted / inv_sum;
  rep.metrics = {{"inv_M_sum", inv_sum},
                 {"L_final", L},
                 {"delta", delta},
                 {"epsilon", cfg.epsilon}};
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

double restart_radius_sq(double R0_sq, double epsilon, double mu, int p) {
  const double w = std::ldexp(1.0, -(p + 1));
  return R0_sq * w + 2.0 * (1.0 - w) * epsilon / (4.0 * mu);
}

int restart_count(double R0_sq, double epsilon) {
  const double bound = std::log2(2.0 * R0_sq / epsilon);
  int p = 0;
  do {
    ++p;
  } while (!(p > bound));
  return p;
}

SolveReport restarted_ump(const VIOperator& op, const ProxSetup& setup,
                          const FeasibleSet& set, const RestartConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw InvalidInputError("rump: epsilon must be > 0");
  if (!(cfg.mu > 0.0)) throw InvalidInputError("rump: mu must be > 0");
  if (!(cfg.R0_sq > 0.0)) throw InvalidInputError("rump: R0_sq must be > 0");
  const double omega = cfg.omega.value_or(setup.omega());
  if (!(omega > 0.0)) throw InvalidInputError("rump: omega must be > 0");
  if (cfg.x0.size() != set.dim() || !set.contains(cfg.x0, 1e-9)) {
    throw InvalidInputError("rump: x0 is not in the feasible set");
  }

  const auto t0 = std::chrono::steady_clock::now();
  const int stages = restart_count(cfg.R0_sq, cfg.epsilon);
  SolveReport rep;
  rep.solver = "rump";
  Vector x = cfg.x0;
  double R_sq = cfg.R0_sq;
  double L = cfg.L0;

  for (int p = 0; p < stages; ++p) {
    UMPConfig inner;
    inner.epsilon = 0.5 * cfg.epsilon;
    inner.L0 = L;
    inner.delta = cfg.delta;
    inner.stop = StopRule::inverse_m_sum(omega / cfg.mu,
                                         cfg.max_inner_iterations);
    inner.max_doublings = cfg.max_doublings;
    inner.record_points = cfg.record_points;
    const ProxSetup stage_setup = scaled_prox(setup, x, std::sqrt(R_sq));
    SolveReport r;
    try {
      r = ump_solve(op, stage_setup, set, inner);
    } catch (const DivergenceError& e) {
      throw DivergenceError(
          std::string(e.what()) + " (restart " + std::to_string(p) + ")",
          e.last_M(), e.iteration());
    }
    x = r.x;
    R_sq = restart_radius_sq(cfg.R0_sq, cfg.epsilon, cfg.mu, p);
    L = r.metrics.at("L_final");
    rep.iterations += r.iterations;
    rep.oracle_calls += r.oracle_calls;
    for (auto& rec : r.ump_trace) rep.ump_trace.push_back(std::move(rec));
    rep.restarts.push_back(
        {p, r.iterations, r.metrics.at("inv_M_sum"), R_sq, x});
  }

  rep.x = x;
  rep.metrics = {{"restarts", static_cast<double>(stages)},
                 {"omega", omega},
                 {"mu", cfg.mu},
                 {"R0_sq", cfg.R0_sq},
                 {"epsilon", cfg.epsilon},
                 {"delta", cfg.delta},
                 {"inner_epsilon", 0.5 * cfg.epsilon}};
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

void write_trace_csv(std::ostream& os, const SolveReport& report) {
  os << "k,M_k,trials,inv_M_sum\n";
  const auto old = os.precision(17);
  for (const auto& r : report.ump_trace) {
    os << r.k << ',' << r.M_k << ',' << r.trials << ',' << r.inv_M_sum << '\n';
  }
  os.precision(old);
}

}  // namespace saddlekit
