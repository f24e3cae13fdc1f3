#include "saddlekit/bench_covering.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "saddlekit/errors.hpp"
#include "saddlekit/mirror_prox.hpp"
#include "saddlekit/prox.hpp"
#include "saddlekit/rng.hpp"

namespace saddlekit {
namespace {

void check_x(const CoveringInstance& inst, const Vector& x) {
  if (x.size() != inst.n) {
    throw InvalidInputError("covering: x has the wrong dimension");
  }
}

Vector constraint_values(const CoveringInstance& inst, const Vector& x) {
  return inst.alpha * x.cwiseAbs2() - Vector::Constant(inst.m, inst.offset);
}

double draw_alpha(int case_id, rng::Engine& g) {
  switch (case_id) {
    case 1:
      return rng::exponential(g);
    case 2:
      return rng::gumbel(g, 0.0, 1.0);
    case 3:
      return rng::inverse_gaussian(g, 1.0, 2.0);
    case 4:
      return static_cast<double>(rng::discrete_uniform(g, 1, 6));
    default:
      throw InvalidInputError("unknown covering case id " +
                              std::to_string(case_id) + " (expected 1-4)");
  }
}

}  // namespace

std::pair<double, int> covering_objective(const CoveringInstance& inst,
                                          const Vector& x) {
  check_x(inst, x);
  double best = -1.0;
  int idx = 0;
  for (int k = 0; k < inst.N; ++k) {
    const double v = (x - inst.A.row(k).transpose()).squaredNorm();
    if (v > best) {  // strict: ties keep the lowest index
      best = v;
      idx = k;
    }
  }
  return {best, idx};
}

double covering_constraint(const CoveringInstance& inst, int p,
                           const Vector& x) {
  check_x(inst, x);
  if (p < 0 || p >= inst.m) {
    throw InvalidInputError("covering: constraint index out of range");
  }
  return inst.alpha.row(p).dot(x.cwiseAbs2()) - inst.offset;
}

double covering_max_constraint(const CoveringInstance& inst, const Vector& x) {
  check_x(inst, x);
  return constraint_values(inst, x).maxCoeff();
}

double covering_lagrangian(const CoveringInstance& inst, const Vector& x,
                           const Vector& lambda) {
  check_x(inst, x);
  if (lambda.size() != inst.m) {
    throw InvalidInputError("covering: lambda has the wrong dimension");
  }
  if ((lambda.array() < 0.0).any()) {
    throw InvalidInputError("covering: multipliers must be nonnegative");
  }
  return covering_objective(inst, x).first +
         lambda.dot(constraint_values(inst, x)) - 0.5 * lambda.squaredNorm();
}

VIInstance covering_operator(const CoveringInstance& inst) {
  const int n = inst.n;
  const int m = inst.m;
  VIInstance out{VIOperator{},
                 FeasibleSet::product(
                     {FeasibleSet::ball(n, inst.x_radius),
                      FeasibleSet::nonnegative_ball(m, inst.lambda_cap)}),
                 std::nullopt};
  out.op.dim = n + m;
  out.op.name = "covering-ball(case " + std::to_string(inst.case_id) + ")";
  out.op.eval = [inst](const Vector& z) -> Vector {
    const Vector x = z.head(inst.n);
    const Vector lam = z.tail(inst.m);
    const int k = covering_objective(inst, x).second;
    Vector g(inst.n + inst.m);
    // sum_p lambda_p 2 alpha_p .* x = 2 x .* (alpha^T lambda)
    g.head(inst.n) = 2.0 * (x - inst.A.row(k).transpose()) +
                     2.0 * x.cwiseProduct(inst.alpha.transpose() * lam);
    g.tail(inst.m) = lam - constraint_values(inst, x);
    return g;
  };

  const double r = inst.x_radius;
  const double cap = inst.lambda_cap;
  Vector neg(m), amax(m);
  for (int p = 0; p < m; ++p) {
    neg[p] = std::max(0.0, -inst.alpha.row(p).minCoeff());
    amax[p] = inst.alpha.row(p).cwiseAbs().maxCoeff();
  }
  const double c = 2.0 - 2.0 * cap * neg.norm();
  if (c >= 0.0) {
    out.op.constants.mu = std::min(1.0, c);
  } else {
    out.op.constants.mu = 0.0;
    out.op.constants.sigma = -c * 4.0 * r * r;
  }
  double max_point = 0.0;
  for (int k = 0; k < inst.N; ++k) {
    max_point = std::max(max_point, inst.A.row(k).norm());
  }
  const double xb = 2.0 * (r + max_point) + 2.0 * r * cap * amax.norm();
  const Vector phi_abs = amax * r * r + Vector::Constant(m, inst.offset);
  const double lb = cap + phi_abs.norm();
  out.op.constants.M = std::sqrt(xb * xb + lb * lb);
  // nu = 0: bounded variation of the (sub)gradient.
  out.op.constants.holder[0.0] = 2.0 * out.op.constants.M.value();
  return out;
}

Vector covering_start(const CoveringInstance& inst) {
  const Vector z =
      Vector::Constant(inst.n + inst.m, 1.0 / std::sqrt(inst.n + inst.m));
  // Only matters when the x ball is smaller than the start point's norm.
  return covering_operator(inst).set.project(z);
}

CoveringInstance gen_case(int case_id, int n, int m, int N, std::uint64_t seed,
                          std::optional<double> x_radius, double lambda_cap,
                          double offset) {
  if (case_id < 1 || case_id > 4) {
    throw InvalidInputError("unknown covering case id " +
                            std::to_string(case_id) + " (expected 1-4)");
  }
  if (n <= 0 || m <= 0 || N <= 0) {
    throw InvalidInputError("covering: n, m, N must be positive");
  }
  if (!(lambda_cap > 0.0)) {
    throw InvalidInputError("covering: lambda cap must be > 0");
  }
  CoveringInstance inst;
  inst.case_id = case_id;
  inst.n = n;
  inst.m = m;
  inst.N = N;
  inst.seed = seed;
  inst.x_radius = x_radius.value_or(std::sqrt(static_cast<double>(n)));
  if (!(inst.x_radius > 0.0)) {
    throw InvalidInputError("covering: x radius must be > 0");
  }
  inst.lambda_cap = lambda_cap;
  inst.offset = offset;
  rng::Engine g(seed);
  inst.alpha.resize(m, n);
  for (int p = 0; p < m; ++p)
    for (int i = 0; i < n; ++i) inst.alpha(p, i) = draw_alpha(case_id, g);
  inst.A.resize(N, n);
  for (int k = 0; k < N; ++k)
    for (int i = 0; i < n; ++i) inst.A(k, i) = rng::uniform01(g);
  return inst;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  if (cfg.epsilons.empty()) throw InvalidInputError("bench: empty epsilon grid");
  for (double e : cfg.epsilons) {
    if (!(e > 0.0)) throw InvalidInputError("bench: epsilons must be > 0");
  }
  if (cfg.repetitions < 1) {
    throw InvalidInputError("bench: repetitions must be >= 1");
  }
  std::vector<CoveringInstance> instances;
  for (int r = 0; r < cfg.repetitions; ++r) {
    instances.push_back(gen_case(cfg.case_id, cfg.n, cfg.m, cfg.N,
                                 cfg.seed + static_cast<std::uint64_t>(r),
                                 cfg.x_radius, cfg.lambda_cap, cfg.offset));
  }

  std::vector<BenchRow> rows;
  for (double eps : cfg.epsilons) {
    BenchRow row;
    row.inv_epsilon = 1.0 / eps;
    int ok = 0;
    for (const auto& inst : instances) {
      const VIInstance vi = covering_operator(inst);
      const double diam = *vi.set.diameter();
      RestartConfig rc;
      rc.epsilon = eps;
      rc.mu = cfg.mu;
      rc.R0_sq = diam * diam;
      rc.x0 = covering_start(inst);
      rc.max_inner_iterations = cfg.max_inner_iterations;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const SolveReport rep =
            restarted_ump(vi.op, ProxSetup::euclidean(), vi.set, rc);
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        const Vector x = rep.x.head(inst.n);
        row.iterations += static_cast<double>(rep.iterations);
        row.time_seconds += secs;
        row.f_best += covering_objective(inst, x).first;
        row.g_out += covering_max_constraint(inst, x);
        ++ok;
      } catch (const Error& e) {
        if (row.failures == 0) row.error = e.what();
        ++row.failures;
      }
    }
    if (ok > 0) {
      row.iterations /= ok;
      row.time_seconds /= ok;
      row.f_best /= ok;
      row.g_out /= ok;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "inv_epsilon,iterations,time_seconds,f_best,g_out\n";
  const auto old = os.precision(17);
  for (const auto& r : rows) {
    os << r.inv_epsilon << ',' << r.iterations << ',' << r.time_seconds << ','
       << r.f_best << ',' << r.g_out << '\n';
  }
  os.precision(old);
}

void write_bench_markdown(std::ostream& os, const BenchConfig& cfg,
                          const std::vector<BenchRow>& rows) {
  os << "**Case " << cfg.case_id << ":** n = " << cfg.n << ", m = " << cfg.m
     << ", N = " << cfg.N << " (" << cfg.repetitions << " repetitions)\n\n";
  os << "| 1/eps | Iter. | Time (sec.) | f_best | g_out |\n";
  os << "|---:|---:|---:|---:|---:|\n";
  for (const auto& r : rows) {
    os << "| " << r.inv_epsilon << " | " << std::fixed << std::setprecision(1)
       << r.iterations << " | " << std::setprecision(3) << r.time_seconds
       << " | " << std::setprecision(6) << r.f_best << " | " << r.g_out
       << " |";
    os.unsetf(std::ios::floatfield);
    os << std::setprecision(6);
    if (r.failures > 0) os << " failures: " << r.failures;
    os << '\n';
  }
}

void dump_instance(std::ostream& os, const CoveringInstance& inst) {
  const auto old = os.precision(17);
  os << "case_id " << inst.case_id << '\n'
     << "n " << inst.n << '\n'
     << "m " << inst.m << '\n'
     << "N " << inst.N << '\n'
     << "seed " << inst.seed << '\n'
     << "x_radius " << inst.x_radius << '\n'
     << "lambda_cap " << inst.lambda_cap << '\n'
     << "offset " << inst.offset << '\n'
     << "data\n";
  for (int p = 0; p < inst.m; ++p)
    for (int i = 0; i < inst.n; ++i) os << inst.alpha(p, i) << '\n';
  for (int k = 0; k < inst.N; ++k)
    for (int i = 0; i < inst.n; ++i) os << inst.A(k, i) << '\n';
  os.precision(old);
}

CoveringInstance load_instance(std::istream& is) {
  std::map<std::string, std::string> header;
  std::string line;
  bool saw_data = false;
  while (std::getline(is, line)) {
    if (line == "data") {
      saw_data = true;
      break;
    }
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key >> value)) {
      throw InvalidInputError("instance dump: malformed header line: " + line);
    }
    header[key] = value;
  }
  if (!saw_data) throw InvalidInputError("instance dump: missing data marker");
  auto get = [&](const char* key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end()) {
      throw InvalidInputError(std::string("instance dump: missing ") + key);
    }
    return it->second;
  };
  CoveringInstance inst;
  try {
    inst.case_id = std::stoi(get("case_id"));
    inst.n = std::stoi(get("n"));
    inst.m = std::stoi(get("m"));
    inst.N = std::stoi(get("N"));
    inst.seed = std::stoull(get("seed"));
    inst.x_radius = std::stod(get("x_radius"));
    inst.lambda_cap = std::stod(get("lambda_cap"));
    inst.offset = std::stod(get("offset"));
  } catch (const std::logic_error&) {
    throw InvalidInputError("instance dump: malformed header value");
  }
  if (inst.n <= 0 || inst.m <= 0 || inst.N <= 0) {
    throw InvalidInputError("instance dump: sizes must be positive");
  }
  auto read = [&](Matrix& M, int rows, int cols) {
    M.resize(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        if (!(is >> M(r, c))) {
          throw InvalidInputError("instance dump: truncated data block");
        }
  };
  read(inst.alpha, inst.m, inst.n);
  read(inst.A, inst.N, inst.n);
  return inst;
}

}  // namespace saddlekit
