#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "saddlekit/errors.hpp"
#include "saddlekit/gap.hpp"
#include "saddlekit/md_relative.hpp"
#include "saddlekit/mirror_prox.hpp"
#include "saddlekit/prox.hpp"
#include "saddlekit/rng.hpp"
#include "saddlekit/saddle_accel.hpp"

namespace saddlekit::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kSolvers{"md-rb", "ump", "rump", "saddle-fgm"};
const std::vector<std::string> kProblems{"affine-vi", "skew", "bilinear",
                                         "quadratic-saddle", "covering-ball"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

double required_diameter(const FeasibleSet& set, const char* what) {
  const auto d = set.diameter();
  if (!d) {
    throw InvalidInputError(std::string(what) + " needs a bounded feasible set");
  }
  return *d;
}

json gap_json(const GapCertificate& g) {
  return {{"kind", to_string(g.kind)},
          {"value", g.value},
          {"tolerance", g.tolerance},
          {"method", g.method},
          {"oracle_calls", g.oracle_calls},
          {"upper_bound", g.upper_bound},
          {"certified", g.certified}};
}

json report_json(const RunConfig& cfg, const SolveOutcome& o) {
  const SolveReport& r = o.report;
  json j;
  j["solver"] = r.solver;
  j["problem"] = cfg.problem;
  j["x"] = to_std(r.x);
  if (r.y) j["y"] = to_std(*r.y);
  j["iterations"] = r.iterations;
  j["oracle_calls"] = r.oracle_calls;
  if (r.step_size) j["step_size"] = *r.step_size;
  j["metrics"] = r.metrics;
  j["gaps"] = json::array();
  for (const auto& g : r.gaps) j["gaps"].push_back(gap_json(g));
  if (!r.ump_trace.empty()) {
    double max_M = 0.0;
    long trials = 0;
    for (const auto& t : r.ump_trace) {
      max_M = std::max(max_M, t.M_k);
      trials += t.trials;
    }
    j["trace_summary"] = {{"records", r.ump_trace.size()},
                          {"max_M", max_M},
                          {"total_trials", trials}};
  }
  if (!r.restarts.empty()) {
    json rs = json::array();
    for (const auto& s : r.restarts) {
      rs.push_back({{"p", s.p},
                    {"inner_iterations", s.inner_iterations},
                    {"inv_M_sum", s.inv_M_sum},
                    {"R_sq", s.R_sq}});
    }
    j["restarts"] = rs;
  }
  if (o.target) {
    j["target"] = *o.target;
    j["target_met"] = o.target_met;
  }
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

std::vector<double> read_point(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInputError("cannot read point file " + path);
  std::vector<double> v;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    try {
      v.push_back(std::stod(line));
    } catch (const std::logic_error&) {
      throw InvalidInputError("point file: not a number: " + line);
    }
  }
  return v;
}

// Error report on stderr: one JSON object per failure.
void report_error(std::ostream& err, const char* kind, const std::exception& e) {
  err << json{{"error", kind}, {"message", e.what()}}.dump() << '\n';
}

}  // namespace

BuiltProblem build_problem(const RunConfig& cfg) {
  if (cfg.dim <= 0) throw InvalidInputError("dim must be positive");
  if (!(cfg.radius > 0.0)) throw InvalidInputError("radius must be > 0");
  BuiltProblem b;
  if (cfg.problem == "affine-vi") {
    b.vi = random_affine_vi(cfg.dim, 1.0, 1.0, cfg.radius, cfg.seed);
  } else if (cfg.problem == "skew") {
    if (cfg.dim != 2) throw InvalidInputError("skew is two-dimensional");
    b.vi = skew_vi(cfg.radius);
  } else if (cfg.problem == "bilinear") {
    rng::Engine g(cfg.seed);
    Matrix B(cfg.dim, cfg.dim);
    for (int i = 0; i < cfg.dim; ++i)
      for (int j = 0; j < cfg.dim; ++j) B(i, j) = rng::standard_normal(g);
    const FeasibleSet half = FeasibleSet::ball(cfg.dim, 0.5 * cfg.radius);
    const Vector xs = half.sample(g);
    const Vector ys = half.sample(g);
    b.saddle = bilinear_saddle(B, xs, ys, cfg.radius, cfg.radius);
    b.vi = saddle_to_vi(*b.saddle);
    Vector z(2 * cfg.dim);
    z << xs, ys;
    b.vi.solution = z;
  } else if (cfg.problem == "quadratic-saddle") {
    b.saddle = random_quadratic_saddle(cfg.dim, cfg.dim, 1.0, 1.0, 1.0,
                                       cfg.radius, cfg.seed);
    b.vi = saddle_to_vi(*b.saddle);
  } else if (cfg.problem == "covering-ball") {
    b.covering = gen_case(cfg.case_id, cfg.n, cfg.m, cfg.N, cfg.seed,
                          cfg.x_radius, cfg.lambda_cap);
    b.vi = covering_operator(*b.covering);
  } else {
    throw InvalidInputError("unknown problem id " + cfg.problem);
  }
  return b;
}

SolveOutcome run_solve(const RunConfig& cfg, const BuiltProblem& prob) {
  if (!(cfg.eps > 0.0)) throw InvalidInputError("eps must be > 0");
  const VIOperator& op = prob.vi.op;
  const FeasibleSet& set = prob.vi.set;
  const ProxSetup setup = parse_prox(cfg.prox, set.dim());
  SolveOutcome out;

  if (cfg.solver == "md-rb") {
    MDConfig mc;
    mc.epsilon = cfg.eps;
    if (cfg.M) {
      mc.M = *cfg.M;
    } else if (op.constants.M) {
      mc.M = *op.constants.M;
    } else {
      throw InvalidInputError("md-rb needs M (the problem declares none)");
    }
    mc.sigma = cfg.sigma.value_or(op.constants.sigma);
    mc.x0 = prox_center(setup, set, set.interior_point());
    if (cfg.R_sq) {
      mc.R_sq = *cfg.R_sq;
    } else if (setup.kind() == ProxKind::kEuclidean) {
      const double d = required_diameter(set, "md-rb");
      mc.R_sq = 0.5 * d * d;
    } else {
      // V(x, uniform) <= ln n on the simplex.
      mc.R_sq = std::log(static_cast<double>(set.dim()));
    }
    out.report = md_solve(op, setup, set, mc);
    out.target = mc.epsilon + mc.sigma;
  } else if (cfg.solver == "ump") {
    UMPConfig uc;
    uc.epsilon = cfg.eps;
    uc.L0 = cfg.L0.value_or(1.0);
    uc.delta = cfg.delta;
    uc.stop = StopRule::iterations(cfg.iters);
    out.report = ump_solve(op, setup, set, uc);
  } else if (cfg.solver == "rump") {
    RestartConfig rc;
    rc.epsilon = cfg.eps;
    // The covering operator is 1-strongly monotone in lambda; the benchmark
    // runs with mu = 1 unless told otherwise.
    rc.mu = cfg.mu.value_or(prob.covering ? 1.0 : op.constants.mu);
    if (!(rc.mu > 0.0)) {
      throw InvalidInputError(
          "rump needs mu > 0 (the problem declares none; pass --mu)");
    }
    rc.L0 = cfg.L0.value_or(1.0);
    rc.delta = cfg.delta.value_or(0.0);
    const double d = required_diameter(set, "rump");
    rc.R0_sq = cfg.R_sq.value_or(d * d);
    rc.x0 = prob.covering ? covering_start(*prob.covering)
                          : set.interior_point();
    out.report = restarted_ump(op, setup, set, rc);
  } else if (cfg.solver == "saddle-fgm") {
    if (!prob.saddle) {
      throw InvalidInputError("saddle-fgm needs a saddle problem");
    }
    FGMResult r = fgm_solve(*prob.saddle, cfg.eps);
    out.report = std::move(r.report);
    out.target = cfg.eps;
  } else {
    throw InvalidInputError("unknown solver id " + cfg.solver);
  }

  SolveReport& rep = out.report;
  if (rep.gaps.empty() && set.bounded()) {
    Vector z = rep.x;
    if (rep.y) {
      z.resize(rep.x.size() + rep.y->size());
      z << rep.x, *rep.y;
    }
    rep.gaps.push_back(vi_gap(op, set, z, 2000, cfg.seed));
  }
  if (prob.vi.solution) {
    Vector z = rep.x;
    if (rep.y) {
      z.resize(rep.x.size() + rep.y->size());
      z << rep.x, *rep.y;
    }
    rep.metrics["dist_sq_to_solution"] = (z - *prob.vi.solution).squaredNorm();
  }
  if (prob.covering) {
    const Vector x = rep.x.head(prob.covering->n);
    rep.metrics["f_best"] = covering_objective(*prob.covering, x).first;
    rep.metrics["g_out"] = covering_max_constraint(*prob.covering, x);
  }
  if (out.target) {
    const GapCertificate& g = rep.gaps.front();
    out.target_met = g.upper_bound && g.certified && g.value <= *out.target;
  }
  return out;
}

std::string config_echo(const RunConfig& c, const std::string& command) {
  std::ostringstream os;
  os << "# saddlekit " << command << " config\n[" << command << "]\n";
  auto kv = [&](const char* k, const std::string& v) {
    os << k << " = " << v << '\n';
  };
  auto str = [](const std::string& s) { return "\"" + s + "\""; };
  auto opt = [&](const char* k, const std::optional<double>& v) {
    if (v) kv(k, fmt(*v));
  };
  if (command == "solve") {
    kv("solver", str(c.solver));
    kv("problem", str(c.problem));
    kv("prox", str(c.prox));
    kv("dim", std::to_string(c.dim));
    kv("radius", fmt(c.radius));
    kv("eps", fmt(c.eps));
    opt("M", c.M);
    opt("R-sq", c.R_sq);
    opt("sigma", c.sigma);
    opt("L0", c.L0);
    opt("mu", c.mu);
    opt("delta", c.delta);
    kv("iters", std::to_string(c.iters));
  } else if (command == "bench") {
    std::string grid = "[";
    for (std::size_t i = 0; i < c.eps_grid.size(); ++i) {
      grid += (i ? ", " : "") + fmt(c.eps_grid[i]);
    }
    kv("eps", grid + "]");
    kv("reps", std::to_string(c.reps));
    opt("mu", c.mu);
  }
  kv("seed", std::to_string(c.seed));
  kv("case", std::to_string(c.case_id));
  kv("n", std::to_string(c.n));
  kv("m", std::to_string(c.m));
  kv("N", std::to_string(c.N));
  kv("lambda-cap", fmt(c.lambda_cap));
  opt("x-radius", c.x_radius);
  kv("out", str(c.out));
  return os.str();
}

namespace {

void add_problem_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--problem", c.problem, "Built-in problem id")
      ->check(CLI::IsMember(kProblems));
  sub->add_option("--dim", c.dim, "Dimension of the built-in problem")
      ->check(CLI::PositiveNumber);
  sub->add_option("--radius", c.radius, "Radius of the feasible balls")
      ->check(CLI::PositiveNumber);
  sub->add_option("--case", c.case_id, "Covering data case (1-4)")
      ->check(CLI::Range(1, 4));
  sub->add_option("--n", c.n, "Covering: dimension")->check(CLI::PositiveNumber);
  sub->add_option("--m", c.m, "Covering: number of constraints")
      ->check(CLI::PositiveNumber);
  sub->add_option("--N", c.N, "Covering: number of points")
      ->check(CLI::PositiveNumber);
  sub->add_option("--lambda-cap", c.lambda_cap, "Covering: multiplier radius")
      ->check(CLI::PositiveNumber);
  sub->add_option("--x-radius", c.x_radius, "Covering: radius of the x ball")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--out", c.out, "Output directory");
}

int do_solve(const RunConfig& cfg, std::ostream& out) {
  const BuiltProblem prob = build_problem(cfg);
  const SolveOutcome o = run_solve(cfg, prob);
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  json rep = report_json(cfg, o);
  rep["config"] = config_echo(cfg, "solve");
  write_text(dir / "report.json", rep.dump(2) + "\n");
  write_text(dir / "config.echo", config_echo(cfg, "solve"));
  {
    std::ostringstream pt;
    pt.precision(17);
    for (double v : to_std(o.report.x)) pt << v << '\n';
    if (o.report.y) {
      for (double v : to_std(*o.report.y)) pt << v << '\n';
    }
    write_text(dir / "point.txt", pt.str());
  }
  if (!o.report.ump_trace.empty()) {
    std::ofstream f(dir / "trace.csv");
    write_trace_csv(f, o.report);
  }
  if (prob.covering) {
    BenchRow row;
    row.inv_epsilon = 1.0 / cfg.eps;
    row.iterations = static_cast<double>(o.report.iterations);
    row.time_seconds = o.report.wall_seconds;
    row.f_best = o.report.metrics.at("f_best");
    row.g_out = o.report.metrics.at("g_out");
    std::ofstream f(dir / "bench.csv");
    write_bench_csv(f, {row});
  }
  const GapCertificate& g = o.report.gaps.front();
  out << o.report.solver << ": " << o.report.iterations << " iterations, "
      << to_string(g.kind) << " gap " << g.value << " (" << g.method
      << (g.certified ? ", certified" : ", uncertified") << ")\n";
  if (o.target && !o.target_met) {
    out << "target " << *o.target << " not certified\n";
    return 1;
  }
  return 0;
}

int do_bench(RunConfig cfg, std::ostream& out) {
  if (cfg.eps_grid.empty()) {
    for (int i = 1; i <= 6; ++i) cfg.eps_grid.push_back(std::ldexp(1.0, -i));
  }
  BenchConfig bc;
  bc.case_id = cfg.case_id;
  bc.n = cfg.n;
  bc.m = cfg.m;
  bc.N = cfg.N;
  bc.epsilons = cfg.eps_grid;
  bc.repetitions = cfg.reps;
  bc.seed = cfg.seed;
  bc.x_radius = cfg.x_radius;
  bc.lambda_cap = cfg.lambda_cap;
  bc.mu = cfg.mu.value_or(1.0);
  // Validates the case id and sizes before anything is written.
  const CoveringInstance first = gen_case(bc.case_id, bc.n, bc.m, bc.N,
                                          bc.seed, bc.x_radius, bc.lambda_cap);
  const auto rows = run_bench(bc);

  const fs::path dir(cfg.out);
  fs::create_directories(dir / "instances");
  {
    std::ofstream f(dir / "bench.csv");
    write_bench_csv(f, rows);
  }
  std::ostringstream md;
  write_bench_markdown(md, bc, rows);
  write_text(dir / "bench.md", md.str());
  write_text(dir / "config.echo", config_echo(cfg, "bench"));
  for (int r = 0; r < bc.repetitions; ++r) {
    const auto inst = gen_case(bc.case_id, bc.n, bc.m, bc.N,
                               bc.seed + static_cast<std::uint64_t>(r),
                               bc.x_radius, bc.lambda_cap);
    std::ofstream f(dir / "instances" / ("instance_" + std::to_string(r) +
                                         ".txt"));
    dump_instance(f, inst);
  }
  json meta = {{"case", bc.case_id},
               {"n", bc.n},
               {"m", bc.m},
               {"N", bc.N},
               {"repetitions", bc.repetitions},
               {"seeds_from", bc.seed},
               {"x_radius", first.x_radius},
               {"lambda_cap", bc.lambda_cap},
               {"mu", bc.mu},
               {"nu", 0.0},
               {"prox", "euclidean"}};
  json errs = json::array();
  for (const auto& r : rows) {
    if (r.failures) {
      errs.push_back({{"inv_epsilon", r.inv_epsilon},
                      {"failures", r.failures},
                      {"error", r.error}});
    }
  }
  meta["failures"] = errs;
  write_text(dir / "bench_meta.json", meta.dump(2) + "\n");
  out << md.str();
  return errs.empty() ? 0 : 1;
}

int do_certify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.point.empty()) throw InvalidInputError("certify needs --point");
  if (!(cfg.eps > 0.0)) throw InvalidInputError("eps must be > 0");
  const BuiltProblem prob = build_problem(cfg);
  const std::vector<double> v = read_point(cfg.point);
  const Vector z = Eigen::Map<const Vector>(v.data(), v.size());
  if (z.size() != prob.vi.set.dim()) {
    throw InvalidInputError("point has " + std::to_string(z.size()) +
                            " coordinates, the problem needs " +
                            std::to_string(prob.vi.set.dim()));
  }
  json j;
  j["problem"] = cfg.problem;
  j["gaps"] = json::array();
  if (prob.saddle) {
    const Vector x = z.head(prob.saddle->nx);
    const Vector y = z.tail(prob.saddle->ny);
    j["gaps"].push_back(gap_json(saddle_gap(*prob.saddle, x, y, cfg.eps)));
  }
  if (!prob.vi.set.contains(z, 1e-7)) {
    throw InvalidInputError("point is not in the feasible set");
  }
  j["gaps"].push_back(gap_json(vi_gap(prob.vi.op, prob.vi.set, z, 2000,
                                      cfg.seed)));
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  write_text(dir / "certificate.json", j.dump(2) + "\n");
  out << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"First-order solvers for variational inequalities and saddle "
               "problems"};
  app.name("saddlekit");
  app.require_subcommand(1);
  // Config files are only read by the root app; subcommands pass --config up.
  app.set_config("--config", "",
                 "Config file: key = value lines under a [solve], [bench] or "
                 "[certify] section; flags override");
  app.fallthrough();

  RunConfig solve_cfg, bench_cfg, cert_cfg;

  CLI::App* solve = app.add_subcommand("solve", "Run one solver on a problem");
  solve->add_option("--solver", solve_cfg.solver, "Solver id")
      ->check(CLI::IsMember(kSolvers));
  solve->add_option("--prox", solve_cfg.prox, "Prox setup")
      ->check(CLI::IsMember({"euclidean", "entropy"}));
  solve->add_option("--eps", solve_cfg.eps, "Target accuracy")
      ->check(CLI::PositiveNumber);
  solve->add_option("--M", solve_cfg.M, "Relative-boundedness constant (md-rb)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--R-sq", solve_cfg.R_sq, "Divergence / radius bound")
      ->check(CLI::PositiveNumber);
  solve->add_option("--sigma", solve_cfg.sigma, "sigma of the operator")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--L0", solve_cfg.L0, "Initial smoothness guess")
      ->check(CLI::PositiveNumber);
  solve->add_option("--mu", solve_cfg.mu, "Strong monotonicity (rump)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--delta", solve_cfg.delta, "Oracle inexactness")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--iters", solve_cfg.iters, "Iteration count (ump)")
      ->check(CLI::PositiveNumber);
  add_problem_options(solve, solve_cfg);

  CLI::App* bench = app.add_subcommand("bench", "Covering-ball benchmark");
  bench->add_option("--eps", bench_cfg.eps_grid, "Epsilon grid")
      ->check(CLI::PositiveNumber);
  bench->add_option("--reps", bench_cfg.reps, "Repetitions per epsilon")
      ->check(CLI::PositiveNumber);
  bench->add_option("--mu", bench_cfg.mu, "Strong monotonicity for restarts")
      ->check(CLI::PositiveNumber);
  add_problem_options(bench, bench_cfg);

  CLI::App* certify =
      app.add_subcommand("certify", "Recompute gaps for a saved point");
  certify->add_option("--point", cert_cfg.point, "File, one coordinate per line")
      ->required();
  certify->add_option("--eps", cert_cfg.eps, "Certification tolerance")
      ->check(CLI::PositiveNumber);
  add_problem_options(certify, cert_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "invalid-config", e);
    return 2;
  }

  try {
    if (*solve) return do_solve(solve_cfg, out);
    if (*bench) return do_bench(bench_cfg, out);
    return do_certify(cert_cfg, out);
  } catch (const InvalidInputError& e) {
    report_error(err, "invalid-config", e);
    return 2;
  } catch (const DivergenceError& e) {
    report_error(err, "divergence", e);
    return 1;
  } catch (const Error& e) {
    report_error(err, "solver-error", e);
    return 1;
  } catch (const std::exception& e) {
    report_error(err, "internal-error", e);
    return 1;
  }
}

}  // namespace saddlekit::cli
