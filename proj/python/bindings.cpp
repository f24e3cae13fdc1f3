#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "saddlekit/audits.hpp"
#include "saddlekit/bench_covering.hpp"
#include "saddlekit/errors.hpp"
#include "saddlekit/gap.hpp"
#include "saddlekit/md_relative.hpp"
#include "saddlekit/mirror_prox.hpp"
#include "saddlekit/prox.hpp"
#include "saddlekit/saddle_accel.hpp"

namespace py = pybind11;
using namespace saddlekit;

namespace {

py::dict gap_dict(const GapCertificate& g) {
  py::dict d;
  d["kind"] = to_string(g.kind);
  d["value"] = g.value;
  d["tolerance"] = g.tolerance;
  d["method"] = g.method;
  d["oracle_calls"] = g.oracle_calls;
  d["upper_bound"] = g.upper_bound;
  d["certified"] = g.certified;
  return d;
}

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["solver"] = r.solver;
  d["x"] = r.x;
  if (r.y) d["y"] = *r.y;
  d["iterations"] = r.iterations;
  d["oracle_calls"] = r.oracle_calls;
  if (r.step_size) d["step_size"] = *r.step_size;
  d["metrics"] = r.metrics;
  py::list gaps;
  for (const auto& g : r.gaps) gaps.append(gap_dict(g));
  d["gaps"] = gaps;
  std::vector<double> M;
  std::vector<int> trials;
  for (const auto& t : r.ump_trace) {
    M.push_back(t.M_k);
    trials.push_back(t.trials);
  }
  d["M"] = M;
  d["trials"] = trials;
  py::list restarts;
  for (const auto& rr : r.restarts) {
    py::dict e;
    e["p"] = rr.p;
    e["inner_iterations"] = rr.inner_iterations;
    e["inv_M_sum"] = rr.inv_M_sum;
    e["R_sq"] = rr.R_sq;
    restarts.append(e);
  }
  d["restarts"] = restarts;
  d["objective_trace"] = r.objective_trace;
  d["wall_seconds"] = r.wall_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_saddlekit, m) {
  m.doc() = "Mirror descent, adaptive mirror prox and accelerated saddle "
            "solvers";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidInputError>(m, "InvalidInputError", base);
  py::register_exception<CapabilityError>(m, "CapabilityError", base);
  py::register_exception<NumericalError>(m, "NumericalError", base);
  py::register_exception<DivergenceError>(m, "DivergenceError", base);
  py::register_exception<UncertifiedError>(m, "UncertifiedError", base);
  py::register_exception<PlanningError>(m, "PlanningError", base);
  py::register_exception<ConstantsMisdeclaredError>(
      m, "ConstantsMisdeclaredError", base);

  py::class_<FeasibleSet>(m, "FeasibleSet")
      .def_static("ball", py::overload_cast<Vector, double>(&FeasibleSet::ball),
                  py::arg("center"), py::arg("radius"))
      .def_static("ball_at_origin",
                  py::overload_cast<int, double>(&FeasibleSet::ball),
                  py::arg("dim"), py::arg("radius"))
      .def_static("box", py::overload_cast<Vector, Vector>(&FeasibleSet::box),
                  py::arg("lo"), py::arg("hi"))
      .def_static("nonnegative_orthant", &FeasibleSet::nonnegative_orthant)
      .def_static("simplex", &FeasibleSet::simplex)
      .def_static("product", &FeasibleSet::product)
      .def_static("full_space", &FeasibleSet::full_space)
      .def_property_readonly("dim", &FeasibleSet::dim)
      .def_property_readonly("diameter", &FeasibleSet::diameter)
      .def("contains", &FeasibleSet::contains, py::arg("x"),
           py::arg("tol") = 1e-9)
      .def("project", &FeasibleSet::project)
      .def("id", &FeasibleSet::id)
      .def("__repr__", &FeasibleSet::id);

  py::class_<ProxSetup>(m, "ProxSetup")
      .def_static("euclidean", &ProxSetup::euclidean)
      .def_static("entropy", &ProxSetup::entropy)
      .def("id", &ProxSetup::id)
      .def("__repr__", &ProxSetup::id);

  m.def("bregman", &bregman, py::arg("setup"), py::arg("y"), py::arg("x"));
  m.def("mirror_step", &mirror_step, py::arg("setup"), py::arg("set"),
        py::arg("x"), py::arg("p"));
  m.def("prox_center", &prox_center);

  py::class_<OperatorConstants>(m, "OperatorConstants")
      .def(py::init<>())
      .def_readwrite("M", &OperatorConstants::M)
      .def_readwrite("sigma", &OperatorConstants::sigma)
      .def_readwrite("mu", &OperatorConstants::mu)
      .def_readwrite("holder", &OperatorConstants::holder);

  py::class_<VIOperator>(m, "Operator")
      .def(py::init([](int dim, std::function<Vector(const Vector&)> f,
                       OperatorConstants c) {
             VIOperator op;
             op.dim = dim;
             op.eval = std::move(f);
             op.constants = std::move(c);
             op.name = "python";
             return op;
           }),
           py::arg("dim"), py::arg("fn"),
           py::arg("constants") = OperatorConstants{})
      .def("__call__", &VIOperator::operator())
      .def_readonly("dim", &VIOperator::dim)
      .def_readwrite("constants", &VIOperator::constants)
      .def_readonly("name", &VIOperator::name);

  py::class_<VIInstance>(m, "VIInstance")
      .def_readonly("op", &VIInstance::op)
      .def_readonly("set", &VIInstance::set)
      .def_readonly("solution", &VIInstance::solution);

  py::class_<SaddleProblem>(m, "SaddleProblem")
      .def_readonly("nx", &SaddleProblem::nx)
      .def_readonly("ny", &SaddleProblem::ny)
      .def_readonly("mu_x", &SaddleProblem::mu_x)
      .def_readonly("mu_y", &SaddleProblem::mu_y)
      .def_readonly("L_xx", &SaddleProblem::L_xx)
      .def_readonly("L_xy", &SaddleProblem::L_xy)
      .def_readonly("L_yy", &SaddleProblem::L_yy)
      .def_readonly("nu", &SaddleProblem::nu)
      .def("f", [](const SaddleProblem& p, const Vector& x, const Vector& y) {
        return p.f(x, y);
      });

  m.def("affine_vi", &affine_vi, py::arg("A"), py::arg("solution"),
        py::arg("radius"));
  m.def("random_affine_vi", &random_affine_vi, py::arg("dim"), py::arg("mu"),
        py::arg("skew_scale"), py::arg("radius"), py::arg("seed"));
  m.def("skew_vi", &skew_vi, py::arg("radius") = 1.0);
  m.def("bilinear_saddle", &bilinear_saddle);
  m.def("quadratic_saddle", &quadratic_saddle, py::arg("mu_x"),
        py::arg("mu_y"), py::arg("B"), py::arg("a"), py::arg("b"),
        py::arg("rx"), py::arg("ry"));
  m.def("quadratic_saddle_solution", &quadratic_saddle_solution);
  m.def("saddle_to_vi", &saddle_to_vi);

  m.def(
      "vi_gap",
      [](const VIOperator& op, const FeasibleSet& set, const Vector& x,
         long budget, std::uint64_t seed) {
        return gap_dict(vi_gap(op, set, x, budget, seed));
      },
      py::arg("op"), py::arg("set"), py::arg("x"), py::arg("budget") = 2000,
      py::arg("seed") = 7);
  m.def(
      "saddle_gap",
      [](const SaddleProblem& p, const Vector& x, const Vector& y, double tol) {
        return gap_dict(saddle_gap(p, x, y, tol));
      },
      py::arg("problem"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-8);

  m.def(
      "md_solve",
      [](const VIOperator& op, const ProxSetup& setup, const FeasibleSet& set,
         double epsilon, double M, double R_sq, const Vector& x0,
         double sigma) {
        MDConfig cfg;
        cfg.epsilon = epsilon;
        cfg.M = M;
        cfg.R_sq = R_sq;
        cfg.x0 = x0;
        cfg.sigma = sigma;
        return report_dict(md_solve(op, setup, set, cfg));
      },
      py::arg("op"), py::arg("setup"), py::arg("set"), py::arg("epsilon"),
      py::arg("M"), py::arg("R_sq"), py::arg("x0"), py::arg("sigma") = 0.0);

  m.def(
      "ump_solve",
      [](const VIOperator& op, const ProxSetup& setup, const FeasibleSet& set,
         double epsilon, long iterations, double L0,
         std::optional<double> delta, std::optional<Vector> z0) {
        UMPConfig cfg;
        cfg.epsilon = epsilon;
        cfg.stop = StopRule::iterations(iterations);
        cfg.L0 = L0;
        cfg.delta = delta;
        cfg.z0 = std::move(z0);
        return report_dict(ump_solve(op, setup, set, cfg));
      },
      py::arg("op"), py::arg("setup"), py::arg("set"), py::arg("epsilon"),
      py::arg("iterations"), py::arg("L0") = 1.0, py::arg("delta") = py::none(),
      py::arg("z0") = py::none());

  m.def(
      "restarted_ump",
      [](const VIOperator& op, const ProxSetup& setup, const FeasibleSet& set,
         double epsilon, double mu, double R0_sq, const Vector& x0,
         double L0) {
        RestartConfig cfg;
        cfg.epsilon = epsilon;
        cfg.mu = mu;
        cfg.R0_sq = R0_sq;
        cfg.x0 = x0;
        cfg.L0 = L0;
        return report_dict(restarted_ump(op, setup, set, cfg));
      },
      py::arg("op"), py::arg("setup"), py::arg("set"), py::arg("epsilon"),
      py::arg("mu"), py::arg("R0_sq"), py::arg("x0"), py::arg("L0") = 1.0);
  m.def("restart_count", &restart_count);
  m.def("restart_radius_sq", &restart_radius_sq);

  py::class_<HolderProfile>(m, "HolderProfile")
      .def_readonly("L_tilde", &HolderProfile::L_tilde)
      .def_readonly("nu_tilde", &HolderProfile::nu_tilde);
  m.def("holder_profile", &holder_profile, py::arg("L_xx"), py::arg("L_xy"),
        py::arg("mu_y"), py::arg("D"), py::arg("nu"));
  m.def("model_L", &model_L, py::arg("L_tilde"), py::arg("nu_tilde"),
        py::arg("delta0"));
  m.def(
      "fgm_solve",
      [](const SaddleProblem& p, double epsilon) {
        const FGMResult r = fgm_solve(p, epsilon);
        py::dict d = report_dict(r.report);
        d["plan_L"] = r.plan.L;
        d["outer_iters"] = r.plan.outer_iters;
        return d;
      },
      py::arg("problem"), py::arg("epsilon"));

  py::class_<CoveringInstance>(m, "CoveringInstance")
      .def_readonly("case_id", &CoveringInstance::case_id)
      .def_readonly("n", &CoveringInstance::n)
      .def_readonly("m", &CoveringInstance::m)
      .def_readonly("N", &CoveringInstance::N)
      .def_readonly("A", &CoveringInstance::A)
      .def_readonly("alpha", &CoveringInstance::alpha)
      .def_readonly("x_radius", &CoveringInstance::x_radius);
  m.def("gen_case", &gen_case, py::arg("case_id"), py::arg("n"), py::arg("m"),
        py::arg("N"), py::arg("seed"), py::arg("x_radius") = py::none(),
        py::arg("lambda_cap") = 10.0, py::arg("offset") = 5.0);
  m.def("covering_operator", &covering_operator);
  m.def("covering_start", &covering_start);
  m.def("covering_objective", &covering_objective);
  m.def("covering_max_constraint", &covering_max_constraint);
  m.def(
      "run_bench",
      [](int case_id, int n, int m_, int N, std::vector<double> epsilons,
         int repetitions, std::uint64_t seed) {
        BenchConfig cfg;
        cfg.case_id = case_id;
        cfg.n = n;
        cfg.m = m_;
        cfg.N = N;
        cfg.epsilons = std::move(epsilons);
        cfg.repetitions = repetitions;
        cfg.seed = seed;
        py::list rows;
        for (const auto& r : run_bench(cfg)) {
          py::dict d;
          d["inv_epsilon"] = r.inv_epsilon;
          d["iterations"] = r.iterations;
          d["time_seconds"] = r.time_seconds;
          d["f_best"] = r.f_best;
          d["g_out"] = r.g_out;
          d["failures"] = r.failures;
          rows.append(d);
        }
        return rows;
      },
      py::arg("case_id"), py::arg("n"), py::arg("m"), py::arg("N"),
      py::arg("epsilons"), py::arg("repetitions") = 1, py::arg("seed") = 1);

  m.def(
      "audit_monotonicity",
      [](const VIOperator& op, const FeasibleSet& set, long pairs,
         std::uint64_t seed) {
        return audit_monotonicity(op, set, pairs, seed).passed();
      },
      py::arg("op"), py::arg("set"), py::arg("pairs") = 1000,
      py::arg("seed") = 1);
}
