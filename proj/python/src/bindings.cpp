#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "pinsker/asymptotics.hpp"
#include "pinsker/ellipsoid.hpp"
#include "pinsker/hyperrect.hpp"
#include "pinsker/io.hpp"
#include "pinsker/montecarlo.hpp"

namespace py = pybind11;
using namespace pinsker;

namespace {

std::vector<double> to_list(const Allocation& a) { return {a.counts().begin(), a.counts().end()}; }

py::object from_json(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

Constant constant_by_name(const std::string& name) {
  for (Constant c : kAllConstants) {
    if (constant_name(c) == name) return c;
  }
  throw std::invalid_argument("unknown constant \"" + name + "\"");
}

Membership membership_by_name(const std::string& name) {
  if (name == "none") return Membership::none;
  if (name == "ellipsoid") return Membership::ellipsoid;
  if (name == "hyperrect") return Membership::hyperrect;
  throw std::invalid_argument("membership must be none, ellipsoid or hyperrect");
}

HyperrectSolution hyperrect_optimal(const SequenceSpec& spec, double n) {
  try {
    return hyperrect::optimal_allocation(spec, n);
  } catch (const TruncationError&) {
    throw;
  } catch (const std::invalid_argument&) {
    return hyperrect::optimal_allocation_general(spec, n);
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Measurement allocation and minimax linear risk for heteroscedastic Gaussian sequence models.";

  py::register_exception<InfiniteRisk>(m, "InfiniteRisk", PyExc_ArithmeticError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);
  py::register_exception<NoSignChange>(m, "NoSignChange", PyExc_ArithmeticError);

  py::class_<SequenceSpec>(m, "SequenceSpec")
      .def_static("from_lists", &SequenceSpec::from_lists, py::arg("a"), py::arg("sigma2"))
      .def_static("sobolev_ellipsoid", &SequenceSpec::sobolev_ellipsoid, py::arg("alpha"), py::arg("beta"),
                  py::arg("dim"), py::arg("Q") = 1.0, py::arg("s2") = 1.0)
      .def_static("sobolev_hyperrect", &SequenceSpec::sobolev_hyperrect, py::arg("alpha"), py::arg("beta"),
                  py::arg("dim") = 0, py::arg("Q") = 1.0, py::arg("s2") = 1.0, py::arg("tail_tol") = 1e-12)
      .def_static("from_json", &io::load_spec, py::arg("path_or_text"))
      .def("to_json", [](const SequenceSpec& s) { return io::spec_to_json(s).dump(); })
      .def_property_readonly("dim", &SequenceSpec::dim)
      .def_property_readonly("a", [](const SequenceSpec& s) { return std::vector<double>(s.a().begin(), s.a().end()); })
      .def_property_readonly("sigma2", [](const SequenceSpec& s) {
        return std::vector<double>(s.sigma2().begin(), s.sigma2().end());
      })
      .def_property_readonly("has_tail", &SequenceSpec::has_tail)
      .def("__repr__", [](const SequenceSpec& s) { return "<SequenceSpec dim=" + std::to_string(s.dim()) + ">"; });

  py::class_<EllipsoidSolution>(m, "EllipsoidSolution")
      .def_readonly("t", &EllipsoidSolution::t)
      .def_readonly("risk", &EllipsoidSolution::risk)
      .def_readonly("active_dim", &EllipsoidSolution::active_dim)
      .def_readonly("lambda_", &EllipsoidSolution::lambda)
      .def_readonly("theta_sq", &EllipsoidSolution::theta_sq)
      .def_readonly("effective_budget", &EllipsoidSolution::effective_budget)
      .def_readonly("truncation_exact", &EllipsoidSolution::truncation_exact);

  py::class_<SubOptimalSolution>(m, "SubOptimalSolution")
      .def_readonly("t_s", &SubOptimalSolution::t_s)
      .def_property_readonly("alloc", [](const SubOptimalSolution& s) { return to_list(s.alloc); })
      .def_readonly("risk", &SubOptimalSolution::risk)
      .def_readonly("active_dim", &SubOptimalSolution::active_dim);

  py::class_<NumericAllocation>(m, "NumericAllocation")
      .def_property_readonly("alloc", [](const NumericAllocation& s) { return to_list(s.alloc); })
      .def_readonly("risk", &NumericAllocation::risk)
      .def_readonly("support", &NumericAllocation::support)
      .def_readonly("suboptimal_risk", &NumericAllocation::suboptimal_risk)
      .def_readonly("evaluations", &NumericAllocation::evaluations);

  py::class_<HyperrectSolution>(m, "HyperrectSolution")
      .def_property_readonly("alloc", [](const HyperrectSolution& s) { return to_list(s.alloc); })
      .def_readonly("active", &HyperrectSolution::active)
      .def_readonly("active_count", &HyperrectSolution::active_count)
      .def_readonly("prefix", &HyperrectSolution::prefix)
      .def_readonly("risk", &HyperrectSolution::risk)
      .def_readonly("risk_tail", &HyperrectSolution::risk_tail)
      .def_readonly("lagrange_mu", &HyperrectSolution::lagrange_mu);

  py::class_<TruncatedUniform>(m, "TruncatedUniform")
      .def_readonly("d", &TruncatedUniform::d)
      .def_readonly("k", &TruncatedUniform::k)
      .def_readonly("risk", &TruncatedUniform::risk);

  py::class_<SimReport>(m, "SimReport")
      .def_readonly("empirical_risk", &SimReport::empirical_risk)
      .def_readonly("std_error", &SimReport::std_error)
      .def_readonly("formula_risk", &SimReport::formula_risk)
      .def_readonly("z_score", &SimReport::z_score)
      .def_readonly("replications", &SimReport::replications)
      .def_readonly("seed", &SimReport::seed);

  py::class_<AdversarialReport>(m, "AdversarialReport")
      .def_readonly("max_gap", &AdversarialReport::max_gap)
      .def_readonly("sup_risk", &AdversarialReport::sup_risk)
      .def_readonly("saddle_value", &AdversarialReport::saddle_value)
      .def_readonly("worst_theta", &AdversarialReport::worst_theta)
      .def_readonly("samples", &AdversarialReport::samples);

  py::class_<InequalityCheck>(m, "InequalityCheck")
      .def_readonly("lhs", &InequalityCheck::lhs)
      .def_readonly("rhs", &InequalityCheck::rhs)
      .def_readonly("holds", &InequalityCheck::holds);

  m.def("solve_t", [](const SequenceSpec& s, const std::vector<double>& n) { return ellipsoid::solve_t(s, Allocation(n)); },
        py::arg("spec"), py::arg("alloc"));
  m.def("ellipsoid_risk", [](const SequenceSpec& s, const std::vector<double>& n) { return ellipsoid::risk(s, Allocation(n)); },
        py::arg("spec"), py::arg("alloc"));
  m.def("ellipsoid_suboptimal", &ellipsoid::suboptimal_allocation, py::arg("spec"), py::arg("budget"));
  m.def(
      "ellipsoid_optimal",
      [](const SequenceSpec& s, double n, std::size_t lo, std::size_t hi) {
        return ellipsoid::optimal_allocation(s, n, {lo, hi});
      },
      py::arg("spec"), py::arg("budget"), py::arg("dim_lo") = 0, py::arg("dim_hi") = 0);

  m.def("hyperrect_risk", [](const SequenceSpec& s, const std::vector<double>& n) { return hyperrect::risk(s, Allocation(n)); },
        py::arg("spec"), py::arg("alloc"));
  m.def("hyperrect_optimal", &hyperrect_optimal, py::arg("spec"), py::arg("budget"));
  m.def("truncated_uniform_best", &hyperrect::truncated_uniform_best, py::arg("spec"), py::arg("budget"));
  m.def("hyperrect_uniform_risk", &hyperrect::uniform_risk, py::arg("spec"), py::arg("k"));

  m.def("constant", [](const std::string& name, double alpha, double beta) {
        return constant(constant_by_name(name), {alpha, beta});
      },
      py::arg("name"), py::arg("alpha"), py::arg("beta"));
  m.def("constants", [](double alpha, double beta) {
        py::dict out;
        for (const auto& v : constants({alpha, beta})) out[py::str(std::string(constant_name(v.id)))] = v.value;
        return out;
      },
      py::arg("alpha"), py::arg("beta"));
  m.def("rho_ellipsoid", [](double a, double b) { return rho_ellipsoid({a, b}); }, py::arg("alpha"), py::arg("beta"));
  m.def("rho_hyperrect", [](double a, double b) { return rho_hyperrect({a, b}); }, py::arg("alpha"), py::arg("beta"));
  m.def("ratio_table", [](int which) { return from_json(io::to_json(ratio_table(which))); }, py::arg("which"));
  m.def(
      "contour_summary",
      [](double alo, double ahi, double blo, double bhi, std::size_t na, std::size_t nb) {
        ContourOptions opts{alo, ahi, blo, bhi, na, nb, true};
        return from_json(io::contour_summary(contour_grid(opts)));
      },
      py::arg("alpha_lo") = 0.02, py::arg("alpha_hi") = 3.0, py::arg("beta_lo") = 0.5, py::arg("beta_hi") = 2.2,
      py::arg("alpha_points") = 400, py::arg("beta_points") = 400);
  m.def("beta_inequality_ellipsoid",
        [](double a, double b, double rho_o) { return beta_inequality_ellipsoid({a, b}, rho_o); }, py::arg("alpha"),
        py::arg("beta"), py::arg("rho_o") = kRhoMinimum);
  m.def("beta_inequality_hyperrect", [](double a, double b) { return beta_inequality_hyperrect({a, b}); },
        py::arg("alpha"), py::arg("beta"));

  m.def(
      "simulate",
      [](const SequenceSpec& s, const std::vector<double>& n, const std::vector<double>& theta,
         const std::vector<double>& lambda, std::size_t reps, std::uint64_t seed, const std::string& membership) {
        const SimConfig cfg{s, Allocation(n), theta, reps, seed, membership_by_name(membership)};
        return simulate(cfg, lambda);
      },
      py::arg("spec"), py::arg("alloc"), py::arg("theta"), py::arg("lambda_"), py::arg("replications") = 10000,
      py::arg("seed") = 42, py::arg("membership") = "none");
  m.def(
      "adversarial_check",
      [](const SequenceSpec& s, const std::vector<double>& n, std::size_t samples, std::uint64_t seed) {
        return adversarial_check(s, Allocation(n), samples, seed);
      },
      py::arg("spec"), py::arg("alloc"), py::arg("samples") = 10000, py::arg("seed") = 42);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "pinsker");
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
