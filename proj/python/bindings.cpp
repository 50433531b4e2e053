#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "driftlab/analytic_bounds.hpp"
#include "driftlab/conditions.hpp"
#include "driftlab/error.hpp"
#include "driftlab/processes.hpp"
#include "driftlab/simulation.hpp"
#include "driftlab/theorem.hpp"

namespace py = pybind11;
using namespace drift;

namespace {

JumpDistribution table_from_pairs(const std::vector<std::pair<double, double>>& atoms) {
  std::vector<JumpAtom> out;
  out.reserve(atoms.size());
  for (const auto& [value, prob] : atoms) out.push_back({value, prob});
  return JumpDistribution::from_atoms(std::move(out));
}

std::vector<std::pair<double, double>> table_to_pairs(const JumpDistribution& jumps) {
  std::vector<std::pair<double, double>> out;
  for (const JumpAtom& a : jumps.atoms()) out.emplace_back(a.value, a.prob);
  return out;
}

}  // namespace

PYBIND11_MODULE(_driftlab, m) {
  m.doc() = "Drift analysis laboratory: processes, condition checks, theorem constants and inequality sweeps.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<JumpDistribution>(m, "JumpDistribution")
      .def_static("from_atoms", &table_from_pairs, py::arg("atoms"), "Build from (value, probability) pairs.")
      .def("atoms", &table_to_pairs)
      .def("mean", &JumpDistribution::mean)
      .def("total_mass", &JumpDistribution::total_mass)
      .def("abs_tail", &JumpDistribution::abs_tail, py::arg("j"))
      .def("lower_tail", &JumpDistribution::lower_tail, py::arg("j"))
      .def("upper_tail", &JumpDistribution::upper_tail, py::arg("j"))
      .def("log_abs_mgf", &JumpDistribution::log_abs_mgf, py::arg("gamma"));

  py::class_<JumpRegime>(m, "JumpRegime")
      .def_readonly("state_low", &JumpRegime::state_low)
      .def_readonly("state_high", &JumpRegime::state_high)
      .def_readonly("jumps", &JumpRegime::jumps);

  py::class_<Process, std::shared_ptr<Process>>(m, "Process")
      .def_property_readonly("name", &Process::name)
      .def_property_readonly("parameters", &Process::parameters)
      .def("exact_jumps", &Process::exact_jumps);

  auto process = [](ProcessPtr p) { return std::const_pointer_cast<Process>(std::move(p)); };
  m.def("counterexample_chain", [=](int n) { return process(counterexample_chain(n)); }, py::arg("n"));
  m.def("geometric_drift_walk", [=](double eps, double delta, double start) {
        return process(geometric_drift_walk(eps, delta, start));
      }, py::arg("eps"), py::arg("delta"), py::arg("start") = 0.0);
  m.def("constant_step_walk", [=](double start, double step) { return process(constant_step_walk(start, step)); },
        py::arg("start"), py::arg("step"));
  m.def("oneone_ea_needle", [=](int n) { return process(oneone_ea_needle(n)); }, py::arg("n"));
  m.def("one_comma_lambda_ea", [=](int n, int lam) { return process(one_comma_lambda_ea(n, lam)); }, py::arg("n"),
        py::arg("lambda_offspring"));
  m.def("pea", [=](int n, int mu) { return process(pea(n, mu)); }, py::arg("n"), py::arg("mu"));
  m.def("pea_prime", [=](int n, int mu) { return process(pea_prime(n, mu)); }, py::arg("n"), py::arg("mu"));
  m.def("pea_prime_selection", [](const std::vector<double>& f) { return pea_prime_selection(f); },
        py::arg("fitnesses"));

  py::class_<HittingEstimate>(m, "HittingEstimate")
      .def_readonly("hits", &HittingEstimate::hits)
      .def_readonly("trials", &HittingEstimate::trials)
      .def_readonly("point", &HittingEstimate::point)
      .def_readonly("ci_low", &HittingEstimate::ci_low)
      .def_readonly("ci_high", &HittingEstimate::ci_high)
      .def_property_readonly("half_width", &HittingEstimate::half_width);

  m.def("simulate", [](const std::shared_ptr<Process>& p, double a, double b, std::uint64_t trials,
                       std::uint64_t max_steps, std::uint64_t seed, unsigned threads) {
        const std::vector<Trajectory> runs = run_trials(*p, DriftWindow(a, b), {max_steps, trials, seed}, threads);
        std::vector<std::optional<std::uint64_t>> hits;
        hits.reserve(runs.size());
        for (const Trajectory& t : runs) hits.push_back(t.hit_time);
        return hits;
      }, py::arg("process"), py::arg("a"), py::arg("b"), py::arg("trials"), py::arg("max_steps"), py::arg("seed") = 0,
      py::arg("threads") = 0, "Hitting time of each trial (None when truncated at max_steps).");
  m.def("estimate_hitting_probability",
        [](const std::shared_ptr<Process>& p, double a, double b, std::uint64_t trials, std::uint64_t horizon,
           std::uint64_t seed, unsigned threads) {
          return estimate_hitting_probability(*p, DriftWindow(a, b), {horizon == 0 ? 1 : horizon, trials, seed},
                                              horizon, threads);
        },
        py::arg("process"), py::arg("a"), py::arg("b"), py::arg("trials"), py::arg("horizon"), py::arg("seed") = 0,
        py::arg("threads") = 0);

  py::class_<TailRow>(m, "TailRow")
      .def_readonly("j", &TailRow::j)
      .def_readonly("tail", &TailRow::tail)
      .def_readonly("ci_low", &TailRow::ci_low)
      .def_readonly("ci_high", &TailRow::ci_high)
      .def_readonly("count", &TailRow::count)
      .def_readonly("bound", &TailRow::bound)
      .def_property_readonly("verdict", [](const TailRow& r) { return std::string(to_string(r.verdict)); });

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("drift_estimate", &ConditionReport::drift_estimate)
      .def_readonly("drift_ci_low", &ConditionReport::drift_ci_low)
      .def_readonly("drift_ci_high", &ConditionReport::drift_ci_high)
      .def_readonly("tails", &ConditionReport::tails)
      .def_property_readonly("drift_verdict",
                             [](const ConditionReport& r) { return std::string(to_string(r.drift_verdict)); })
      .def_property_readonly("tail_verdict",
                             [](const ConditionReport& r) { return std::string(to_string(r.tail_verdict())); })
      .def_property_readonly("verdict", [](const ConditionReport& r) { return std::string(to_string(r.overall())); })
      .def("summary", [](const ConditionReport& r) { return summary(r); });

  m.def("check_conditions_exact",
        [](const std::shared_ptr<Process>& p, double a, double b, double eps, double delta, double r, int j_max,
           const std::string& variant) {
          const auto regimes = p->exact_jumps();
          require(regimes.has_value(), "process has no exact jump table");
          return check_conditions_exact(*regimes, DriftWindow(a, b), {eps, delta, r, j_max}, parse_variant(variant));
        },
        py::arg("process"), py::arg("a"), py::arg("b"), py::arg("eps"), py::arg("delta"), py::arg("r"),
        py::arg("j_max") = 64, py::arg("variant") = "two_sided");
  m.def("check_table",
        [](const JumpDistribution& jumps, double eps, double delta, double r, int j_max, const std::string& variant) {
          return check_conditions_exact(jumps, {eps, delta, r, j_max}, parse_variant(variant));
        },
        py::arg("jumps"), py::arg("eps"), py::arg("delta"), py::arg("r"), py::arg("j_max") = 64,
        py::arg("variant") = "two_sided");
  m.def("check_conditions_empirical",
        [](const std::vector<double>& samples, double eps, double delta, double r, int j_max,
           const std::string& variant) {
          return check_conditions_empirical(std::span<const double>(samples), {eps, delta, r, j_max},
                                            parse_variant(variant));
        },
        py::arg("samples"), py::arg("eps"), py::arg("delta"), py::arg("r"), py::arg("j_max") = 64,
        py::arg("variant") = "two_sided");

  py::class_<TheoremConstants>(m, "TheoremConstants")
      .def_readonly("eps", &TheoremConstants::eps)
      .def_readonly("delta", &TheoremConstants::delta)
      .def_readonly("r", &TheoremConstants::r)
      .def_readonly("ell", &TheoremConstants::ell)
      .def_readonly("prob_target", &TheoremConstants::prob_target)
      .def_readonly("gamma", &TheoremConstants::gamma)
      .def_readonly("mgf_bound", &TheoremConstants::mgf_bound)
      .def_readonly("c_bound", &TheoremConstants::c_bound)
      .def_readonly("lambda_", &TheoremConstants::lambda)
      .def_readonly("p_ell", &TheoremConstants::p_ell)
      .def_readonly("d_bound", &TheoremConstants::d_bound)
      .def_readonly("log_horizon", &TheoremConstants::log_horizon)
      .def_readonly("horizon", &TheoremConstants::horizon)
      .def_readonly("c_star", &TheoremConstants::c_star)
      .def_readonly("escape_bound", &TheoremConstants::escape_bound)
      .def("trace", [](const TheoremConstants& c) {
        std::ostringstream out;
        write_derivation_trace(out, c);
        return out.str();
      });

  m.def("derive_constants", &derive_constants, py::arg("eps"), py::arg("delta"), py::arg("r"), py::arg("ell"),
        py::arg("prob_target") = 0.1);
  m.def("hajek_escape_bound", &hajek_escape_bound, py::arg("lambda_"), py::arg("ell"), py::arg("horizon"),
        py::arg("d_bound"), py::arg("p_ell"));
  m.def("lemma_tail_bound",
        [](double x_min, std::function<double(std::uint64_t)> tail, std::function<double(double)> f,
           std::uint64_t terms, double remainder) {
          return lemma_tail_bound({x_min, std::move(tail), std::move(f), terms, remainder});
        },
        py::arg("x_min"), py::arg("tail"), py::arg("f"), py::arg("terms"), py::arg("remainder_bound") = 0.0);

  py::class_<MgfCheck>(m, "MgfCheck")
      .def_readonly("gamma", &MgfCheck::gamma)
      .def_readonly("estimate", &MgfCheck::estimate)
      .def_readonly("bound", &MgfCheck::bound)
      .def_property_readonly("verdict", [](const MgfCheck& c) { return std::string(to_string(c.verdict)); });
  m.def("mgf_bound_check", [](const JumpDistribution& jumps, double delta, double r) {
        return mgf_bound_check(jumps, delta, r);
      }, py::arg("jumps"), py::arg("delta"), py::arg("r"));

  py::class_<InequalityResult>(m, "InequalityResult")
      .def_readonly("name", &InequalityResult::name)
      .def_readonly("parameters", &InequalityResult::parameters)
      .def_readonly("lhs", &InequalityResult::lhs)
      .def_readonly("rhs", &InequalityResult::rhs)
      .def_readonly("margin", &InequalityResult::margin)
      .def_readonly("holds", &InequalityResult::holds)
      .def_readonly("log_scale", &InequalityResult::log_scale)
      .def("__repr__", [](const InequalityResult& r) {
        return "<InequalityResult " + r.name + " " + r.parameters + (r.holds ? " holds>" : " FAILS>");
      });

  m.def("mutation_tail_chain", &mutation_tail_chain, py::arg("n"), py::arg("j"));
  m.def("matching_jump_bound", &matching_jump_bound, py::arg("m"), py::arg("h"), py::arg("j"));
  m.def("diversity_bound", &diversity_bound, py::arg("mu"), py::arg("phi"), py::arg("j"));
  m.def("comma_lambda_bounds", &comma_lambda_bounds, py::arg("n"), py::arg("lambda_offspring"), py::arg("j"));

  py::class_<SelectionExpectations>(m, "SelectionExpectations")
      .def_readonly("expected", &SelectionExpectations::expected)
      .def_readonly("premise_holds", &SelectionExpectations::premise_holds)
      .def_readonly("sum_equals_mu", &SelectionExpectations::sum_equals_mu)
      .def_readonly("results", &SelectionExpectations::results)
      .def_property_readonly("status",
                             [](const SelectionExpectations& s) { return std::string(to_string(s.status)); });
  m.def("pea_prime_expected_selections",
        [](const std::vector<double>& f) { return pea_prime_expected_selections(f); }, py::arg("fitnesses"));

  m.def("run_cli", [](std::vector<std::string> args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(std::move(args), out, err);
        return py::make_tuple(code, out.str(), err.str());
      }, py::arg("args"), "Run the command-line front end; returns (exit_code, stdout, stderr).");
}
