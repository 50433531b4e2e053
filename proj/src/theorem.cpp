#include "driftlab/theorem.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

#include "driftlab/csv.hpp"
#include "driftlab/error.hpp"
#include "driftlab/stats.hpp"

namespace drift {

TheoremConstants derive_constants(double eps, double delta, double r, double ell, double prob_target) {
  require(std::isfinite(eps) && eps > 0.0, "derive_constants: eps must be positive");
  require(std::isfinite(delta) && delta > 0.0, "derive_constants: delta must be positive");
  require(std::isfinite(r) && r >= 1.0, "derive_constants: r must be at least 1");
  require(std::isfinite(ell) && ell > 0.0, "derive_constants: ell must be positive");
  require(prob_target > 0.0 && prob_target < 1.0, "derive_constants: prob_target must lie in (0, 1)");

  TheoremConstants c;
  c.eps = eps;
  c.delta = delta;
  c.r = r;
  c.ell = ell;
  c.prob_target = prob_target;

  c.gamma = std::log1p(delta / 2.0);
  c.mgf_bound = r * (4.0 + delta + 2.0 / delta);
  c.c_bound = c.mgf_bound / (c.gamma * c.gamma);
  c.lambda = std::min(c.gamma, eps / (2.0 * c.c_bound));
  c.p_ell = 2.0 / (c.lambda * eps);
  // D <= r when 1 is the maximum, D <= E(e^{gamma |Delta|}) otherwise.
  c.d_bound = std::max(r, c.mgf_bound);

  c.log_horizon = std::log(prob_target) + c.lambda * ell - std::log(c.d_bound) - std::log(c.p_ell);
  c.horizon = std::exp(c.log_horizon);
  c.c_star = c.log_horizon / std::numbers::ln2 * r / ell;
  c.escape_bound = hajek_escape_bound_log(c.lambda, ell, c.log_horizon, c.d_bound, c.p_ell);
  return c;
}

double hajek_escape_bound_log(double lambda, double ell, double log_horizon, double d_bound, double p_ell) {
  require(lambda >= 0.0 && ell >= 0.0, "hajek_escape_bound: lambda and ell must be non-negative");
  require(d_bound > 0.0 && p_ell > 0.0, "hajek_escape_bound: D and p must be positive");
  if (std::isinf(log_horizon) && log_horizon < 0.0) return 0.0;
  const double log_bound = -lambda * ell + log_horizon + std::log(d_bound) + std::log(p_ell);
  return log_bound >= 0.0 ? 1.0 : std::exp(log_bound);
}

double hajek_escape_bound(double lambda, double ell, double horizon, double d_bound, double p_ell) {
  require(horizon >= 0.0, "hajek_escape_bound: horizon must be non-negative");
  if (horizon == 0.0) return 0.0;
  return hajek_escape_bound_log(lambda, ell, std::log(horizon), d_bound, p_ell);
}

void write_derivation_trace(std::ostream& out, const TheoremConstants& c) {
  auto line = [&out](const char* symbol, const char* formula, double value) {
    out << symbol << " | " << formula << " | " << format_real(value) << '\n';
  };
  line("eps", "input: drift lower bound", c.eps);
  line("delta", "input: tail decay rate", c.delta);
  line("r", "input: tail prefactor r(ell)", c.r);
  line("ell", "input: window length b - a", c.ell);
  line("target", "input: escape probability target", c.prob_target);
  line("gamma", "ln(1 + delta/2)", c.gamma);
  line("M", "r (4 + delta + 2/delta) >= E(e^{gamma|Delta|})", c.mgf_bound);
  line("C", "M / gamma^2 >= C(gamma)", c.c_bound);
  line("lambda", "min{gamma, eps / (2 C)}", c.lambda);
  line("p", "2 / (lambda eps)", c.p_ell);
  line("D", "max{r, M} >= D(ell)", c.d_bound);
  line("ln L", "ln(target) + lambda ell - ln D - ln p", c.log_horizon);
  line("L", "largest L with e^{-lambda ell} L D p <= target", c.horizon);
  line("c*", "log2(L) r / ell", c.c_star);
  line("bound", "min{1, e^{-lambda ell} L D p}", c.escape_bound);
}

void write_constants_csv(std::ostream& out, const TheoremConstants& c) {
  out << "eps,delta,r,ell,prob_target,gamma,mgf_bound,c_bound,lambda,p_ell,d_bound,log_horizon,horizon,c_star,"
         "escape_bound\n";
  const double values[] = {c.eps,   c.delta, c.r,       c.ell,         c.prob_target,
                           c.gamma, c.mgf_bound, c.c_bound, c.lambda, c.p_ell,
                           c.d_bound, c.log_horizon, c.horizon, c.c_star, c.escape_bound};
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_real(v);
    first = false;
  }
  out << '\n';
}

double lemma_tail_bound(const LemmaInput& input) {
  require(static_cast<bool>(input.tail) && static_cast<bool>(input.f), "lemma_tail_bound: tail and f are required");
  require(std::isfinite(input.x_min), "lemma_tail_bound: x_min must be finite");
  require(std::isfinite(input.remainder_bound) && input.remainder_bound >= 0.0,
          "lemma_tail_bound: divergent configuration (remainder bound must be finite and non-negative)");

  const double tail0 = input.tail(0);
  require(std::abs(tail0 - 1.0) <= 1e-12, "lemma_tail_bound: tail(0) must equal 1");

  double sum = 0.0;
  double previous_tail = tail0;
  double previous_f = input.f(input.x_min);
  // Repeated tail terms overcount E(f(X)) only when f >= 0.
  require(previous_f >= 0.0, "lemma_tail_bound: f(x_min) must be non-negative");
  for (std::uint64_t i = 0; i < input.terms; ++i) {
    const double tail = i == 0 ? tail0 : input.tail(i);
    require(tail >= 0.0 && tail <= previous_tail + 1e-12, "lemma_tail_bound: tail must be non-increasing in [0, 1]");
    const double fx = input.f(input.x_min + static_cast<double>(i) + 1.0);
    require(std::isfinite(fx), "lemma_tail_bound: f is not finite on the evaluated points");
    require(fx >= previous_f - 1e-12 * std::max(1.0, std::abs(previous_f)),
            "lemma_tail_bound: f must be non-decreasing");
    sum += fx * tail;
    previous_tail = tail;
    previous_f = fx;
  }
  return sum + input.remainder_bound;
}

MgfCheck mgf_bound_check(const JumpDistribution& jumps, double delta, double r) {
  ConditionParams params{1.0, delta, r, 64};
  const ConditionReport tails = check_conditions_exact(jumps, params, TailVariant::two_sided);
  require(tails.tail_verdict() == Verdict::pass,
          "mgf_bound_check: jump table violates the two-sided tail condition for the given (delta, r)");

  MgfCheck check;
  check.gamma = std::log1p(delta / 2.0);
  check.bound = r * (4.0 + delta + 2.0 / delta);
  check.log_estimate = jumps.log_abs_mgf(check.gamma);
  check.estimate = std::exp(check.log_estimate);
  check.verdict = check.log_estimate <= std::log(check.bound) + kExactTolerance ? Verdict::pass : Verdict::fail;
  return check;
}

MgfCheck mgf_bound_check(std::span<const double> samples, double delta, double r) {
  ConditionParams params{1.0, delta, r, 64};
  const ConditionReport tails = check_conditions_empirical(samples, params, TailVariant::two_sided);
  require(tails.tail_verdict() != Verdict::fail,
          "mgf_bound_check: samples violate the two-sided tail condition for the given (delta, r)");

  MgfCheck check;
  check.gamma = std::log1p(delta / 2.0);
  check.bound = r * (4.0 + delta + 2.0 / delta);
  std::vector<double> values;
  values.reserve(samples.size());
  for (double x : samples) values.push_back(std::exp(check.gamma * std::abs(x)));
  const SampleSummary s = summarize(values);
  check.estimate = s.mean;
  check.log_estimate = std::log(s.mean);
  check.std_error = s.std_error();
  if (s.mean <= check.bound) {
    check.verdict = Verdict::pass;
  } else if (s.mean - 5.0 * check.std_error > check.bound) {
    check.verdict = Verdict::fail;
  } else {
    check.verdict = Verdict::inconclusive;
  }
  return check;
}

}  // namespace drift
