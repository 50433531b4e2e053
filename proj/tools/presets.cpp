#include <algorithm>

#include "cli.hpp"

namespace drift::cli {

const std::vector<Preset>& presets() {
  static const std::vector<Preset> registry = {
      {"counterexample-n15", "simulate",
       "counterexample chain n=15 started at n; hitting probability within n steps",
       {{"process.name", "counterexample"}, {"process.n", "15"},
        {"window.a", "0"}, {"window.b", "15"},
        {"condition.eps", "1"}, {"condition.delta", "1"}, {"condition.r", "2"},
        {"budget.trials", "10000"}, {"budget.max_steps", "15"}, {"budget.seed", "15"},
        {"experiment.horizon", "15"}}},
      {"counterexample-onesided", "check",
       "counterexample chain n=15 against the one-sided tail condition (eps=1, delta=1, r=2)",
       {{"process.name", "counterexample"}, {"process.n", "15"},
        {"window.a", "0"}, {"window.b", "15"},
        {"condition.eps", "1"}, {"condition.delta", "1"}, {"condition.r", "2"},
        {"condition.variant", "one_sided"}, {"condition.mode", "exact"}}},
      {"counterexample-twosided", "check",
       "counterexample chain n=15 against the two-sided tail condition (eps=1, delta=1, r=2)",
       {{"process.name", "counterexample"}, {"process.n", "15"},
        {"window.a", "0"}, {"window.b", "15"},
        {"condition.eps", "1"}, {"condition.delta", "1"}, {"condition.r", "2"},
        {"condition.variant", "two_sided"}, {"condition.mode", "exact"}}},
      {"counterexample-scaling", "scaling",
       "counterexample family n in {5,10,15,20}: escape probability close to 1 at horizon n",
       {{"scaling.family", "counterexample"}, {"scaling.ells", "5,10,15,20"},
        {"condition.eps", "1"}, {"condition.delta", "1"}, {"condition.r", "2"},
        {"budget.trials", "10000"}, {"budget.max_steps", "25"}, {"budget.seed", "2"},
        {"experiment.prob_target", "0.1"}}},
      {"geometric-walk-l30", "simulate",
       "geometric drift walk (eps=0.2, delta=1) on [0, 30], horizon derived from the theorem",
       {{"process.name", "geometric-walk"}, {"process.eps", "0.2"}, {"process.delta", "1"},
        {"window.a", "0"}, {"window.b", "30"},
        {"condition.eps", "0.2"}, {"condition.delta", "1"}, {"condition.r", "2"},
        {"budget.trials", "200"}, {"budget.max_steps", "1000000"}, {"budget.seed", "30"},
        {"experiment.horizon", "auto"}, {"experiment.prob_target", "0.1"}}},
      {"geometric-scaling", "scaling",
       "geometric drift walk (eps=0.2, delta=1), ell in {10,20,30,40}, 200 trials, 10^6 steps",
       {{"scaling.family", "geometric-walk"}, {"scaling.ells", "10,20,30,40"},
        {"process.eps", "0.2"}, {"process.delta", "1"},
        {"condition.eps", "0.2"}, {"condition.delta", "1"}, {"condition.r", "2"},
        {"budget.trials", "200"}, {"budget.max_steps", "1000000"}, {"budget.seed", "1"},
        {"experiment.prob_target", "0.1"}}},
      {"geometric-walk-empirical", "check",
       "geometric drift walk checked from harvested samples (eps=0.1, delta=0.5, r=2, j <= 24)",
       {{"process.name", "geometric-walk"}, {"process.eps", "0.2"}, {"process.delta", "1"},
        {"window.a", "0"}, {"window.b", "30"},
        {"condition.eps", "0.1"}, {"condition.delta", "0.5"}, {"condition.r", "2"}, {"condition.j_max", "24"},
        {"condition.mode", "empirical"},
        {"budget.trials", "200"}, {"budget.max_steps", "2000"}, {"budget.seed", "7"}}},
      {"needle-n50-twosided", "check",
       "(1+1) EA on a needle, n=50, Hamming distance potential on [0, 12] (eps=0.5, delta=1, r=2)",
       {{"process.name", "needle"}, {"process.n", "50"},
        {"window.a", "0"}, {"window.b", "12"},
        {"condition.eps", "0.5"}, {"condition.delta", "1"}, {"condition.r", "2"},
        {"condition.variant", "two_sided"}, {"condition.mode", "exact"}}},
      {"unit-walk", "simulate",
       "deterministic -1 walk from b=10 to a=0, one trial",
       {{"process.name", "constant-walk"}, {"process.step", "-1"},
        {"window.a", "0"}, {"window.b", "10"},
        {"budget.trials", "1"}, {"budget.max_steps", "100"}}},
      {"constants-default", "constants",
       "theorem constants for eps=1, delta=1, r=2, ell=10^4",
       {{"condition.eps", "1"}, {"condition.delta", "1"}, {"condition.r", "2"},
        {"window.a", "0"}, {"window.b", "10000"}, {"experiment.prob_target", "0.1"}}},
      {"bounds-mutation", "bounds", "mutation chain, 1 <= j <= n <= 200", {{"bounds.suite", "mutation"}}},
      {"bounds-matching", "bounds", "matching chain, m <= 200, h <= m/2, j <= 64", {{"bounds.suite", "matching"}}},
      {"bounds-diversity", "bounds", "diversity chain, mu <= 20, phi <= 50, j <= 20",
       {{"bounds.suite", "diversity"}}},
      {"bounds-comma-lambda", "bounds", "(1,lambda) chain, n log-sampled in [2, 10^4], lambda <= 64, j <= 64",
       {{"bounds.suite", "comma-lambda"}}},
      {"bounds-pea-prime", "bounds", "modified PEA expected selections, random fitness in [1, 2]",
       {{"bounds.suite", "pea-prime"}, {"bounds.pea_vectors", "1000"}}},
      {"bounds-all", "bounds", "every inequality suite", {{"bounds.suite", "all"}, {"bounds.pea_vectors", "1000"}}},
  };
  return registry;
}

const Preset* find_preset(std::string_view name) {
  const auto& all = presets();
  const auto it = std::find_if(all.begin(), all.end(), [&](const Preset& p) { return p.name == name; });
  return it == all.end() ? nullptr : &*it;
}

}  // namespace drift::cli
