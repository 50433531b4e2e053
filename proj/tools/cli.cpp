#include "cli.hpp"

#include <CLI11.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "driftlab/error.hpp"
#include "driftlab/processes.hpp"
#include "driftlab/stats.hpp"
#include "driftlab/theorem.hpp"

namespace drift::cli {
namespace {

template <typename T>
T parse_integer(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  require(ec == std::errc() && ptr == end, key + ": expected an integer, got '" + text + "'");
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && used > 0 && std::isfinite(value), key + ": expected a number, got '" + text + "'");
  return value;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    require(first != std::string::npos, key + ": empty list entry");
    out.push_back(parse_real(key, item.substr(first, last - first + 1)));
  }
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ',';
    out += format_real(v);
  }
  return out;
}

struct Resolved {
  std::uint64_t steps = 0;
  double log_horizon = 0.0;
  bool derived = false;
  bool capped = false;
};

// The theorem horizon L for the configured condition parameters, floored and
// capped at max_steps. P(T <= L) = P(T <= floor L) because T is an integer.
Resolved theorem_horizon(const ExperimentConfig& c, double ell, std::uint64_t max_steps) {
  const TheoremConstants k = derive_constants(c.condition.eps, c.condition.delta, c.condition.r, ell, c.prob_target);
  Resolved h;
  h.derived = true;
  h.log_horizon = k.log_horizon;
  if (k.log_horizon >= std::log(static_cast<double>(max_steps))) {
    h.steps = max_steps;
    h.capped = true;
  } else {
    h.steps = static_cast<std::uint64_t>(std::floor(k.horizon));
  }
  return h;
}

Resolved resolve_horizon(const ExperimentConfig& c) {
  if (c.horizon.empty()) return {c.budget.max_steps, std::log(static_cast<double>(c.budget.max_steps)), false, false};
  if (c.horizon == "auto") return theorem_horizon(c, c.b - c.a, c.budget.max_steps);
  const auto steps = parse_integer<std::uint64_t>("experiment.horizon", c.horizon);
  require(steps <= c.budget.max_steps, "experiment.horizon exceeds budget.max_steps");
  return {steps, std::log(static_cast<double>(steps)), false, false};
}

// CSV goes to --out when given, else to stdout; human-readable text then
// goes to stdout or, when stdout carries the CSV, to stderr.
class Output {
 public:
  Output(const std::string& path, std::ostream& out, std::ostream& err) : out_(out), err_(err) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      require(file_->good(), "cannot open output path '" + path + "' for writing");
    }
  }

  std::ostream& csv() { return file_ ? *file_ : out_; }
  std::ostream& text() { return file_ ? out_ : err_; }
  bool to_file() const { return file_ != nullptr; }

  void close() {
    if (!file_) return;
    file_->flush();
    require(file_->good(), "failed writing the output file");
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  std::unique_ptr<std::ofstream> file_;
};

Provenance header(const ExperimentConfig& c, const std::string& command) {
  Provenance p{{"command", command}};
  const Provenance rest = describe(c);
  p.insert(p.end(), rest.begin(), rest.end());
  return p;
}

int cmd_simulate(const ExperimentConfig& c, unsigned threads, Output& io) {
  const ProcessPtr process = build_process(c);
  const DriftWindow window(c.a, c.b);
  const Resolved horizon = resolve_horizon(c);
  const std::vector<Trajectory> runs = run_trials(*process, window, c.budget, threads);
  const HittingEstimate est = summarize_hits(runs, horizon.steps);

  Provenance p = header(c, "simulate");
  p.emplace_back("resolved.horizon", std::to_string(horizon.steps));
  if (horizon.derived) {
    p.emplace_back("resolved.log_theorem_horizon", format_real(horizon.log_horizon));
    p.emplace_back("resolved.horizon_capped", horizon.capped ? "true" : "false");
  }
  std::ostream& csv = io.csv();
  write_provenance(csv, p);
  csv << "trial,hit_time,truncated,x0\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    csv << i << ',';
    if (runs[i].hit_time) csv << *runs[i].hit_time;
    csv << ',' << (runs[i].truncated ? "true" : "false") << ',' << format_real(runs[i].start()) << '\n';
  }
  io.close();

  io.text() << "hitting probability within " << horizon.steps << " steps: " << format_real(est.point) << " ["
            << format_real(est.ci_low) << ", " << format_real(est.ci_high) << "] (" << est.hits << '/' << est.trials
            << " trials)\n";
  return kPass;
}

int cmd_check(const ExperimentConfig& c, unsigned threads, Output& io) {
  const ProcessPtr process = build_process(c);
  const DriftWindow window(c.a, c.b);
  const auto regimes = process->exact_jumps();
  require(c.mode != "exact" || regimes.has_value(),
          "condition.mode=exact but process '" + c.process + "' has no exact jump table");
  const bool exact = regimes.has_value() && c.mode != "empirical";

  const ConditionReport report = exact ? check_conditions_exact(*regimes, window, c.condition, c.variant)
                                       : check_conditions_empirical(harvest_jumps(*process, window, c.budget, threads),
                                                                    c.condition, c.variant);
  Provenance p = header(c, "check");
  p.emplace_back("resolved.mode", exact ? "exact" : "empirical");
  write_provenance(io.csv(), p);
  write_csv(io.csv(), report);
  io.close();
  io.text() << summary(report);
  return report.overall() == Verdict::pass ? kPass : kFail;
}

int cmd_constants(const ExperimentConfig& c, Output& io) {
  const TheoremConstants k = derive_constants(c.condition.eps, c.condition.delta, c.condition.r, c.b - c.a,
                                              c.prob_target);
  if (io.to_file()) {
    write_provenance(io.csv(), header(c, "constants"));
    write_constants_csv(io.csv(), k);
    io.close();
  }
  write_derivation_trace(io.to_file() ? io.text() : io.csv(), k);
  return kPass;
}

int cmd_bounds(const ExperimentConfig& c, Output& io) {
  SweepGrid grid = c.grid;
  grid.seed = c.budget.master_seed;
  std::ostream& csv = io.csv();
  write_provenance(csv, header(c, "bounds"));
  write_csv_header(csv);
  const SweepTotals totals = run_sweep(c.suite, grid, [&csv](const InequalityResult& r) { write_csv_row(csv, r); });
  io.close();
  io.text() << "suite " << c.suite << ": " << totals.results << " results, " << totals.failures << " failures\n";
  return totals.failures == 0 ? kPass : kFail;
}

int cmd_scaling(const ExperimentConfig& c, unsigned threads, Output& io) {
  require(c.family == "geometric-walk" || c.family == "counterexample",
          "scaling.family must be geometric-walk or counterexample");
  require(!c.ells.empty(), "scaling.ells is empty");

  std::ostream& csv = io.csv();
  write_provenance(csv, header(c, "scaling"));
  csv << "ell,horizon,log_theorem_horizon,hits,trials,escape_probability,ci_low,ci_high,half_width,escape_bound,"
         "within_bound,probe_steps,probe_hits,probe_probability,two_sided_condition,resolved\n";

  std::size_t resolved_rows = 0;
  bool violated = false;
  for (double ell : c.ells) {
    ExperimentConfig row = c;
    row.a = c.a;
    row.b = c.a + ell;
    row.start.reset();
    Resolved horizon;
    if (c.family == "geometric-walk") {
      row.process = "geometric-walk";
      horizon = theorem_horizon(row, ell, c.budget.max_steps);
    } else {
      require(ell == std::floor(ell), "scaling.ells: counterexample sizes must be integers");
      row.process = "counterexample";
      row.n = static_cast<int>(ell);
      const auto n = static_cast<std::uint64_t>(ell);
      horizon = {std::min(n, c.budget.max_steps), std::log(ell), false, n > c.budget.max_steps};
    }
    const ProcessPtr process = build_process(row);
    const DriftWindow window(row.a, row.b);

    const TheoremConstants k = derive_constants(c.condition.eps, c.condition.delta, c.condition.r, ell, c.prob_target);
    const double bound = horizon.derived && !horizon.capped
                             ? hajek_escape_bound_log(k.lambda, ell, horizon.log_horizon, k.d_bound, k.p_ell)
                             : hajek_escape_bound(k.lambda, ell, static_cast<double>(horizon.steps), k.d_bound,
                                                  k.p_ell);

    const auto regimes = process->exact_jumps();
    const bool condition_holds =
        regimes && check_conditions_exact(*regimes, window, c.condition, TailVariant::two_sided).overall() ==
                       Verdict::pass;

    const std::vector<Trajectory> runs = run_trials(*process, window, c.budget, threads);
    const HittingEstimate est = summarize_hits(runs, horizon.steps);
    const HittingEstimate probe = summarize_hits(runs, c.budget.max_steps);
    const bool within = est.point + 3.0 * est.half_width() <= bound;
    const bool resolved = condition_holds ? 3.0 * est.half_width() < bound : est.trials >= kMinEmpiricalSamples;
    if (resolved) ++resolved_rows;
    if (condition_holds && resolved && !within) violated = true;

    csv << format_real(ell) << ',' << horizon.steps << ',' << format_real(horizon.log_horizon) << ',' << est.hits
        << ',' << est.trials << ',' << format_real(est.point) << ',' << format_real(est.ci_low) << ','
        << format_real(est.ci_high) << ',' << format_real(est.half_width()) << ',' << format_real(bound) << ','
        << (within ? "true" : "false") << ',' << c.budget.max_steps << ',' << probe.hits << ','
        << format_real(probe.point) << ',' << (condition_holds ? "two-sided condition: PASS" : "two-sided condition: FAIL")
        << ',' << (resolved ? "true" : "false") << '\n';
  }
  io.close();

  if (resolved_rows == 0) {
    io.text() << "scaling: budget too small to resolve any ell (increase budget.trials)\n";
    return kFail;
  }
  io.text() << "scaling " << c.family << ": " << c.ells.size() << " rows, " << resolved_rows << " resolved, "
            << (violated ? "bound violated" : "no bound violation") << '\n';
  return violated ? kFail : kPass;
}

int cmd_list_presets(std::ostream& out) {
  for (const Preset& p : presets()) out << p.name << "  [" << p.command << "]  " << p.description << '\n';
  return kPass;
}

}  // namespace

void set_option(ExperimentConfig& c, const std::string& key, const std::string& value) {
  auto integer = [&] { return parse_integer<int>(key, value); };
  auto u64 = [&] { return parse_integer<std::uint64_t>(key, value); };
  auto real = [&] { return parse_real(key, value); };

  if (key == "experiment.name") c.name = value;
  else if (key == "experiment.horizon") {
    if (value != "auto" && !value.empty()) parse_integer<std::uint64_t>(key, value);
    c.horizon = value;
  } else if (key == "experiment.prob_target") c.prob_target = real();
  else if (key == "process.name") c.process = value;
  else if (key == "process.n") c.n = integer();
  else if (key == "process.lambda") c.lambda_offspring = integer();
  else if (key == "process.mu") c.mu = integer();
  else if (key == "process.eps") c.walk_eps = real();
  else if (key == "process.delta") c.walk_delta = real();
  else if (key == "process.start") {
    if (value == "b") c.start.reset();
    else c.start = real();
  } else if (key == "process.step") c.step = real();
  else if (key == "window.a") c.a = real();
  else if (key == "window.b") c.b = real();
  else if (key == "condition.eps") c.condition.eps = real();
  else if (key == "condition.delta") c.condition.delta = real();
  else if (key == "condition.r") c.condition.r = real();
  else if (key == "condition.j_max") c.condition.j_max = integer();
  else if (key == "condition.variant") c.variant = parse_variant(value);
  else if (key == "condition.mode") {
    require(value == "auto" || value == "exact" || value == "empirical",
            "condition.mode must be auto, exact or empirical");
    c.mode = value;
  } else if (key == "budget.trials") c.budget.trials = u64();
  else if (key == "budget.max_steps") c.budget.max_steps = u64();
  else if (key == "budget.seed") c.budget.master_seed = u64();
  else if (key == "scaling.family") c.family = value;
  else if (key == "scaling.ells") c.ells = parse_list(key, value);
  else if (key == "bounds.suite") c.suite = value;
  else if (key == "bounds.mutation_n_max") c.grid.mutation_n_max = integer();
  else if (key == "bounds.matching_m_max") c.grid.matching_m_max = integer();
  else if (key == "bounds.matching_j_max") c.grid.matching_j_max = integer();
  else if (key == "bounds.diversity_mu_max") c.grid.diversity_mu_max = integer();
  else if (key == "bounds.diversity_phi_max") c.grid.diversity_phi_max = integer();
  else if (key == "bounds.diversity_j_max") c.grid.diversity_j_max = integer();
  else if (key == "bounds.comma_n_max") c.grid.comma_n_max = integer();
  else if (key == "bounds.comma_n_points") c.grid.comma_n_points = integer();
  else if (key == "bounds.comma_lambda_max") c.grid.comma_lambda_max = integer();
  else if (key == "bounds.comma_j_max") c.grid.comma_j_max = integer();
  else if (key == "bounds.pea_vectors") c.grid.pea_vectors = integer();
  else if (key == "bounds.pea_mu_max") c.grid.pea_mu_max = integer();
  else throw ConfigError("unknown configuration key '" + key + "'");
}

void apply_settings(ExperimentConfig& config, const Settings& settings) {
  for (const auto& [key, value] : settings) set_option(config, key, value);
}

Settings read_config_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot read config file: " + std::string(e.what()));
  }
  Settings out;
  for (const auto& [section, entries] : tree) {
    require(!entries.empty() || entries.data().empty(), "config: key '" + section + "' lies outside any section");
    for (const auto& [key, node] : entries) out.emplace_back(section + "." + key, node.data());
  }
  return out;
}

Provenance describe(const ExperimentConfig& c) {
  return {
      {"experiment.name", c.name},
      {"experiment.horizon", c.horizon.empty() ? "max_steps" : c.horizon},
      {"experiment.prob_target", format_real(c.prob_target)},
      {"process.name", c.process},
      {"process.n", std::to_string(c.n)},
      {"process.lambda", std::to_string(c.lambda_offspring)},
      {"process.mu", std::to_string(c.mu)},
      {"process.eps", format_real(c.walk_eps)},
      {"process.delta", format_real(c.walk_delta)},
      {"process.start", c.start ? format_real(*c.start) : "b"},
      {"process.step", format_real(c.step)},
      {"window.a", format_real(c.a)},
      {"window.b", format_real(c.b)},
      {"condition.eps", format_real(c.condition.eps)},
      {"condition.delta", format_real(c.condition.delta)},
      {"condition.r", format_real(c.condition.r)},
      {"condition.j_max", std::to_string(c.condition.j_max)},
      {"condition.variant", std::string(to_string(c.variant))},
      {"condition.mode", c.mode},
      {"budget.trials", std::to_string(c.budget.trials)},
      {"budget.max_steps", std::to_string(c.budget.max_steps)},
      {"budget.seed", std::to_string(c.budget.master_seed)},
      {"scaling.family", c.family},
      {"scaling.ells", join(c.ells)},
      {"bounds.suite", c.suite},
      {"bounds.mutation_n_max", std::to_string(c.grid.mutation_n_max)},
      {"bounds.matching_m_max", std::to_string(c.grid.matching_m_max)},
      {"bounds.matching_j_max", std::to_string(c.grid.matching_j_max)},
      {"bounds.diversity_mu_max", std::to_string(c.grid.diversity_mu_max)},
      {"bounds.diversity_phi_max", std::to_string(c.grid.diversity_phi_max)},
      {"bounds.diversity_j_max", std::to_string(c.grid.diversity_j_max)},
      {"bounds.comma_n_max", std::to_string(c.grid.comma_n_max)},
      {"bounds.comma_n_points", std::to_string(c.grid.comma_n_points)},
      {"bounds.comma_lambda_max", std::to_string(c.grid.comma_lambda_max)},
      {"bounds.comma_j_max", std::to_string(c.grid.comma_j_max)},
      {"bounds.pea_vectors", std::to_string(c.grid.pea_vectors)},
      {"bounds.pea_mu_max", std::to_string(c.grid.pea_mu_max)},
  };
}

ProcessPtr build_process(const ExperimentConfig& c) {
  const double start = c.start.value_or(c.b);
  if (c.process == "counterexample") return counterexample_chain(c.n);
  if (c.process == "geometric-walk") return geometric_drift_walk(c.walk_eps, c.walk_delta, start);
  if (c.process == "constant-walk") return constant_step_walk(start, c.step);
  if (c.process == "needle") return oneone_ea_needle(c.n);
  if (c.process == "one-comma-lambda") return one_comma_lambda_ea(c.n, c.lambda_offspring);
  if (c.process == "pea") return pea(c.n, c.mu);
  if (c.process == "pea-prime") return pea_prime(c.n, c.mu);
  throw ConfigError("unknown process '" + c.process +
                    "' (expected counterexample, geometric-walk, constant-walk, needle, one-comma-lambda, pea or "
                    "pea-prime)");
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drift analysis laboratory: simulate processes, check drift conditions, derive bounds"};
  app.name("driftlab");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string preset_name;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  unsigned threads = 0;
  std::string mode;
  std::string horizon;
  std::string variant;
  std::string suite;
  std::vector<std::string> overrides;

  app.add_option("--config", config_path, "Sectioned key=value configuration file");
  app.add_option("--preset", preset_name, "Named preset (see list-presets)");
  app.add_option("--out", out_path, "Write the CSV here instead of stdout");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--trials", trials, "Number of trials");
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  app.add_option("--mode", mode, "Condition check mode: auto, exact, empirical");
  app.add_option("--horizon", horizon, "Hitting horizon: integer or auto");
  app.add_option("--variant", variant, "Tail condition: two_sided or one_sided");
  app.add_option("--suite", suite, "Inequality suite for bounds");
  app.add_option("--set", overrides, "Override any key, e.g. --set window.b=40")->take_all();

  auto* simulate = app.add_subcommand("simulate", "Run trials and report the hitting probability");
  auto* check = app.add_subcommand("check", "Check the drift and tail conditions");
  auto* constants = app.add_subcommand("constants", "Print the derivation of the theorem constants");
  auto* bounds = app.add_subcommand("bounds", "Sweep the analytic inequality chains");
  auto* scaling = app.add_subcommand("scaling", "Escape probability against the theorem bound over ell");
  auto* list = app.add_subcommand("list-presets", "List the compiled-in presets");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (list->parsed()) return cmd_list_presets(out);

    ExperimentConfig config;
    if (!preset_name.empty()) {
      const Preset* preset = find_preset(preset_name);
      require(preset != nullptr, "unknown preset '" + preset_name + "' (see list-presets)");
      config.name = preset->name;
      apply_settings(config, preset->settings);
    }
    if (!config_path.empty()) apply_settings(config, read_config_file(config_path));
    if (seed) config.budget.master_seed = *seed;
    if (trials) config.budget.trials = *trials;
    if (!mode.empty()) set_option(config, "condition.mode", mode);
    if (!horizon.empty()) set_option(config, "experiment.horizon", horizon);
    if (!variant.empty()) set_option(config, "condition.variant", variant);
    if (!suite.empty()) set_option(config, "bounds.suite", suite);
    for (const std::string& item : overrides) {
      const auto eq = item.find('=');
      require(eq != std::string::npos, "--set expects key=value, got '" + item + "'");
      set_option(config, item.substr(0, eq), item.substr(eq + 1));
    }

    Output io(out_path, out, err);
    if (simulate->parsed()) return cmd_simulate(config, threads, io);
    if (check->parsed()) return cmd_check(config, threads, io);
    if (constants->parsed()) return cmd_constants(config, io);
    if (bounds->parsed()) return cmd_bounds(config, io);
    if (scaling->parsed()) return cmd_scaling(config, threads, io);
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace drift::cli
