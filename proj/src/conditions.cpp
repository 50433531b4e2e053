#include "driftlab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "driftlab/csv.hpp"
#include "driftlab/error.hpp"

namespace drift {
namespace {

// Tail indices to inspect: 0..j_max plus, for every jump larger than j_max,
// the largest integer j still covered by that jump. The tail is a step
// function and the bound decreases in j, so these points are the worst case
// over all j in N_0.
std::set<double> tail_indices(int j_max, const std::vector<double>& magnitudes) {
  std::set<double> js;
  for (int j = 0; j <= j_max; ++j) js.insert(j);
  for (double m : magnitudes) {
    const double j = std::floor(m);
    if (j > j_max) js.insert(j);
  }
  return js;
}

// Event magnitudes relevant for a variant: |Delta| or, one-sided, -Delta.
double event_key(double delta, TailVariant variant) {
  return variant == TailVariant::two_sided ? std::abs(delta) : -delta;
}

double exact_tail(const JumpDistribution& jumps, double j, TailVariant variant) {
  return variant == TailVariant::two_sided ? jumps.abs_tail(j) : jumps.lower_tail(j);
}

Verdict exact_tail_verdict(double tail, double log_bound) {
  if (tail <= 0.0) return Verdict::pass;
  return std::log(tail) <= log_bound + kExactTolerance ? Verdict::pass : Verdict::fail;
}

Verdict exact_drift_verdict(double drift, double eps) {
  return drift >= eps - kExactTolerance * std::max(1.0, std::abs(eps)) ? Verdict::pass : Verdict::fail;
}

bool meets_drift_domain(const JumpRegime& regime, const DriftWindow& window) {
  return regime.state_low < window.b() && regime.state_high > window.a();
}

bool meets_tail_domain(const JumpRegime& regime, const DriftWindow& window) {
  return regime.state_high > window.a();
}

ConditionReport exact_report(const std::vector<const JumpDistribution*>& drift_laws,
                             const std::vector<const JumpDistribution*>& tail_laws,
                             const ConditionParams& params, TailVariant variant) {
  params.validate();
  require(!drift_laws.empty(), "check_conditions_exact: no jump law covers the drift domain ]a, b[");
  require(!tail_laws.empty(), "check_conditions_exact: no jump law covers the tail domain ]a, +inf[");
  for (const auto* law : tail_laws) {
    require(law->is_normalized(), "check_conditions_exact: jump table does not sum to 1 within 1e-12");
  }
  for (const auto* law : drift_laws) {
    require(law->is_normalized(), "check_conditions_exact: jump table does not sum to 1 within 1e-12");
  }

  ConditionReport report;
  report.mode = ConditionReport::Mode::exact;
  report.variant = variant;
  report.params = params;

  double drift = std::numeric_limits<double>::infinity();
  for (const auto* law : drift_laws) drift = std::min(drift, law->mean());
  report.drift_estimate = report.drift_ci_low = report.drift_ci_high = drift;
  report.drift_verdict = exact_drift_verdict(drift, params.eps);

  std::vector<double> magnitudes;
  for (const auto* law : tail_laws) {
    for (const JumpAtom& atom : law->atoms()) {
      const double key = event_key(atom.value, variant);
      if (key > 0.0) magnitudes.push_back(key);
    }
  }
  for (double j : tail_indices(params.j_max, magnitudes)) {
    TailRow row;
    row.j = j;
    for (const auto* law : tail_laws) row.tail = std::max(row.tail, exact_tail(*law, j, variant));
    row.ci_low = row.ci_high = row.tail;
    row.log_bound = params.log_bound(j);
    row.bound = std::exp(row.log_bound);
    row.verdict = exact_tail_verdict(row.tail, row.log_bound);
    report.tails.push_back(row);
  }
  return report;
}

}  // namespace

std::string_view to_string(TailVariant variant) {
  return variant == TailVariant::two_sided ? "two_sided" : "one_sided";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

TailVariant parse_variant(std::string_view text) {
  if (text == "two_sided" || text == "two-sided") return TailVariant::two_sided;
  if (text == "one_sided" || text == "one-sided") return TailVariant::one_sided;
  throw ConfigError("unknown tail variant '" + std::string(text) + "' (expected two_sided or one_sided)");
}

void ConditionParams::validate() const {
  require(std::isfinite(eps) && eps > 0.0, "condition params: eps must be positive");
  require(std::isfinite(delta) && delta > 0.0, "condition params: delta must be positive");
  require(std::isfinite(r) && r >= 1.0, "condition params: r must be at least 1");
  require(j_max >= 1, "condition params: j_max must be at least 1");
}

double ConditionParams::log_bound(double j) const { return std::log(r) - j * std::log1p(delta); }
double ConditionParams::bound(double j) const { return std::exp(log_bound(j)); }

Verdict ConditionReport::tail_verdict() const {
  bool inconclusive = false;
  for (const TailRow& row : tails) {
    if (row.verdict == Verdict::fail) return Verdict::fail;
    if (row.verdict == Verdict::inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::inconclusive : Verdict::pass;
}

Verdict ConditionReport::overall() const {
  const Verdict tail = tail_verdict();
  if (drift_verdict == Verdict::fail || tail == Verdict::fail) return Verdict::fail;
  if (drift_verdict == Verdict::pass && tail == Verdict::pass) return Verdict::pass;
  return Verdict::inconclusive;
}

const TailRow* ConditionReport::find(double j) const {
  for (const TailRow& row : tails) {
    if (row.j == j) return &row;
  }
  return nullptr;
}

ConditionReport check_conditions_exact(const JumpDistribution& jumps, const ConditionParams& params,
                                       TailVariant variant) {
  return exact_report({&jumps}, {&jumps}, params, variant);
}

ConditionReport check_conditions_exact(std::span<const JumpRegime> regimes, const DriftWindow& window,
                                       const ConditionParams& params, TailVariant variant) {
  std::vector<const JumpDistribution*> drift_laws;
  std::vector<const JumpDistribution*> tail_laws;
  for (const JumpRegime& regime : regimes) {
    if (meets_drift_domain(regime, window)) drift_laws.push_back(&regime.jumps);
    if (meets_tail_domain(regime, window)) tail_laws.push_back(&regime.jumps);
  }
  return exact_report(drift_laws, tail_laws, params, variant);
}

ConditionReport check_conditions_empirical(const JumpSamples& samples, const ConditionParams& params,
                                           TailVariant variant) {
  params.validate();
  require(!samples.drift.empty() && !samples.tail.empty(), "check_conditions_empirical: empty samples");
  require(samples.drift.size() >= kMinEmpiricalSamples,
          "check_conditions_empirical: insufficient drift samples (" + std::to_string(samples.drift.size()) +
              " < " + std::to_string(kMinEmpiricalSamples) + ")");
  require(samples.tail.size() >= kMinEmpiricalSamples,
          "check_conditions_empirical: insufficient tail samples (" + std::to_string(samples.tail.size()) +
              " < " + std::to_string(kMinEmpiricalSamples) + ")");

  ConditionReport report;
  report.mode = ConditionReport::Mode::empirical;
  report.variant = variant;
  report.params = params;
  report.drift_samples = samples.drift.size();
  report.tail_samples = samples.tail.size();

  const SampleSummary drift = summarize(samples.drift);
  const Interval drift_ci = drift.mean_interval();
  report.drift_estimate = drift.mean;
  report.drift_ci_low = drift_ci.low;
  report.drift_ci_high = drift_ci.high;
  if (drift_ci.low >= params.eps) {
    report.drift_verdict = Verdict::pass;
  } else if (drift_ci.high < params.eps) {
    report.drift_verdict = Verdict::fail;
  } else {
    report.drift_verdict = Verdict::inconclusive;
  }

  std::vector<double> keys;
  keys.reserve(samples.tail.size());
  for (double d : samples.tail) keys.push_back(event_key(d, variant));
  std::sort(keys.begin(), keys.end());

  const std::uint64_t n = keys.size();
  const double zero_upper = zero_count_upper_limit(n);
  for (double j : tail_indices(params.j_max, keys)) {
    TailRow row;
    row.j = j;
    row.count = static_cast<std::uint64_t>(keys.end() - std::lower_bound(keys.begin(), keys.end(), j));
    row.tail = static_cast<double>(row.count) / static_cast<double>(n);
    row.log_bound = params.log_bound(j);
    row.bound = std::exp(row.log_bound);
    if (row.count == 0) {
      // Absence of events only certifies the bound when even the one-sided
      // upper confidence limit stays below it.
      row.ci_low = 0.0;
      row.ci_high = zero_upper;
      row.verdict = std::log(zero_upper) <= row.log_bound ? Verdict::pass : Verdict::inconclusive;
    } else {
      const Interval ci = wilson_interval(row.count, n);
      row.ci_low = ci.low;
      row.ci_high = ci.high;
      if (std::log(ci.high) <= row.log_bound) {
        row.verdict = Verdict::pass;
      } else if (ci.low > 0.0 && std::log(ci.low) > row.log_bound) {
        row.verdict = Verdict::fail;
      } else {
        row.verdict = Verdict::inconclusive;
      }
    }
    report.tails.push_back(row);
  }
  return report;
}

ConditionReport check_conditions_empirical(std::span<const double> samples, const ConditionParams& params,
                                           TailVariant variant) {
  JumpSamples both;
  both.drift.assign(samples.begin(), samples.end());
  both.tail = both.drift;
  return check_conditions_empirical(both, params, variant);
}

void write_csv(std::ostream& out, const ConditionReport& report) {
  out << "j,tail,ci_low,ci_high,count,bound,log_bound,verdict\n";
  for (const TailRow& row : report.tails) {
    out << format_real(row.j) << ',' << format_real(row.tail) << ',' << format_real(row.ci_low) << ','
        << format_real(row.ci_high) << ',' << row.count << ',' << format_real(row.bound) << ','
        << format_real(row.log_bound) << ',' << to_string(row.verdict) << '\n';
  }
}

std::string summary(const ConditionReport& report) {
  std::ostringstream out;
  const bool exact = report.mode == ConditionReport::Mode::exact;
  out << "mode:            " << (exact ? "exact" : "empirical") << '\n'
      << "variant:         " << to_string(report.variant) << '\n'
      << "params:          eps=" << format_real(report.params.eps) << " delta=" << format_real(report.params.delta)
      << " r=" << format_real(report.params.r) << " j_max=" << report.params.j_max << '\n'
      << "drift:           " << format_real(report.drift_estimate);
  if (!exact) {
    out << " [" << format_real(report.drift_ci_low) << ", " << format_real(report.drift_ci_high) << "] from "
        << report.drift_samples << " samples";
  }
  out << " -> " << to_string(report.drift_verdict) << '\n';

  std::size_t failed = 0;
  std::size_t open = 0;
  const TailRow* first_fail = nullptr;
  for (const TailRow& row : report.tails) {
    if (row.verdict == Verdict::fail) {
      ++failed;
      if (!first_fail) first_fail = &row;
    } else if (row.verdict == Verdict::inconclusive) {
      ++open;
    }
  }
  out << "tails:           " << report.tails.size() << " indices, " << failed << " fail, " << open
      << " inconclusive -> " << to_string(report.tail_verdict()) << '\n';
  if (first_fail) {
    out << "first failure:   j=" << format_real(first_fail->j) << " tail=" << format_real(first_fail->tail)
        << " bound=exp(" << format_real(first_fail->log_bound) << ")\n";
  }
  out << "overall:         " << to_string(report.overall()) << '\n';
  return out.str();
}

}  // namespace drift
