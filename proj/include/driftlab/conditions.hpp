#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "driftlab/jump_distribution.hpp"
#include "driftlab/process.hpp"
#include "driftlab/simulation.hpp"

namespace drift {

enum class TailVariant {
  two_sided,  ///< P(|Delta| >= j) <= r (1+delta)^{-j}
  one_sided,  ///< P(Delta <= -j) <= r (1+delta)^{-j} (the superseded condition)
};

enum class Verdict { pass, fail, inconclusive };

std::string_view to_string(TailVariant variant);
std::string_view to_string(Verdict verdict);
TailVariant parse_variant(std::string_view text);

/// Relative slack granted to comparisons against exact tables, whose entries
/// carry floating rounding. Matches the normalization tolerance of a table.
inline constexpr double kExactTolerance = 1e-12;

struct ConditionParams {
  double eps = 1.0;
  double delta = 1.0;
  double r = 2.0;
  int j_max = 64;

  void validate() const;
  /// log(r) - j log(1 + delta).
  double log_bound(double j) const;
  double bound(double j) const;
};

struct TailRow {
  double j = 0.0;
  double tail = 0.0;     ///< exact tail or observed frequency
  double ci_low = 0.0;   ///< equal to `tail` in exact mode
  double ci_high = 0.0;
  std::uint64_t count = 0;  ///< observations with the event (empirical mode)
  double bound = 0.0;    ///< r / (1+delta)^j, may underflow to 0
  double log_bound = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

struct ConditionReport {
  enum class Mode { exact, empirical };

  Mode mode = Mode::exact;
  TailVariant variant = TailVariant::two_sided;
  ConditionParams params;

  double drift_estimate = 0.0;
  double drift_ci_low = 0.0;
  double drift_ci_high = 0.0;
  Verdict drift_verdict = Verdict::inconclusive;
  std::uint64_t drift_samples = 0;
  std::uint64_t tail_samples = 0;

  std::vector<TailRow> tails;

  Verdict tail_verdict() const;
  Verdict overall() const;
  const TailRow* find(double j) const;
};

/// Both conditions checked against one exact jump law that is assumed to
/// govern every state of the relevant domains.
ConditionReport check_conditions_exact(const JumpDistribution& jumps, const ConditionParams& params,
                                       TailVariant variant);

/// State-dependent exact laws: the drift is the minimum over regimes meeting
/// ]a, b[, each tail the maximum over regimes meeting ]a, +inf[.
ConditionReport check_conditions_exact(std::span<const JumpRegime> regimes, const DriftWindow& window,
                                       const ConditionParams& params, TailVariant variant);

/// Statistical check: t-interval for the drift, Wilson intervals for tails.
/// Requires at least 100 samples in each domain.
ConditionReport check_conditions_empirical(const JumpSamples& samples, const ConditionParams& params,
                                           TailVariant variant);

/// Same sample set used for both conditions.
ConditionReport check_conditions_empirical(std::span<const double> samples, const ConditionParams& params,
                                           TailVariant variant);

inline constexpr std::size_t kMinEmpiricalSamples = 100;

void write_csv(std::ostream& out, const ConditionReport& report);
std::string summary(const ConditionReport& report);

}  // namespace drift
