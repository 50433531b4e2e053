#pragma once

#include <cstdint>
#include <span>

namespace drift {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double low = 0.0;
  double high = 0.0;

  double half_width() const { return 0.5 * (high - low); }
  bool contains(double x) const { return low <= x && x <= high; }
};

/// Wilson score interval for `hits` successes out of `trials`.
Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kZ95);

/// Exact one-sided upper confidence limit for a proportion when no success
/// was observed in `trials` draws: 1 - alpha^(1/trials).
double zero_count_upper_limit(std::uint64_t trials, double alpha = 0.05);

/// Quantile of Student's t distribution with `dof` degrees of freedom.
double student_t_quantile(double dof, double probability);

struct SampleSummary {
  std::uint64_t count = 0;
  double mean = 0.0;
  double std_dev = 0.0;

  double std_error() const;
  /// Two-sided 95% t-interval for the mean.
  Interval mean_interval() const;
};

/// Mean and standard deviation (Welford).
SampleSummary summarize(std::span<const double> values);

}  // namespace drift
