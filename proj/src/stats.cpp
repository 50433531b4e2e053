#include "driftlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "driftlab/error.hpp"

namespace drift {

Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  require(trials > 0, "wilson_interval: trials must be positive");
  require(hits <= trials, "wilson_interval: hits exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // Endpoints are pinned so that low <= p <= high survives rounding at 0 and 1.
  Interval ci{std::clamp(centre - spread, 0.0, 1.0), std::clamp(centre + spread, 0.0, 1.0)};
  if (hits == 0) ci.low = 0.0;
  if (hits == trials) ci.high = 1.0;
  ci.low = std::min(ci.low, p);
  ci.high = std::max(ci.high, p);
  return ci;
}

double zero_count_upper_limit(std::uint64_t trials, double alpha) {
  require(trials > 0, "zero_count_upper_limit: trials must be positive");
  return -std::expm1(std::log(alpha) / static_cast<double>(trials));
}

double student_t_quantile(double dof, double probability) {
  require(dof > 0.0, "student_t_quantile: degrees of freedom must be positive");
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, probability);
}

double SampleSummary::std_error() const {
  return count > 0 ? std_dev / std::sqrt(static_cast<double>(count)) : 0.0;
}

Interval SampleSummary::mean_interval() const {
  if (count < 2) return {mean, mean};
  const double t = student_t_quantile(static_cast<double>(count - 1), 0.975);
  const double hw = t * std_error();
  return {mean - hw, mean + hw};
}

SampleSummary summarize(std::span<const double> values) {
  SampleSummary s;
  double m2 = 0.0;
  for (double x : values) {
    ++s.count;
    const double delta = x - s.mean;
    s.mean += delta / static_cast<double>(s.count);
    m2 += delta * (x - s.mean);
  }
  if (s.count > 1) s.std_dev = std::sqrt(m2 / static_cast<double>(s.count - 1));
  return s;
}

}  // namespace drift
