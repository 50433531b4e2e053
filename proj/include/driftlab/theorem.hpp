#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>

#include "driftlab/conditions.hpp"
#include "driftlab/jump_distribution.hpp"

namespace drift {

/// Every constant of the lower-bound argument for given (eps, delta, r, ell).
///
/// The escape horizon is obtained by inverting the Hajek product
/// e^{-lambda ell} L D p <= prob_target; c_star is then reported as
/// log2(L) r / ell so the horizon can be written as 2^{c_star ell / r}.
struct TheoremConstants {
  // inputs
  double eps = 0.0;
  double delta = 0.0;
  double r = 0.0;
  double ell = 0.0;
  double prob_target = 0.0;

  double gamma = 0.0;       ///< ln(1 + delta/2)
  double mgf_bound = 0.0;   ///< r (4 + delta + 2/delta) >= E(e^{gamma |Delta|})
  double c_bound = 0.0;     ///< mgf_bound / gamma^2 >= C(gamma)
  double lambda = 0.0;      ///< min{gamma, eps / (2 c_bound)}
  double p_ell = 0.0;       ///< 2 / (lambda eps)
  double d_bound = 0.0;     ///< max{r, mgf_bound} >= D(ell)
  double log_horizon = 0.0; ///< ln L
  double horizon = 0.0;     ///< L (may overflow to +inf; use log_horizon)
  double c_star = 0.0;      ///< log2(L) r / ell
  double escape_bound = 0.0;///< hajek_escape_bound at L
};

TheoremConstants derive_constants(double eps, double delta, double r, double ell, double prob_target);

/// min{1, e^{-lambda ell} L D p}, evaluated in log space. L = 0 gives 0.
double hajek_escape_bound(double lambda, double ell, double horizon, double d_bound, double p_ell);

/// Log-space variant taking ln L directly.
double hajek_escape_bound_log(double lambda, double ell, double log_horizon, double d_bound, double p_ell);

/// Rows (symbol, formula, value) of the derivation.
void write_derivation_trace(std::ostream& out, const TheoremConstants& constants);
void write_constants_csv(std::ostream& out, const TheoremConstants& constants);

// ---------------------------------------------------------------------------
// Tail-sum bound on E(f(X)) for non-decreasing f
// ---------------------------------------------------------------------------

struct LemmaInput {
  double x_min = 0.0;
  /// i -> P(X >= x_min + i); must equal 1 at i = 0 and be non-increasing.
  std::function<double(std::uint64_t)> tail;
  /// Non-decreasing and non-negative on [x_min, inf).
  std::function<double(double)> f;
  std::uint64_t terms = 0;
  /// Upper bound on sum_{i >= terms} f(x_min + i + 1) tail(i).
  double remainder_bound = 0.0;
};

/// sum_{i < terms} f(x_min + i + 1) tail(i) + remainder_bound, an upper
/// bound on E(f(X)). Monotonicity of tail and f is spot-checked on the
/// evaluated points.
double lemma_tail_bound(const LemmaInput& input);

// ---------------------------------------------------------------------------
// Moment generating function of |Delta|
// ---------------------------------------------------------------------------

struct MgfCheck {
  double gamma = 0.0;
  double estimate = 0.0;      ///< E(e^{gamma |Delta|}) (inf if it overflows)
  double log_estimate = 0.0;
  double std_error = 0.0;     ///< 0 for exact tables
  double bound = 0.0;         ///< r (4 + delta + 2/delta)
  Verdict verdict = Verdict::inconclusive;
};

/// Exact check. Rejects tables that violate the two-sided tail condition for (delta, r).
MgfCheck mgf_bound_check(const JumpDistribution& jumps, double delta, double r);

/// Empirical check: pass when the sample mean is within the bound, fail when
/// it exceeds the bound by more than five standard errors. Rejects samples
/// whose two-sided tail check reports a failure.
MgfCheck mgf_bound_check(std::span<const double> samples, double delta, double r);

}  // namespace drift
