#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "driftlab/random.hpp"

namespace drift {

struct JumpAtom {
  double value = 0.0;
  double prob = 0.0;
};

/// Exact law of a one-step change Delta = X_{t+1} - X_t, stored as a finite
/// set of atoms sorted by value.
class JumpDistribution {
 public:
  JumpDistribution() = default;

  /// Merges atoms with equal values and drops zero-probability atoms.
  /// Probabilities must be finite and non-negative; normalization is not
  /// enforced here (see is_normalized).
  static JumpDistribution from_atoms(std::vector<JumpAtom> atoms);
  static JumpDistribution point_mass(double value);

  std::span<const JumpAtom> atoms() const { return atoms_; }
  double total_mass() const { return total_; }
  bool is_normalized(double tolerance = 1e-12) const;

  double mean() const;
  double max_abs() const;

  /// P(|Delta| >= j).
  double abs_tail(double j) const;
  /// P(Delta <= -j): jumps toward a target that lies below.
  double lower_tail(double j) const;
  /// P(Delta >= j).
  double upper_tail(double j) const;

  /// log E(exp(gamma * |Delta|)), evaluated with log-sum-exp.
  double log_abs_mgf(double gamma) const;

  double sample(RandomStream& rng) const;

  /// CSV with columns j, P(Delta=+j), P(Delta=-j) for integer-valued laws;
  /// only rows with positive mass are written and P(Delta=0) is reported in
  /// the plus column of row j = 0.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<JumpAtom> atoms_;
  std::vector<double> cdf_;
  double total_ = 0.0;
};

}  // namespace drift
