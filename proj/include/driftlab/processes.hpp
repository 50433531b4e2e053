#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "driftlab/process.hpp"

namespace drift {

// ---------------------------------------------------------------------------
// Counterexample chain
// ---------------------------------------------------------------------------

/// On ]0, n]: X + up_jump with probability up_prob = e^{-n}, else X - 1.
/// Every other state is absorbing. Start state n, natural window [0, n].
struct CounterexampleConfig {
  int n = 0;
  std::int64_t up_jump = 0;  ///< ceil(2 e^n)
  double up_prob = 0.0;      ///< e^{-n}

  static CounterexampleConfig make(int n);

  /// Law of Delta for states in ]0, n].
  JumpDistribution active_jumps() const;
};

ProcessPtr counterexample_chain(int n);

// ---------------------------------------------------------------------------
// Signed geometric walk
// ---------------------------------------------------------------------------

/// P(Delta = +j) = c_plus (1+delta)^{-j}, P(Delta = -j) = c_minus (1+delta)^{-j}
/// for j >= 1. The weights are the unique solution with total mass 1 and
/// drift exactly eps; r = 1 + delta is the smallest r for which
/// P(|Delta| >= j) <= r (1+delta)^{-j} holds for every j >= 0.
struct GeometricWalkConfig {
  double eps = 0.0;
  double delta = 0.0;
  double r = 1.0;
  double c_plus = 0.0;
  double c_minus = 0.0;

  static GeometricWalkConfig make(double eps, double delta);

  /// Largest feasible drift for a given delta: (1 + delta) / delta.
  static double max_eps(double delta);

  /// Closed form: (c_plus + c_minus) (1+delta)^{-(j-1)} / delta for j >= 1, 1 for j = 0.
  double abs_tail(std::int64_t j) const;

  /// Support truncated where atoms underflow double precision.
  JumpDistribution jump_table() const;
};

/// Walk started at `start`; pick start >= b of the window in use.
ProcessPtr geometric_drift_walk(double eps, double delta, double start = 0.0);

// ---------------------------------------------------------------------------
// Deterministic walk (test fixture and CLI sanity preset)
// ---------------------------------------------------------------------------

ProcessPtr constant_step_walk(double start, double step);

// ---------------------------------------------------------------------------
// Bitstring evolutionary algorithms
// ---------------------------------------------------------------------------

using Bitstring = std::vector<std::uint8_t>;

struct BitstringEAConfig {
  int n = 0;
  int lambda_offspring = 1;
  int mu = 2;
  double mutation_rate = 0.0;  ///< 0 selects 1/n

  /// Fills in the default rate and validates; `population` additionally requires mu >= 2.
  BitstringEAConfig resolved(bool population) const;
};

/// Standard bit mutation: flips each bit independently with probability
/// `rate`. Flip positions are drawn by geometric skipping, so the cost is
/// proportional to the number of flips rather than n.
class BitMutation {
 public:
  BitMutation(int n, double rate);

  template <class Visit>
  void for_each_flip(RandomStream& rng, Visit&& visit) const {
    double position = -1.0;
    for (;;) {
      position += 1.0 + std::floor(std::log(rng.uniform_positive()) / log_keep_);
      if (!(position < static_cast<double>(n_))) return;
      visit(static_cast<int>(position));
    }
  }

  /// Number of bits flipped in one draw.
  int count_flips(RandomStream& rng) const;

  int n() const { return n_; }
  double rate() const { return rate_; }

 private:
  int n_;
  double rate_;
  double log_keep_;
};

Bitstring random_bitstring(int n, RandomStream& rng);
int count_ones(const Bitstring& x);

/// Exact law of the Hamming-distance change of the (1+1) EA on Needle at
/// distance d > 0: Delta = U - V with U ~ Bin(n-d, 1/n), V ~ Bin(d, 1/n).
JumpDistribution needle_jump_table(int n, int distance);

/// (1+1) EA with standard bit mutation on Needle (needle = all-ones string).
/// Offspring replace the parent when their fitness is not worse. Potential is
/// the number of zero bits.
ProcessPtr oneone_ea_needle(int n);

/// One generation of the (1,lambda) EA on OneMax.
struct CommaGeneration {
  int parent_zeros = 0;
  int next_zeros = 0;
  bool any_copy = false;  ///< some offspring flipped no bit
};

class OneCommaLambdaEA {
 public:
  explicit OneCommaLambdaEA(BitstringEAConfig config);

  const BitstringEAConfig& config() const { return config_; }
  /// Replaces `parent` by its best offspring (ties uniformly at random).
  CommaGeneration advance(Bitstring& parent, RandomStream& rng) const;

 private:
  BitstringEAConfig config_;
  BitMutation mutation_;
};

/// (1,lambda) EA on OneMax; potential is the number of zero bits.
ProcessPtr one_comma_lambda_ea(int n, int lambda_offspring);

// ---------------------------------------------------------------------------
// Fitness-proportional population EAs
// ---------------------------------------------------------------------------

/// Selection law of the modified algorithm for fitnesses sorted non-increasingly:
/// q_1 = f_1/f_tot - 1/mu and q_i = f_i/f_tot + 1/(mu(mu-1)) for i >= 2.
std::vector<double> pea_prime_selection(std::span<const double> fitnesses);

/// log_8 of sum_i 8^{ones_i}, evaluated with log-sum-exp.
double log8_potential(std::span<const int> ones_counts);

enum class PeaVariant { plain, prime };

struct PopulationGeneration {
  /// Parent fitness (OneMax) sorted non-increasingly; ties keep population order.
  std::vector<int> fitness;
  /// selections[i] = number of times the i-th ranked parent was mutated.
  std::vector<int> selections;
};

class PopulationEA {
 public:
  PopulationEA(PeaVariant variant, BitstringEAConfig config);

  PeaVariant variant() const { return variant_; }
  const BitstringEAConfig& config() const { return config_; }

  std::vector<Bitstring> random_population(RandomStream& rng) const;
  /// Replaces the population by the offspring population.
  PopulationGeneration advance(std::vector<Bitstring>& population, RandomStream& rng) const;

 private:
  PeaVariant variant_;
  BitstringEAConfig config_;
  BitMutation mutation_;
};

/// Plain PEA: mu fitness-proportional draws, each mutated.
ProcessPtr pea(int n, int mu);
/// Modified PEA: the best parent is mutated once, then mu - 1 draws from pea_prime_selection.
ProcessPtr pea_prime(int n, int mu);

}  // namespace drift
