#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drift {

/// One verified link of an inequality chain. `holds` is decided by exact
/// arithmetic where the link admits it; lhs and rhs are the rounded values
/// (natural logarithms when `log_scale` is set) and always satisfy
/// holds == (lhs <= rhs).
struct InequalityResult {
  std::string name;
  std::string parameters;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< rhs - lhs on the reported scale
  bool holds = false;
  bool log_scale = false;
};

using InequalityChain = std::vector<InequalityResult>;

/// Standard bit mutation: P(>= j bits flip) <= C(n,j) n^{-j} <= 1/j! <= 2 (1/2)^j.
/// Exact integer arithmetic for n <= 200, log space beyond. 1 <= j <= n <= 10^4.
InequalityChain mutation_tail_chain(int n, int j);

/// Matching jump bound: sum_{i=j}^{m-j} (2h)^i / m^{2i} <= m (2h)^j / m^{2j} <= m^{-(j-1)}
/// and min{1, e m^2 / m^{j-1}} = min{1, e / m^{j-3}} <= 22 (1/2)^j. Requires m >= 2,
/// 1 <= h, 2h <= m, j >= 0; an empty sum (j > m - j) counts as 0.
InequalityChain matching_jump_bound(int m, int h, int j);

/// Diversity potential: (1/mu) sum_{k=0}^{phi} 1/(phi-k+j)! = (1/mu) sum_{k=0}^{phi} 1/(k+j)!
/// <= (1/mu) sum_{k>=0} 1/(k+j)! <= e / (mu j!). mu >= 1, phi >= 0, j >= 1.
InequalityChain diversity_bound(int mu, int phi, int j);

/// (1,lambda) EA: offspring union bound chain, self-loop lower bound with
/// c = 1 - 1/(2e), and the jump-to-self-loop ratio chain. n >= 2, lambda >= 1, 0 <= j <= n.
InequalityChain comma_lambda_bounds(int n, int lambda_offspring, int j);

enum class SelectionStatus { ok, premise_fail, inequality_fail };
std::string_view to_string(SelectionStatus status);

struct SelectionExpectations {
  std::vector<double> expected;  ///< E(S_i) per ranked individual
  bool premise_holds = false;    ///< f_i/f_tot <= 2/mu for all i and f_1/f_tot >= 1/mu
  bool sum_equals_mu = false;    ///< decided in exact rational arithmetic
  SelectionStatus status = SelectionStatus::ok;
  InequalityChain results;
};

/// Expected selection counts of the modified PEA for sorted fitnesses, with
/// E(S_i) <= 2 and sum_i E(S_i) = mu checked exactly.
SelectionExpectations pea_prime_expected_selections(std::span<const double> fitnesses);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepGrid {
  int mutation_n_max = 200;
  int matching_m_max = 200;
  int matching_j_max = 64;
  int diversity_mu_max = 20;
  int diversity_phi_max = 50;
  int diversity_j_max = 20;
  int comma_n_max = 10000;
  int comma_n_points = 40;
  int comma_lambda_max = 64;
  int comma_j_max = 64;
  int pea_vectors = 10000;
  int pea_mu_max = 20;
  std::uint64_t seed = 1;
};

struct SweepTotals {
  std::uint64_t results = 0;
  std::uint64_t failures = 0;
};

using ResultSink = std::function<void(const InequalityResult&)>;

/// Suites: mutation, matching, diversity, comma-lambda, pea-prime, all.
SweepTotals run_sweep(std::string_view suite, const SweepGrid& grid, const ResultSink& sink);

/// Up to `points` distinct integers spread logarithmically over [low, high].
std::vector<int> log_spaced(int low, int high, int points);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const InequalityResult& result);

}  // namespace drift
