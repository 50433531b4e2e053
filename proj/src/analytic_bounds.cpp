#include "driftlab/analytic_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "driftlab/csv.hpp"
#include "driftlab/error.hpp"
#include "driftlab/random.hpp"

namespace drift {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr int kExactLimit = 200;
constexpr int kFactorialExactLimit = 300;
// Values below e^-700 are reported as natural logarithms.
constexpr double kLinearFloor = -700.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string params(std::initializer_list<std::pair<const char*, long long>> values) {
  std::string out;
  for (const auto& [key, value] : values) {
    if (!out.empty()) out += ';';
    out += key;
    out += '=';
    out += std::to_string(value);
  }
  return out;
}

double log_of(const cpp_int& x) {
  const unsigned bits = boost::multiprecision::msb(x);
  if (bits < 1000) return std::log(x.convert_to<double>());
  const unsigned shift = bits - 900;
  cpp_int head = x >> shift;
  return std::log(head.convert_to<double>()) + shift * std::numbers::ln2;
}

// num / den for num >= 0, den > 0, correct to a few ulps even when the
// operands themselves overflow a double.
double ratio_to_double(const cpp_int& num, const cpp_int& den) {
  if (num == 0) return 0.0;
  const long shift = static_cast<long>(boost::multiprecision::msb(num)) -
                     static_cast<long>(boost::multiprecision::msb(den));
  cpp_int q = shift <= 60 ? cpp_int(num << static_cast<unsigned>(60 - shift)) / den
                          : num / cpp_int(den << static_cast<unsigned>(shift - 60));
  return std::ldexp(q.convert_to<double>(), static_cast<int>(shift - 60));
}

struct Exact {
  cpp_int num;
  cpp_int den = 1;

  double log() const { return num == 0 ? -kInf : log_of(num) - log_of(den); }
  double value() const { return ratio_to_double(num, den); }
};

Exact from_rational(const cpp_rational& q) {
  return {boost::multiprecision::numerator(q), boost::multiprecision::denominator(q)};
}

int compare(const Exact& a, const Exact& b) {
  const cpp_int lhs = a.num * b.den;
  const cpp_int rhs = b.num * a.den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

int compare(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

// Make the reported values agree with the decided comparison; rounding may
// otherwise invert a tight or exactly equal pair.
InequalityResult finalize(InequalityResult r, int cmp) {
  if (cmp == 0) {
    r.rhs = r.lhs;
  } else if (cmp < 0 && r.lhs > r.rhs) {
    r.rhs = r.lhs;
  } else if (cmp > 0 && r.lhs <= r.rhs) {
    r.lhs = std::nextafter(r.rhs, kInf);
  }
  r.holds = cmp <= 0;
  r.margin = r.rhs - r.lhs;
  return r;
}

InequalityResult from_logs(std::string name, std::string parameters, double log_lhs, double log_rhs, int cmp) {
  InequalityResult r;
  r.name = std::move(name);
  r.parameters = std::move(parameters);
  const bool lhs_zero = std::isinf(log_lhs) && log_lhs < 0.0;
  r.log_scale = !lhs_zero && (log_lhs < kLinearFloor || log_rhs < kLinearFloor);
  if (r.log_scale) {
    r.lhs = log_lhs;
    r.rhs = log_rhs;
  } else {
    r.lhs = lhs_zero ? 0.0 : std::exp(log_lhs);
    r.rhs = std::exp(log_rhs);
  }
  return finalize(std::move(r), cmp);
}

InequalityResult from_exact(std::string name, std::string parameters, const Exact& lhs, const Exact& rhs) {
  const int cmp = compare(lhs, rhs);
  const double log_lhs = lhs.log();
  const double log_rhs = rhs.log();
  InequalityResult r;
  r.name = std::move(name);
  r.parameters = std::move(parameters);
  const bool lhs_zero = lhs.num == 0;
  r.log_scale = !lhs_zero && (log_lhs < kLinearFloor || log_rhs < kLinearFloor);
  if (r.log_scale) {
    r.lhs = log_lhs;
    r.rhs = log_rhs;
  } else {
    r.lhs = lhs.value();
    r.rhs = rhs.value();
  }
  return finalize(std::move(r), cmp);
}

cpp_int power(long long base, int exponent) {
  cpp_int out = 1;
  cpp_int b = base;
  for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
    if (e & 1u) out *= b;
    if (e > 1) b *= b;
  }
  return out;
}

cpp_int factorial(int k) {
  cpp_int out = 1;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

cpp_int falling(int n, int j) {
  cpp_int out = 1;
  for (int i = 0; i < j; ++i) out *= n - i;
  return out;
}

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// log(C(n,j) n^{-j}) = sum_{i<j} log(1 - i/n) - log j!
double log_choose_over_power(int n, int j) {
  double s = 0.0;
  for (int i = 1; i < j; ++i) s += std::log1p(-static_cast<double>(i) / n);
  return s - log_factorial(j);
}

// log P(Bin(n, 1/n) >= j).
double log_binomial_upper_tail(int n, int j) {
  const double p = 1.0 / n;
  const double lq = std::log1p(-p);
  const double lp = std::log(p);
  double peak = -kInf;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n - j + 1));
  for (int k = j; k <= n; ++k) {
    const double t = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * lp + (n - k) * lq;
    terms.push_back(t);
    peak = std::max(peak, t);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

// lambda C(n,j) n^{-j} <= lambda / j! <= 2 lambda 2^{-j}; lambda = 1 gives the mutation links.
void append_union_links(InequalityChain& out, const std::string& prefix, const std::string& p, int n, int j,
                        int lambda) {
  if (n <= kExactLimit) {
    const cpp_int jf = factorial(j);
    Exact lhs{falling(n, j) * lambda, jf * power(n, j)};
    Exact rhs{cpp_int(lambda), jf};
    out.push_back(from_exact(prefix + "choose_le_inverse_factorial", p, lhs, rhs));
  } else {
    const double s = log_choose_over_power(n, j) + log_factorial(j);  // <= 0, zero iff j <= 1
    const double g = std::log(static_cast<double>(lambda)) - log_factorial(j);
    out.push_back(from_logs(prefix + "choose_le_inverse_factorial", p, g + s, g, j <= 1 ? 0 : -1));
  }
  if (j <= kFactorialExactLimit) {
    Exact lhs{cpp_int(lambda), factorial(j)};
    Exact rhs{cpp_int(2 * lambda), power(2, j)};
    out.push_back(from_exact(prefix + "inverse_factorial_le_geometric", p, lhs, rhs));
  } else {
    const double ll = std::log(static_cast<double>(lambda));
    const double lhs = ll - log_factorial(j);
    const double rhs = ll + (1.0 - j) * std::numbers::ln2;
    out.push_back(from_logs(prefix + "inverse_factorial_le_geometric", p, lhs, rhs, compare(lhs, rhs)));
  }
}

// Exact binary value of a finite double.
cpp_rational exact_rational(double x) {
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  cpp_rational q = scaled;
  const int shift = exponent - 53;
  if (shift >= 0) {
    q *= cpp_rational(cpp_int(1) << shift);
  } else {
    q /= cpp_rational(cpp_int(1) << -shift);
  }
  return q;
}

}  // namespace

InequalityChain mutation_tail_chain(int n, int j) {
  require(n >= 1 && n <= 10000, "mutation_tail_chain: n must lie in [1, 10^4]");
  require(j >= 1 && j <= n, "mutation_tail_chain: j must lie in [1, n]");
  const std::string p = params({{"n", n}, {"j", j}});
  InequalityChain out;

  if (n <= kExactLimit) {
    // P(Bin(n, 1/n) >= j) n^n = sum_{k >= j} C(n,k) (n-1)^{n-k}
    cpp_int tail = 0;
    cpp_int choose = 1;
    cpp_int weight = 1;
    for (int k = n; k >= j; --k) {
      tail += choose * weight;
      if (k == j) break;
      choose = choose * k / (n - k + 1);
      weight *= n - 1;
    }
    const cpp_int nn = power(n, n);
    Exact union_bound{choose * power(n, n - j), nn};
    out.push_back(from_exact("mutation.flip_tail_le_union", p, Exact{tail, nn}, union_bound));
  } else {
    const double tail = log_binomial_upper_tail(n, j);
    const double choose = log_choose_over_power(n, j);
    out.push_back(from_logs("mutation.flip_tail_le_union", p, tail, choose, j == n ? 0 : compare(tail, choose)));
  }
  append_union_links(out, "mutation.", p, n, j, 1);
  return out;
}

InequalityChain matching_jump_bound(int m, int h, int j) {
  require(m >= 2, "matching_jump_bound: m must be at least 2");
  require(h >= 1 && 2 * h <= m, "matching_jump_bound: h must satisfy 1 <= h and 2h <= m");
  require(j >= 0 && j <= 100000, "matching_jump_bound: j must be non-negative");
  const std::string p = params({{"m", m}, {"h", h}, {"j", j}});
  const double log_m = std::log(static_cast<double>(m));
  const double log_x = std::log(2.0 * h) - 2.0 * log_m;  // x = 2h / m^2 <= 1/m
  InequalityChain out;

  double log_sum = -kInf;
  if (j <= m - j) {
    const double terms = m - 2.0 * j + 1.0;
    log_sum = j * log_x + std::log1p(-std::exp(terms * log_x)) - std::log1p(-std::exp(log_x));
  }
  const double log_first = log_m + j * log_x;
  out.push_back(from_logs("matching.sum_le_m_first_term", p, log_sum, log_first, compare(log_sum, log_first)));

  const double log_geometric = j * log_x - std::log1p(-std::exp(log_x));
  out.push_back(from_logs("matching.sum_le_geometric_series", p, log_sum, log_geometric,
                          compare(log_sum, log_geometric)));

  // m (2h)^j / m^{2j} <= m^{1-j}  <=>  (2h)^j <= m^j
  const cpp_int a = power(2LL * h, j);
  const cpp_int b = power(m, j);
  const int cmp = a < b ? -1 : (a > b ? 1 : 0);
  out.push_back(from_logs("matching.first_term_le_power", p, log_first, (1.0 - j) * log_m, cmp));

  // e m^2 / m^{j-1} and e / m^{j-3} share the integer exponent 3 - j.
  const long long e1 = 2 - (static_cast<long long>(j) - 1);
  const long long e2 = -(static_cast<long long>(j) - 3);
  const double ratio1 = std::min(0.0, 1.0 + static_cast<double>(e1) * log_m);
  const double ratio2 = std::min(0.0, 1.0 + static_cast<double>(e2) * log_m);
  InequalityResult identity;
  identity.name = "matching.ratio_identity";
  identity.parameters = p;
  identity.log_scale = true;
  identity.lhs = ratio1;
  identity.rhs = ratio2;
  out.push_back(finalize(identity, e1 == e2 ? compare(ratio1, ratio2) : 1));

  const double geometric = std::log(22.0) - j * std::numbers::ln2;
  out.push_back(from_logs("matching.ratio_le_geometric", p, ratio2, geometric, compare(ratio2, geometric)));
  return out;
}

InequalityChain diversity_bound(int mu, int phi, int j) {
  require(mu >= 1, "diversity_bound: mu must be at least 1");
  require(phi >= 0 && phi <= 1000, "diversity_bound: phi must lie in [0, 1000]");
  require(j >= 1 && j <= 150, "diversity_bound: j must lie in [1, 150]");
  const std::string p = params({{"mu", mu}, {"phi", phi}, {"j", j}});
  const int extra = 20;
  const int terms = phi + 1 + extra;  // series partial sum length
  const int top = terms - 1 + j;

  std::vector<cpp_int> fact(static_cast<std::size_t>(top) + 1);
  fact[0] = 1;
  for (int i = 1; i <= top; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i) - 1] * i;
  auto f = [&fact](int k) -> const cpp_int& { return fact[static_cast<std::size_t>(k)]; };

  const cpp_int& d = f(phi + j);
  cpp_int forward = 0;
  cpp_int reindexed = 0;
  for (int k = 0; k <= phi; ++k) {
    forward += d / f(phi - k + j);
    reindexed += d / f(k + j);
  }
  const cpp_int& d2 = f(top);
  cpp_int partial = 0;
  for (int k = 0; k < terms; ++k) partial += d2 / f(k + j);

  InequalityChain out;
  const cpp_int diff = forward > reindexed ? cpp_int(forward - reindexed) : cpp_int(reindexed - forward);
  out.push_back(from_exact("diversity.reindex_identity", p, Exact{diff, d * mu}, Exact{0, 1}));
  out.push_back(from_exact("diversity.finite_le_series", p, Exact{reindexed, d * mu}, Exact{partial, d2 * mu}));

  // Tail of the series beyond the partial sum: sum_{k >= top+1} 1/k! <= 1/(top+1)! * (top+2)/(top+1).
  const double remainder = std::exp(-log_factorial(top + 1)) * (top + 2.0) / (top + 1.0);
  const double series = ratio_to_double(partial, d2) + remainder;
  const double log_lhs = std::log(series) - std::log(static_cast<double>(mu));
  const double log_rhs = 1.0 - log_factorial(j) - std::log(static_cast<double>(mu));
  out.push_back(from_logs("diversity.series_le_closed_form", p, log_lhs, log_rhs, compare(log_lhs, log_rhs)));
  return out;
}

InequalityChain comma_lambda_bounds(int n, int lambda_offspring, int j) {
  require(n >= 2 && n <= 1000000, "comma_lambda_bounds: n must lie in [2, 10^6]");
  require(lambda_offspring >= 1, "comma_lambda_bounds: lambda must be at least 1");
  require(j >= 0 && j <= n, "comma_lambda_bounds: j must lie in [0, n]");
  const std::string p = params({{"n", n}, {"lambda", lambda_offspring}, {"j", j}});
  const double lam = lambda_offspring;
  InequalityChain out;

  append_union_links(out, "comma.", p, n, j, lambda_offspring);

  const double log_copy = n * std::log1p(-1.0 / n);  // log (1 - 1/n)^n
  const double log_half_inv_e = -1.0 - std::numbers::ln2;
  out.push_back(from_logs("comma.copy_probability_premise", p, log_half_inv_e, log_copy,
                          compare(log_half_inv_e, log_copy)));

  // p_kk >= 1 - (1 - (1-1/n)^n)^lambda >= 1 - c^lambda with c = 1 - 1/(2e).
  const double c = 1.0 - 0.5 / std::numbers::e;
  const double self_loop = -std::expm1(lam * std::log1p(-std::exp(log_copy)));
  const double self_loop_lower = -std::expm1(lam * std::log(c));
  out.push_back(from_logs("comma.self_loop_lower_bound", p, std::log(self_loop_lower), std::log(self_loop),
                          compare(self_loop_lower, self_loop)));

  const double log_union =
      std::log(lam) + (n <= kExactLimit ? Exact{falling(n, j), factorial(j) * power(n, j)}.log()
                                        : log_choose_over_power(n, j));
  const double log_ratio = log_union - std::log(self_loop);
  const double log_ratio_bound = std::log(2.0 * lam) - j * std::numbers::ln2 - std::log(self_loop_lower);
  out.push_back(from_logs("comma.jump_to_self_loop_ratio", p, log_ratio, log_ratio_bound,
                          compare(log_ratio, log_ratio_bound)));
  return out;
}

std::string_view to_string(SelectionStatus status) {
  switch (status) {
    case SelectionStatus::ok: return "ok";
    case SelectionStatus::premise_fail: return "premise-fail";
    case SelectionStatus::inequality_fail: return "inequality-fail";
  }
  return "ok";
}

SelectionExpectations pea_prime_expected_selections(std::span<const double> fitnesses) {
  require(fitnesses.size() >= 2, "pea_prime_expected_selections: need at least two individuals");
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    require(std::isfinite(fitnesses[i]) && fitnesses[i] >= 0.0,
            "pea_prime_expected_selections: fitness values must be finite and non-negative");
    require(i == 0 || fitnesses[i] <= fitnesses[i - 1],
            "pea_prime_expected_selections: fitness vector must be sorted non-increasing");
  }
  const auto mu = static_cast<long long>(fitnesses.size());
  std::vector<cpp_rational> f;
  f.reserve(fitnesses.size());
  cpp_rational total = 0;
  for (double x : fitnesses) {
    f.push_back(exact_rational(x));
    total += f.back();
  }
  require(total > 0, "pea_prime_expected_selections: total fitness must be positive");

  const cpp_rational inv_mu(1, mu);
  const cpp_rational two = 2;
  SelectionExpectations result;
  result.premise_holds = true;
  cpp_rational sum = 0;
  std::vector<cpp_rational> share;
  for (std::size_t i = 0; i < f.size(); ++i) {
    share.push_back(f[i] / total);
    if (share.back() > two * inv_mu) result.premise_holds = false;
  }
  if (share[0] < inv_mu) result.premise_holds = false;

  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::string p = "mu=" + std::to_string(mu) + ";i=" + std::to_string(i + 1);
    cpp_rational e = (mu - 1) * share[i];
    e += i == 0 ? cpp_rational(1) - cpp_rational(mu - 1, mu) : inv_mu;
    sum += e;
    result.expected.push_back(ratio_to_double(boost::multiprecision::numerator(e),
                                              boost::multiprecision::denominator(e)));
    result.results.push_back(from_exact("pea_prime.expected_selections_le_2", p, from_rational(e), Exact{2, 1}));
    if (i == 0) {
      const cpp_rational mu_share = mu * share[0];
      result.results.push_back(from_exact("pea_prime.first_le_mu_share", p, from_rational(e), from_rational(mu_share)));
      result.results.push_back(from_exact("pea_prime.mu_share_le_2", p, from_rational(mu_share), Exact{2, 1}));
    } else {
      const cpp_rational cap(2 * mu - 1, mu);
      result.results.push_back(from_exact("pea_prime.other_le_premise_cap", p, from_rational(e), from_rational(cap)));
    }
  }
  const cpp_rational residual = sum > mu ? cpp_rational(sum - mu) : cpp_rational(mu - sum);
  result.sum_equals_mu = residual == 0;
  result.results.push_back(
      from_exact("pea_prime.selection_sum_identity", "mu=" + std::to_string(mu), from_rational(residual), Exact{0, 1}));

  const bool all_hold =
      std::all_of(result.results.begin(), result.results.end(), [](const InequalityResult& r) { return r.holds; });
  if (!result.premise_holds) {
    result.status = SelectionStatus::premise_fail;
  } else if (!all_hold) {
    result.status = SelectionStatus::inequality_fail;
  }
  return result;
}

std::vector<int> log_spaced(int low, int high, int points) {
  require(low >= 1 && high >= low, "log_spaced: need 1 <= low <= high");
  require(points >= 1, "log_spaced: points must be positive");
  std::vector<int> out;
  if (points == 1 || low == high) {
    out.push_back(low);
    if (high != low && points > 1) out.push_back(high);
    return out;
  }
  const double ratio = std::log(static_cast<double>(high) / low) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const int v = i == points - 1 ? high : static_cast<int>(std::lround(low * std::exp(ratio * i)));
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

SweepTotals run_sweep(std::string_view suite, const SweepGrid& grid, const ResultSink& sink) {
  const bool all = suite == "all";
  require(all || suite == "mutation" || suite == "matching" || suite == "diversity" || suite == "comma-lambda" ||
              suite == "pea-prime",
          "run_sweep: unknown suite '" + std::string(suite) +
              "' (expected mutation, matching, diversity, comma-lambda, pea-prime or all)");
  SweepTotals totals;
  auto emit = [&](const InequalityChain& chain) {
    for (const InequalityResult& r : chain) {
      ++totals.results;
      if (!r.holds) ++totals.failures;
      if (sink) sink(r);
    }
  };

  if (all || suite == "mutation") {
    for (int n = 1; n <= grid.mutation_n_max; ++n) {
      for (int j = 1; j <= n; ++j) emit(mutation_tail_chain(n, j));
    }
  }
  if (all || suite == "matching") {
    for (int m = 2; m <= grid.matching_m_max; ++m) {
      for (int h = 1; 2 * h <= m; ++h) {
        for (int j = 0; j <= grid.matching_j_max; ++j) emit(matching_jump_bound(m, h, j));
      }
    }
  }
  if (all || suite == "diversity") {
    for (int mu = 1; mu <= grid.diversity_mu_max; ++mu) {
      for (int phi = 0; phi <= grid.diversity_phi_max; ++phi) {
        for (int j = 1; j <= grid.diversity_j_max; ++j) emit(diversity_bound(mu, phi, j));
      }
    }
  }
  if (all || suite == "comma-lambda") {
    for (int n : log_spaced(2, grid.comma_n_max, grid.comma_n_points)) {
      for (int lam = 1; lam <= grid.comma_lambda_max; ++lam) {
        for (int j = 0; j <= std::min(grid.comma_j_max, n); ++j) emit(comma_lambda_bounds(n, lam, j));
      }
    }
  }
  if (all || suite == "pea-prime") {
    require(grid.pea_mu_max >= 2, "run_sweep: pea_mu_max must be at least 2");
    std::vector<double> fitness;
    for (int v = 0; v < grid.pea_vectors; ++v) {
      RandomStream rng(derive_seed(grid.seed, static_cast<std::uint64_t>(v)));
      const int mu = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(grid.pea_mu_max - 1)));
      fitness.assign(static_cast<std::size_t>(mu), 0.0);
      for (double& x : fitness) x = 1.0 + rng.uniform();
      std::sort(fitness.begin(), fitness.end(), std::greater<>());
      emit(pea_prime_expected_selections(fitness).results);
    }
  }
  return totals;
}

void write_csv_header(std::ostream& out) { out << "name,parameters,lhs,rhs,margin,holds,scale\n"; }

void write_csv_row(std::ostream& out, const InequalityResult& r) {
  out << r.name << ',' << r.parameters << ',' << format_real(r.lhs) << ',' << format_real(r.rhs) << ','
      << format_real(r.margin) << ',' << (r.holds ? "true" : "false") << ',' << (r.log_scale ? "log" : "linear")
      << '\n';
}

}  // namespace drift
