#include "driftlab/processes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "driftlab/csv.hpp"
#include "driftlab/error.hpp"

namespace drift {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join_parameters(std::initializer_list<std::pair<const char*, std::string>> items) {
  std::string out;
  for (const auto& [key, value] : items) {
    if (!out.empty()) out += ';';
    out += key;
    out += '=';
    out += value;
  }
  return out;
}

// ---------------------------------------------------------------------------

class CounterexampleWalker final : public Walker {
 public:
  explicit CounterexampleWalker(const CounterexampleConfig& config)
      : config_(config), state_(config.n) {}

  double potential() const override { return static_cast<double>(state_); }

  void step(RandomStream& rng) override {
    if (state_ <= 0 || state_ > config_.n) return;  // absorbing
    state_ = rng.bernoulli(config_.up_prob) ? state_ + config_.up_jump : state_ - 1;
  }

 private:
  const CounterexampleConfig& config_;
  std::int64_t state_;
};

class CounterexampleProcess final : public Process {
 public:
  explicit CounterexampleProcess(int n) : config_(CounterexampleConfig::make(n)) {}

  std::string name() const override { return "counterexample"; }
  std::string parameters() const override {
    return join_parameters({{"n", std::to_string(config_.n)},
                            {"up_jump", std::to_string(config_.up_jump)},
                            {"up_prob", format_real(config_.up_prob)}});
  }
  std::unique_ptr<Walker> start(RandomStream&) const override {
    return std::make_unique<CounterexampleWalker>(config_);
  }
  std::optional<std::vector<JumpRegime>> exact_jumps() const override {
    std::vector<JumpRegime> regimes;
    regimes.push_back({-kInf, 0.0, JumpDistribution::point_mass(0.0)});
    regimes.push_back({1.0, static_cast<double>(config_.n), config_.active_jumps()});
    regimes.push_back({static_cast<double>(config_.n) + 1.0, kInf, JumpDistribution::point_mass(0.0)});
    return regimes;
  }

 private:
  CounterexampleConfig config_;
};

// ---------------------------------------------------------------------------

class GeometricWalker final : public Walker {
 public:
  GeometricWalker(const GeometricWalkConfig& config, double start)
      : config_(config),
        x_(start),
        log_ratio_(-std::log1p(config.delta)),
        plus_share_(config.c_plus / (config.c_plus + config.c_minus)) {}

  double potential() const override { return x_; }

  void step(RandomStream& rng) override {
    // |Delta| - 1 is geometric with continuation probability 1/(1+delta).
    const double magnitude = 1.0 + std::floor(std::log(rng.uniform_positive()) / log_ratio_);
    x_ += rng.bernoulli(plus_share_) ? magnitude : -magnitude;
  }

 private:
  const GeometricWalkConfig& config_;
  double x_;
  double log_ratio_;
  double plus_share_;
};

class GeometricProcess final : public Process {
 public:
  GeometricProcess(double eps, double delta, double start)
      : config_(GeometricWalkConfig::make(eps, delta)), start_(start), table_(config_.jump_table()) {
    require(std::isfinite(start), "geometric_drift_walk: start must be finite");
  }

  std::string name() const override { return "geometric-walk"; }
  std::string parameters() const override {
    return join_parameters({{"eps", format_real(config_.eps)},
                            {"delta", format_real(config_.delta)},
                            {"r", format_real(config_.r)},
                            {"c_plus", format_real(config_.c_plus)},
                            {"c_minus", format_real(config_.c_minus)},
                            {"start", format_real(start_)}});
  }
  std::unique_ptr<Walker> start(RandomStream&) const override {
    return std::make_unique<GeometricWalker>(config_, start_);
  }
  std::optional<std::vector<JumpRegime>> exact_jumps() const override {
    return std::vector<JumpRegime>{{-kInf, kInf, table_}};
  }

 private:
  GeometricWalkConfig config_;
  double start_;
  JumpDistribution table_;
};

// ---------------------------------------------------------------------------

class ConstantStepWalker final : public Walker {
 public:
  ConstantStepWalker(double start, double step) : x_(start), step_(step) {}
  double potential() const override { return x_; }
  void step(RandomStream&) override { x_ += step_; }

 private:
  double x_;
  double step_;
};

class ConstantStepProcess final : public Process {
 public:
  ConstantStepProcess(double start, double step) : start_(start), step_(step) {
    require(std::isfinite(start) && std::isfinite(step), "constant_step_walk: non-finite parameter");
  }
  std::string name() const override { return "constant-walk"; }
  std::string parameters() const override {
    return join_parameters({{"start", format_real(start_)}, {"step", format_real(step_)}});
  }
  std::unique_ptr<Walker> start(RandomStream&) const override {
    return std::make_unique<ConstantStepWalker>(start_, step_);
  }
  std::optional<std::vector<JumpRegime>> exact_jumps() const override {
    return std::vector<JumpRegime>{{-kInf, kInf, JumpDistribution::point_mass(step_)}};
  }

 private:
  double start_;
  double step_;
};

// ---------------------------------------------------------------------------

/// Bin(trials, p) pmf by the ratio recurrence, truncated once terms underflow.
std::vector<double> binomial_pmf(int trials, double p) {
  std::vector<double> pmf;
  double term = std::exp(trials * std::log1p(-p));
  const double odds = p / (1.0 - p);
  for (int k = 0; k <= trials; ++k) {
    if (k > 0) term *= odds * static_cast<double>(trials - k + 1) / static_cast<double>(k);
    if (term == 0.0) break;
    pmf.push_back(term);
  }
  return pmf;
}

class NeedleWalker final : public Walker {
 public:
  NeedleWalker(const BitMutation& mutation, RandomStream& rng)
      : mutation_(mutation), bits_(random_bitstring(mutation.n(), rng)) {
    zeros_ = mutation.n() - count_ones(bits_);
    flips_.reserve(16);
  }

  double potential() const override { return static_cast<double>(zeros_); }

  void step(RandomStream& rng) override {
    flips_.clear();
    mutation_.for_each_flip(rng, [this](int pos) { flips_.push_back(pos); });
    // At the needle only an identical copy keeps the (unique) best fitness.
    if (zeros_ == 0 && !flips_.empty()) return;
    for (int pos : flips_) {
      zeros_ += bits_[pos] ? 1 : -1;
      bits_[pos] ^= 1u;
    }
  }

 private:
  const BitMutation& mutation_;
  Bitstring bits_;
  int zeros_ = 0;
  std::vector<int> flips_;
};

class NeedleProcess final : public Process {
 public:
  explicit NeedleProcess(int n)
      : config_(BitstringEAConfig{n, 1, 2, 0.0}.resolved(false)),
        mutation_(config_.n, config_.mutation_rate) {}

  std::string name() const override { return "needle"; }
  std::string parameters() const override {
    return join_parameters({{"n", std::to_string(config_.n)},
                            {"mutation_rate", format_real(config_.mutation_rate)}});
  }
  std::unique_ptr<Walker> start(RandomStream& rng) const override {
    return std::make_unique<NeedleWalker>(mutation_, rng);
  }
  std::optional<std::vector<JumpRegime>> exact_jumps() const override {
    std::vector<JumpRegime> regimes;
    regimes.push_back({-kInf, 0.0, JumpDistribution::point_mass(0.0)});
    for (int d = 1; d <= config_.n; ++d) {
      regimes.push_back({static_cast<double>(d), static_cast<double>(d), needle_jump_table(config_.n, d)});
    }
    return regimes;
  }

 private:
  BitstringEAConfig config_;
  BitMutation mutation_;
};

// ---------------------------------------------------------------------------

class CommaWalker final : public Walker {
 public:
  CommaWalker(const OneCommaLambdaEA& ea, RandomStream& rng)
      : ea_(ea), bits_(random_bitstring(ea.config().n, rng)) {
    zeros_ = ea.config().n - count_ones(bits_);
  }
  double potential() const override { return static_cast<double>(zeros_); }
  void step(RandomStream& rng) override { zeros_ = ea_.advance(bits_, rng).next_zeros; }

 private:
  const OneCommaLambdaEA& ea_;
  Bitstring bits_;
  int zeros_ = 0;
};

class CommaProcess final : public Process {
 public:
  CommaProcess(int n, int lambda) : ea_(BitstringEAConfig{n, lambda, 2, 0.0}) {}

  std::string name() const override { return "one-comma-lambda"; }
  std::string parameters() const override {
    return join_parameters({{"n", std::to_string(ea_.config().n)},
                            {"lambda", std::to_string(ea_.config().lambda_offspring)},
                            {"mutation_rate", format_real(ea_.config().mutation_rate)}});
  }
  std::unique_ptr<Walker> start(RandomStream& rng) const override {
    return std::make_unique<CommaWalker>(ea_, rng);
  }

 private:
  OneCommaLambdaEA ea_;
};

// ---------------------------------------------------------------------------

class PopulationWalker final : public Walker {
 public:
  PopulationWalker(const PopulationEA& ea, RandomStream& rng)
      : ea_(ea), population_(ea.random_population(rng)) {
    refresh();
  }
  double potential() const override { return potential_; }
  void step(RandomStream& rng) override {
    ea_.advance(population_, rng);
    refresh();
  }

 private:
  void refresh() {
    ones_.clear();
    for (const Bitstring& x : population_) ones_.push_back(count_ones(x));
    potential_ = log8_potential(ones_);
  }

  const PopulationEA& ea_;
  std::vector<Bitstring> population_;
  std::vector<int> ones_;
  double potential_ = 0.0;
};

class PopulationProcess final : public Process {
 public:
  PopulationProcess(PeaVariant variant, int n, int mu) : ea_(variant, BitstringEAConfig{n, 1, mu, 0.0}) {}

  std::string name() const override { return ea_.variant() == PeaVariant::prime ? "pea-prime" : "pea"; }
  std::string parameters() const override {
    return join_parameters({{"n", std::to_string(ea_.config().n)},
                            {"mu", std::to_string(ea_.config().mu)},
                            {"mutation_rate", format_real(ea_.config().mutation_rate)},
                            {"potential", "log8"}});
  }
  std::unique_ptr<Walker> start(RandomStream& rng) const override {
    return std::make_unique<PopulationWalker>(ea_, rng);
  }
  bool log_scale_potential() const override { return true; }

 private:
  PopulationEA ea_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Counterexample

CounterexampleConfig CounterexampleConfig::make(int n) {
  require(n >= 2 && n <= 25, "counterexample_chain: n must lie in [2, 25]");
  CounterexampleConfig c;
  c.n = n;
  c.up_prob = std::exp(-static_cast<double>(n));
  c.up_jump = static_cast<std::int64_t>(std::ceil(2.0 * std::exp(static_cast<double>(n))));
  return c;
}

JumpDistribution CounterexampleConfig::active_jumps() const {
  return JumpDistribution::from_atoms(
      {{-1.0, -std::expm1(-static_cast<double>(n))}, {static_cast<double>(up_jump), up_prob}});
}

ProcessPtr counterexample_chain(int n) { return std::make_shared<CounterexampleProcess>(n); }

// ---------------------------------------------------------------------------
// Geometric walk

double GeometricWalkConfig::max_eps(double delta) { return (1.0 + delta) / delta; }

GeometricWalkConfig GeometricWalkConfig::make(double eps, double delta) {
  require(std::isfinite(delta) && delta > 0.0, "geometric_drift_walk: delta must be positive");
  require(std::isfinite(eps) && eps > 0.0, "geometric_drift_walk: eps must be positive");
  // Sum_{j>=1} (1+d)^{-j} = 1/d and Sum_{j>=1} j (1+d)^{-j} = (1+d)/d^2, hence
  // c_plus + c_minus = d and c_plus - c_minus = eps d^2 / (1+d).
  const double spread = eps * delta * delta / (1.0 + delta);
  if (spread > delta * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "geometric_drift_walk: drift eps = " << eps << " exceeds the maximum "
        << max_eps(delta) << " that geometric tails with delta = " << delta << " allow";
    throw ConfigError(msg.str());
  }
  GeometricWalkConfig c;
  c.eps = eps;
  c.delta = delta;
  c.r = 1.0 + delta;
  c.c_plus = 0.5 * (delta + spread);
  c.c_minus = std::max(0.0, 0.5 * (delta - spread));
  return c;
}

double GeometricWalkConfig::abs_tail(std::int64_t j) const {
  if (j <= 0) return 1.0;
  return (c_plus + c_minus) * std::exp(-static_cast<double>(j - 1) * std::log1p(delta)) / delta;
}

JumpDistribution GeometricWalkConfig::jump_table() const {
  const double log_ratio = std::log1p(delta);
  // Past this index every atom is below the smallest subnormal.
  const auto last = static_cast<std::int64_t>(std::ceil(750.0 / log_ratio));
  std::vector<JumpAtom> atoms;
  atoms.reserve(2 * static_cast<std::size_t>(last));
  for (std::int64_t j = 1; j <= last; ++j) {
    const double weight = std::exp(-static_cast<double>(j) * log_ratio);
    if (weight == 0.0) break;
    atoms.push_back({static_cast<double>(j), c_plus * weight});
    atoms.push_back({-static_cast<double>(j), c_minus * weight});
  }
  return JumpDistribution::from_atoms(std::move(atoms));
}

ProcessPtr geometric_drift_walk(double eps, double delta, double start) {
  return std::make_shared<GeometricProcess>(eps, delta, start);
}

ProcessPtr constant_step_walk(double start, double step) {
  return std::make_shared<ConstantStepProcess>(start, step);
}

// ---------------------------------------------------------------------------
// Bitstrings

BitstringEAConfig BitstringEAConfig::resolved(bool population) const {
  BitstringEAConfig c = *this;
  require(c.n >= 2, "bitstring EA: n must be at least 2");
  if (c.mutation_rate == 0.0) c.mutation_rate = 1.0 / c.n;
  require(c.mutation_rate > 0.0 && c.mutation_rate < 1.0, "bitstring EA: mutation rate must lie in (0, 1)");
  require(c.lambda_offspring >= 1, "bitstring EA: lambda must be at least 1");
  if (population) require(c.mu >= 2, "population EA: mu must be at least 2");
  return c;
}

BitMutation::BitMutation(int n, double rate) : n_(n), rate_(rate), log_keep_(std::log1p(-rate)) {
  require(n >= 1, "mutation: n must be positive");
  require(rate > 0.0 && rate < 1.0, "mutation: rate must lie in (0, 1)");
}

int BitMutation::count_flips(RandomStream& rng) const {
  int flips = 0;
  for_each_flip(rng, [&flips](int) { ++flips; });
  return flips;
}

Bitstring random_bitstring(int n, RandomStream& rng) {
  Bitstring x(static_cast<std::size_t>(n));
  std::uint64_t word = 0;
  for (int i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng.bits();
    x[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(word & 1u);
    word >>= 1;
  }
  return x;
}

int count_ones(const Bitstring& x) {
  return static_cast<int>(std::count(x.begin(), x.end(), std::uint8_t{1}));
}

JumpDistribution needle_jump_table(int n, int distance) {
  require(n >= 2, "needle_jump_table: n must be at least 2");
  require(distance >= 1 && distance <= n, "needle_jump_table: distance must lie in [1, n]");
  const double rate = 1.0 / n;
  const auto up = binomial_pmf(n - distance, rate);  // ones flipped to zeros
  const auto down = binomial_pmf(distance, rate);    // zeros flipped to ones
  std::vector<JumpAtom> atoms;
  atoms.reserve(up.size() * down.size());
  for (std::size_t u = 0; u < up.size(); ++u) {
    for (std::size_t v = 0; v < down.size(); ++v) {
      atoms.push_back({static_cast<double>(u) - static_cast<double>(v), up[u] * down[v]});
    }
  }
  return JumpDistribution::from_atoms(std::move(atoms));
}

ProcessPtr oneone_ea_needle(int n) { return std::make_shared<NeedleProcess>(n); }

// ---------------------------------------------------------------------------
// (1,lambda) EA

OneCommaLambdaEA::OneCommaLambdaEA(BitstringEAConfig config)
    : config_(config.resolved(false)), mutation_(config_.n, config_.mutation_rate) {}

CommaGeneration OneCommaLambdaEA::advance(Bitstring& parent, RandomStream& rng) const {
  CommaGeneration gen;
  gen.parent_zeros = config_.n - count_ones(parent);

  std::vector<int> flips;
  std::vector<int> best_flips;
  int best_change = 0;
  std::uint64_t ties = 0;
  for (int k = 0; k < config_.lambda_offspring; ++k) {
    flips.clear();
    int change = 0;
    mutation_.for_each_flip(rng, [&](int pos) {
      flips.push_back(pos);
      change += parent[static_cast<std::size_t>(pos)] ? 1 : -1;
    });
    if (flips.empty()) gen.any_copy = true;
    if (k == 0 || change < best_change) {
      best_change = change;
      best_flips = flips;
      ties = 1;
    } else if (change == best_change) {
      // Reservoir sampling keeps a uniformly random member of the tied set.
      ++ties;
      if (rng.below(ties) == 0) best_flips = flips;
    }
  }
  for (int pos : best_flips) parent[static_cast<std::size_t>(pos)] ^= 1u;
  gen.next_zeros = gen.parent_zeros + best_change;
  return gen;
}

ProcessPtr one_comma_lambda_ea(int n, int lambda_offspring) {
  return std::make_shared<CommaProcess>(n, lambda_offspring);
}

// ---------------------------------------------------------------------------
// Population EAs

std::vector<double> pea_prime_selection(std::span<const double> fitnesses) {
  const std::size_t mu = fitnesses.size();
  require(mu >= 2, "pea_prime_selection: needs at least two individuals");
  double total = 0.0;
  for (std::size_t i = 0; i < mu; ++i) {
    require(std::isfinite(fitnesses[i]) && fitnesses[i] >= 0.0,
            "pea_prime_selection: fitness values must be finite and non-negative");
    if (i > 0) require(fitnesses[i] <= fitnesses[i - 1], "pea_prime_selection: fitnesses must be sorted non-increasingly");
    total += fitnesses[i];
  }
  require(total > 0.0, "pea_prime_selection: total fitness is zero");

  const double m = static_cast<double>(mu);
  std::vector<double> q(mu);
  q[0] = std::max(0.0, fitnesses[0] / total - 1.0 / m);
  for (std::size_t i = 1; i < mu; ++i) q[i] = fitnesses[i] / total + 1.0 / (m * (m - 1.0));
  return q;
}

double log8_potential(std::span<const int> ones_counts) {
  require(!ones_counts.empty(), "log8_potential: empty population");
  const int peak = *std::max_element(ones_counts.begin(), ones_counts.end());
  const double log8 = std::log(8.0);
  double sum = 0.0;
  for (int ones : ones_counts) sum += std::exp(static_cast<double>(ones - peak) * log8);
  return static_cast<double>(peak) + std::log(sum) / log8;
}

PopulationEA::PopulationEA(PeaVariant variant, BitstringEAConfig config)
    : variant_(variant), config_(config.resolved(true)), mutation_(config_.n, config_.mutation_rate) {}

std::vector<Bitstring> PopulationEA::random_population(RandomStream& rng) const {
  std::vector<Bitstring> population;
  population.reserve(static_cast<std::size_t>(config_.mu));
  for (int i = 0; i < config_.mu; ++i) population.push_back(random_bitstring(config_.n, rng));
  return population;
}

PopulationGeneration PopulationEA::advance(std::vector<Bitstring>& population, RandomStream& rng) const {
  const std::size_t mu = population.size();
  require(mu == static_cast<std::size_t>(config_.mu), "population EA: population size differs from mu");

  std::vector<int> ones(mu);
  for (std::size_t i = 0; i < mu; ++i) ones[i] = count_ones(population[i]);
  std::vector<std::size_t> rank(mu);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t l, std::size_t r) { return ones[l] > ones[r]; });

  PopulationGeneration gen;
  gen.fitness.resize(mu);
  gen.selections.assign(mu, 0);
  std::vector<double> weights(mu);
  double total = 0.0;
  for (std::size_t i = 0; i < mu; ++i) {
    gen.fitness[i] = ones[rank[i]];
    total += gen.fitness[i];
  }

  // With zero total fitness (all parents all-zero) selection falls back to uniform.
  std::size_t draws = mu;
  if (total == 0.0) {
    std::fill(weights.begin(), weights.end(), 1.0);
  } else if (variant_ == PeaVariant::prime) {
    std::vector<double> sorted(gen.fitness.begin(), gen.fitness.end());
    weights = pea_prime_selection(sorted);
  } else {
    for (std::size_t i = 0; i < mu; ++i) weights[i] = gen.fitness[i];
  }
  if (variant_ == PeaVariant::prime) {
    gen.selections[0] = 1;
    draws = mu - 1;
  }
  std::vector<double> cumulative(mu);
  std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
  for (std::size_t k = 0; k < draws; ++k) {
    const double u = rng.uniform() * cumulative.back();
    auto pick = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    pick = std::min(pick, mu - 1);
    ++gen.selections[pick];
  }

  std::vector<Bitstring> offspring;
  offspring.reserve(mu);
  for (std::size_t i = 0; i < mu; ++i) {
    for (int s = 0; s < gen.selections[i]; ++s) {
      Bitstring child = population[rank[i]];
      mutation_.for_each_flip(rng, [&child](int pos) { child[static_cast<std::size_t>(pos)] ^= 1u; });
      offspring.push_back(std::move(child));
    }
  }
  population = std::move(offspring);
  return gen;
}

ProcessPtr pea(int n, int mu) { return std::make_shared<PopulationProcess>(PeaVariant::plain, n, mu); }
ProcessPtr pea_prime(int n, int mu) { return std::make_shared<PopulationProcess>(PeaVariant::prime, n, mu); }

}  // namespace drift
