#include "driftlab/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "driftlab/error.hpp"

namespace drift {
namespace {

// Hands out indices [0, count) to a pool of workers. Each index is processed
// exactly once, so any per-index output slot is written by one thread only.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(resolve_thread_count(threads), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

void validate_budget(const SimulationBudget& budget) {
  require(budget.max_steps > 0, "simulation budget: max_steps must be positive");
  require(budget.trials > 0, "simulation budget: trials must be positive");
}

}  // namespace

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

DriftWindow::DriftWindow(double a, double b) : a_(a), b_(b), ell_(b - a) {
  require(std::isfinite(a) && std::isfinite(b), "drift window: bounds must be finite");
  require(a < b, "drift window: requires a < b");
}

Trajectory run_trial(const Process& process, const DriftWindow& window, std::uint64_t max_steps,
                     std::uint64_t seed, Recording recording) {
  require(max_steps > 0, "run_trial: max_steps must be positive");
  RandomStream rng(seed);
  auto walker = process.start(rng);

  Trajectory trajectory;
  const double x0 = walker->potential();
  if (!(x0 >= window.b())) {
    throw ConfigError("run_trial: initial potential " + std::to_string(x0) +
                      " lies below the start threshold b = " + std::to_string(window.b()) +
                      " for process " + process.name());
  }
  trajectory.potentials.push_back(x0);
  if (recording == Recording::full) trajectory.potentials.reserve(std::min<std::uint64_t>(max_steps + 1, 1u << 20));

  for (std::uint64_t t = 1; t <= max_steps; ++t) {
    walker->step(rng);
    const double x = walker->potential();
    if (recording == Recording::full) trajectory.potentials.push_back(x);
    if (x <= window.a()) {
      trajectory.hit_time = t;
      return trajectory;
    }
  }
  trajectory.truncated = true;
  return trajectory;
}

std::vector<Trajectory> run_trials(const Process& process, const DriftWindow& window,
                                   const SimulationBudget& budget, unsigned threads,
                                   Recording recording) {
  validate_budget(budget);
  std::vector<Trajectory> out(budget.trials);
  parallel_for(budget.trials, threads, [&](std::size_t i) {
    out[i] = run_trial(process, window, budget.max_steps, derive_seed(budget.master_seed, i),
                       recording);
  });
  return out;
}

HittingEstimate summarize_hits(std::span<const Trajectory> trajectories, std::uint64_t horizon) {
  require(!trajectories.empty(), "summarize_hits: no trajectories");
  HittingEstimate est;
  est.trials = trajectories.size();
  est.hits = static_cast<std::uint64_t>(std::count_if(
      trajectories.begin(), trajectories.end(),
      [horizon](const Trajectory& t) { return t.hit_time && *t.hit_time <= horizon; }));
  est.point = static_cast<double>(est.hits) / static_cast<double>(est.trials);
  const Interval ci = wilson_interval(est.hits, est.trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

HittingEstimate estimate_hitting_probability(const Process& process, const DriftWindow& window,
                                             const SimulationBudget& budget, std::uint64_t horizon,
                                             unsigned threads) {
  validate_budget(budget);
  require(horizon <= budget.max_steps, "estimate_hitting_probability: horizon exceeds max_steps");
  if (horizon == 0) {
    // X_0 >= b > a, so no trial can hit at time 0; still validate the start states.
    SimulationBudget probe = budget;
    probe.max_steps = 1;
    auto trajectories = run_trials(process, window, probe, threads);
    return summarize_hits(trajectories, 0);
  }
  SimulationBudget trimmed = budget;
  trimmed.max_steps = horizon;
  const auto trajectories = run_trials(process, window, trimmed, threads);
  return summarize_hits(trajectories, horizon);
}

JumpSamples harvest_jumps(const Process& process, const DriftWindow& window,
                          const SimulationBudget& budget, unsigned threads) {
  validate_budget(budget);
  std::vector<JumpSamples> per_trial(budget.trials);
  parallel_for(budget.trials, threads, [&](std::size_t i) {
    RandomStream rng(derive_seed(budget.master_seed, i));
    auto walker = process.start(rng);
    JumpSamples& samples = per_trial[i];
    double x = walker->potential();
    for (std::uint64_t t = 0; t < budget.max_steps && x > window.a(); ++t) {
      walker->step(rng);
      const double next = walker->potential();
      const double delta = next - x;
      samples.tail.push_back(delta);
      if (x < window.b()) samples.drift.push_back(delta);
      x = next;
    }
  });

  JumpSamples merged;
  for (const JumpSamples& s : per_trial) {
    merged.drift.insert(merged.drift.end(), s.drift.begin(), s.drift.end());
    merged.tail.insert(merged.tail.end(), s.tail.begin(), s.tail.end());
  }
  return merged;
}

}  // namespace drift
