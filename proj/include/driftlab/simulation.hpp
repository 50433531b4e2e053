#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "driftlab/process.hpp"
#include "driftlab/stats.hpp"

namespace drift {

/// The interval [a, b]: a is the target threshold, b the start threshold.
class DriftWindow {
 public:
  DriftWindow(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double ell() const { return ell_; }

 private:
  double a_;
  double b_;
  double ell_;
};

struct Trajectory {
  /// X_0, X_1, ... in full recording mode; only X_0 in lean mode.
  std::vector<double> potentials;
  /// First t with X_t <= a.
  std::optional<std::uint64_t> hit_time;
  bool truncated = false;

  double start() const { return potentials.front(); }
};

enum class Recording { lean, full };

struct SimulationBudget {
  std::uint64_t max_steps = 1;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
};

struct HittingEstimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  double half_width() const { return 0.5 * (ci_high - ci_low); }
};

/// Simulates until the first X_t <= a or until max_steps steps were taken.
Trajectory run_trial(const Process& process, const DriftWindow& window, std::uint64_t max_steps,
                     std::uint64_t seed, Recording recording = Recording::lean);

/// Runs budget.trials independent trials; trial i uses derive_seed(master_seed, i).
/// `threads` == 0 selects the hardware concurrency. Output order is by trial
/// index and does not depend on the thread count.
std::vector<Trajectory> run_trials(const Process& process, const DriftWindow& window,
                                   const SimulationBudget& budget, unsigned threads = 0,
                                   Recording recording = Recording::lean);

/// Fraction of trajectories with hit_time <= horizon, with a Wilson 95% interval.
HittingEstimate summarize_hits(std::span<const Trajectory> trajectories, std::uint64_t horizon);

HittingEstimate estimate_hitting_probability(const Process& process, const DriftWindow& window,
                                             const SimulationBudget& budget, std::uint64_t horizon,
                                             unsigned threads = 0);

/// Observed one-step changes split by conditioning domain: `drift` holds
/// Delta for steps with a < X_t < b, `tail` for steps with a < X_t.
struct JumpSamples {
  std::vector<double> drift;
  std::vector<double> tail;
};

/// Runs budget.trials trajectories (each stops at the first X_t <= a or after
/// max_steps steps) and collects every step's Delta by domain. The start
/// state is not required to lie above b.
JumpSamples harvest_jumps(const Process& process, const DriftWindow& window,
                          const SimulationBudget& budget, unsigned threads = 0);

unsigned resolve_thread_count(unsigned requested);

}  // namespace drift
