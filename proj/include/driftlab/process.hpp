#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "driftlab/jump_distribution.hpp"
#include "driftlab/random.hpp"

namespace drift {

/// Mutable state of one simulated run. Created by Process::start and
/// advanced one step at a time.
class Walker {
 public:
  virtual ~Walker() = default;
  virtual double potential() const = 0;
  virtual void step(RandomStream& rng) = 0;
};

/// Law of Delta for every potential in the closed range [state_low, state_high].
struct JumpRegime {
  double state_low = -std::numeric_limits<double>::infinity();
  double state_high = std::numeric_limits<double>::infinity();
  JumpDistribution jumps;
};

/// An immutable process description; safe to share across worker threads.
class Process {
 public:
  virtual ~Process() = default;

  virtual std::string name() const = 0;
  /// Resolved parameters as "key=value;key=value".
  virtual std::string parameters() const = 0;
  virtual std::unique_ptr<Walker> start(RandomStream& rng) const = 0;

  /// Exact jump laws covering the state space, when they are tractable.
  virtual std::optional<std::vector<JumpRegime>> exact_jumps() const { return std::nullopt; }

  /// True when the potential is a log-scale quantity (population EAs).
  virtual bool log_scale_potential() const { return false; }
};

using ProcessPtr = std::shared_ptr<const Process>;

}  // namespace drift
