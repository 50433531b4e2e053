#include "driftlab/jump_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "driftlab/csv.hpp"
#include "driftlab/error.hpp"

namespace drift {

JumpDistribution JumpDistribution::from_atoms(std::vector<JumpAtom> atoms) {
  std::map<double, double> merged;
  for (const JumpAtom& atom : atoms) {
    require(std::isfinite(atom.value), "jump distribution: non-finite jump value");
    require(std::isfinite(atom.prob) && atom.prob >= 0.0,
            "jump distribution: probabilities must be finite and non-negative");
    if (atom.prob > 0.0) merged[atom.value] += atom.prob;
  }
  require(!merged.empty(), "jump distribution: no atom carries positive mass");

  JumpDistribution dist;
  dist.atoms_.reserve(merged.size());
  dist.cdf_.reserve(merged.size());
  double running = 0.0;
  for (const auto& [value, prob] : merged) {
    dist.atoms_.push_back({value, prob});
    running += prob;
    dist.cdf_.push_back(running);
  }
  dist.total_ = running;
  return dist;
}

JumpDistribution JumpDistribution::point_mass(double value) {
  return from_atoms({{value, 1.0}});
}

bool JumpDistribution::is_normalized(double tolerance) const {
  return std::abs(total_ - 1.0) <= tolerance;
}

double JumpDistribution::mean() const {
  double sum = 0.0;
  for (const JumpAtom& a : atoms_) sum += a.value * a.prob;
  return sum;
}

double JumpDistribution::max_abs() const {
  double m = 0.0;
  for (const JumpAtom& a : atoms_) m = std::max(m, std::abs(a.value));
  return m;
}

// Tails are summed from the extreme end inward so the smallest terms are
// accumulated first.
double JumpDistribution::lower_tail(double j) const {
  double sum = 0.0;
  for (const JumpAtom& a : atoms_) {
    if (a.value > -j) break;
    sum += a.prob;
  }
  return sum;
}

double JumpDistribution::upper_tail(double j) const {
  double sum = 0.0;
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
    if (it->value < j) break;
    sum += it->prob;
  }
  return sum;
}

double JumpDistribution::abs_tail(double j) const {
  if (j <= 0.0) return total_;
  return lower_tail(j) + upper_tail(j);
}

double JumpDistribution::log_abs_mgf(double gamma) const {
  double peak = -std::numeric_limits<double>::infinity();
  for (const JumpAtom& a : atoms_) {
    peak = std::max(peak, std::log(a.prob) + gamma * std::abs(a.value));
  }
  double sum = 0.0;
  for (const JumpAtom& a : atoms_) {
    sum += std::exp(std::log(a.prob) + gamma * std::abs(a.value) - peak);
  }
  return peak + std::log(sum);
}

double JumpDistribution::sample(RandomStream& rng) const {
  const double u = rng.uniform() * total_;
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto index = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()),
                                           atoms_.size() - 1);
  return atoms_[index].value;
}

void JumpDistribution::write_csv(std::ostream& out) const {
  std::map<long long, std::pair<double, double>> rows;
  for (const JumpAtom& a : atoms_) {
    require(a.value == std::floor(a.value),
            "jump table CSV export requires an integer-valued distribution");
    const auto v = static_cast<long long>(a.value);
    if (v >= 0) {
      rows[v].first += a.prob;
    } else {
      rows[-v].second += a.prob;
    }
  }
  out << "j,p_plus,p_minus\n";
  for (const auto& [j, probs] : rows) {
    out << j << ',' << format_real(probs.first) << ',' << format_real(probs.second) << '\n';
  }
}

}  // namespace drift
