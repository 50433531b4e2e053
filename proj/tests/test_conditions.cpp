#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "driftlab/conditions.hpp"
#include "driftlab/error.hpp"
#include "driftlab/processes.hpp"

using namespace drift;

TEST_SUITE("conditions") {
  TEST_CASE("point mass passes with slow decay") {
    const auto d = JumpDistribution::point_mass(1.0);
    const ConditionReport rep = check_conditions_exact(d, {1.0, 0.1, 2.0, 64}, TailVariant::two_sided);
    CHECK(rep.drift_verdict == Verdict::pass);
    CHECK(rep.tail_verdict() == Verdict::pass);
    CHECK(rep.tails.size() == 65);
  }

  TEST_CASE("counterexample: one-sided pass, two-sided fail at j = 23") {
    const auto regimes = *counterexample_chain(15)->exact_jumps();
    const DriftWindow w(0.0, 15.0);
    const ConditionParams params{1.0, 1.0, 2.0, 64};
    const ConditionReport one = check_conditions_exact(regimes, w, params, TailVariant::one_sided);
    const ConditionReport two = check_conditions_exact(regimes, w, params, TailVariant::two_sided);
    CHECK(one.overall() == Verdict::pass);
    CHECK(two.overall() == Verdict::fail);
    // e^{-15} > 2 * 2^{-j} first at j = 23.
    CHECK(two.find(22)->verdict == Verdict::pass);
    CHECK(two.find(23)->verdict == Verdict::fail);
    CHECK(two.find(23)->tail == doctest::Approx(3.059023205018258e-07).epsilon(1e-12));
    // The jump itself is inspected even though it lies far beyond j_max.
    CHECK(two.find(6538035.0) != nullptr);
  }

  TEST_CASE("geometric walk sits exactly on the bound") {
    const auto g = GeometricWalkConfig::make(0.2, 1.0);
    const JumpDistribution t = g.jump_table();
    CHECK(check_conditions_exact(t, {0.2, 1.0, 2.0, 64}, TailVariant::two_sided).overall() == Verdict::pass);
    CHECK(check_conditions_exact(t, {0.2, 1.0, 1.9, 64}, TailVariant::two_sided).tail_verdict() == Verdict::fail);
    CHECK(check_conditions_exact(t, {0.21, 1.0, 2.0, 64}, TailVariant::two_sided).drift_verdict == Verdict::fail);
  }

  TEST_CASE("two-sided pass implies one-sided pass") {
    RandomStream rng(41);
    int two_passes = 0;
    for (int rep = 0; rep < 300; ++rep) {
      std::vector<JumpAtom> atoms;
      double mass = 0.0;
      const int k = 2 + static_cast<int>(rng.below(8));
      for (int i = 0; i < k; ++i) {
        const double w = rng.uniform_positive();
        atoms.push_back({static_cast<double>(static_cast<int>(rng.below(13)) - 6), w});
        mass += w;
      }
      for (auto& a : atoms) a.prob /= mass;
      const auto d = JumpDistribution::from_atoms(atoms);
      const ConditionParams params{0.01, 0.3 + rng.uniform(), 1.0 + 3.0 * rng.uniform(), 64};
      const auto two = check_conditions_exact(d, params, TailVariant::two_sided);
      const auto one = check_conditions_exact(d, params, TailVariant::one_sided);
      if (two.tail_verdict() == Verdict::pass) {
        ++two_passes;
        CHECK(one.tail_verdict() == Verdict::pass);
      }
    }
    CHECK(two_passes > 0);
  }

  TEST_CASE("needle regimes pass with delta = 1, r = 2") {
    const auto regimes = *oneone_ea_needle(50)->exact_jumps();
    const auto rep = check_conditions_exact(regimes, DriftWindow(0.0, 12.0), {0.5, 1.0, 2.0, 64},
                                            TailVariant::two_sided);
    CHECK(rep.overall() == Verdict::pass);
    CHECK(rep.drift_estimate == doctest::Approx(1.0 - 22.0 / 50.0).epsilon(1e-12));
  }

  TEST_CASE("unnormalized tables are rejected") {
    const auto d = JumpDistribution::from_atoms({{1, 0.5}, {-1, 0.4}});
    CHECK_THROWS_AS(check_conditions_exact(d, {}, TailVariant::two_sided), ConfigError);
  }

  TEST_CASE("empirical: sample size floor") {
    const std::vector<double> few(99, 1.0);
    CHECK_THROWS_AS(check_conditions_empirical(few, {}, TailVariant::two_sided), ConfigError);
  }

  TEST_CASE("empirical: zero-observation rows need the upper limit below the bound") {
    std::vector<double> samples(1000, 1.0);
    const auto rep = check_conditions_empirical(samples, {0.5, 0.1, 2.0, 64}, TailVariant::two_sided);
    // Upper limit for 0/1000 is about 0.003; 2 / 1.1^j drops below it near j = 68.
    CHECK(rep.find(2)->count == 0);
    CHECK(rep.find(2)->verdict == Verdict::pass);
    CHECK(rep.tail_verdict() == Verdict::pass);
    const auto strict = check_conditions_empirical(samples, {0.5, 1.0, 2.0, 64}, TailVariant::two_sided);
    CHECK(strict.find(20)->verdict == Verdict::inconclusive);
    CHECK(strict.tail_verdict() == Verdict::inconclusive);
  }

  TEST_CASE("empirical: drift verdicts") {
    RandomStream rng(43);
    std::vector<double> samples;
    for (int i = 0; i < 5000; ++i) samples.push_back(rng.bernoulli(0.6) ? 1.0 : -1.0);  // mean 0.2
    const ConditionParams loose{0.1, 0.1, 2.0, 8};
    CHECK(check_conditions_empirical(samples, loose, TailVariant::two_sided).drift_verdict == Verdict::pass);
    const ConditionParams tight{0.5, 0.1, 2.0, 8};
    CHECK(check_conditions_empirical(samples, tight, TailVariant::two_sided).drift_verdict == Verdict::fail);
    const ConditionParams edge{0.2, 0.1, 2.0, 8};
    CHECK(check_conditions_empirical(samples, edge, TailVariant::two_sided).drift_verdict == Verdict::inconclusive);
  }

  TEST_CASE("empirical: heavy jumps fail the two-sided check") {
    std::vector<double> samples(2000, -1.0);
    for (std::size_t i = 0; i < samples.size(); i += 4) samples[i] = 30.0;
    const auto rep = check_conditions_empirical(samples, {0.1, 1.0, 2.0, 64}, TailVariant::two_sided);
    CHECK(rep.tail_verdict() == Verdict::fail);
    CHECK(check_conditions_empirical(samples, {0.1, 1.0, 2.0, 64}, TailVariant::one_sided).tail_verdict() !=
          Verdict::fail);
  }

  TEST_CASE("csv and summary") {
    const auto d = JumpDistribution::point_mass(1.0);
    const auto rep = check_conditions_exact(d, {1.0, 0.1, 2.0, 3}, TailVariant::two_sided);
    std::ostringstream out;
    write_csv(out, rep);
    CHECK(out.str().rfind("j,tail,ci_low,ci_high,count,bound,log_bound,verdict\n", 0) == 0);
    CHECK(summary(rep).find("overall:         pass") != std::string::npos);
    CHECK(parse_variant("one-sided") == TailVariant::one_sided);
    CHECK_THROWS_AS(parse_variant("both"), ConfigError);
  }
}
