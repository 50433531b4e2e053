#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "driftlab/error.hpp"
#include "driftlab/jump_distribution.hpp"

using namespace drift;

TEST_SUITE("jump_distribution") {
  TEST_CASE("atoms are merged and zero mass dropped") {
    const auto d = JumpDistribution::from_atoms({{1, 0.25}, {-2, 0.5}, {1, 0.25}, {5, 0.0}});
    REQUIRE(d.atoms().size() == 2);
    CHECK(d.atoms()[0].value == -2);
    CHECK(d.atoms()[1].prob == doctest::Approx(0.5));
    CHECK(d.is_normalized());
    CHECK(d.mean() == doctest::Approx(-0.5));
    CHECK(d.max_abs() == 2);
  }

  TEST_CASE("negative mass is rejected") {
    CHECK_THROWS_AS(JumpDistribution::from_atoms({{1, -0.1}, {2, 1.1}}), ConfigError);
  }

  TEST_CASE("tails") {
    const auto d = JumpDistribution::from_atoms({{-3, 0.1}, {-1, 0.2}, {0, 0.3}, {2, 0.4}});
    CHECK(d.abs_tail(0) == doctest::Approx(1.0));
    CHECK(d.abs_tail(1) == doctest::Approx(0.7));
    CHECK(d.abs_tail(2) == doctest::Approx(0.5));
    CHECK(d.abs_tail(3) == doctest::Approx(0.1));
    CHECK(d.abs_tail(4) == 0.0);
    CHECK(d.lower_tail(1) == doctest::Approx(0.3));
    CHECK(d.lower_tail(2) == doctest::Approx(0.1));
    CHECK(d.upper_tail(1) == doctest::Approx(0.4));
    CHECK(d.upper_tail(3) == 0.0);
  }

  TEST_CASE("log abs mgf matches direct sum") {
    const auto d = JumpDistribution::from_atoms({{-3, 0.1}, {-1, 0.2}, {0, 0.3}, {2, 0.4}});
    const double g = 0.7;
    const double direct = 0.1 * std::exp(3 * g) + 0.2 * std::exp(g) + 0.3 + 0.4 * std::exp(2 * g);
    CHECK(d.log_abs_mgf(g) == doctest::Approx(std::log(direct)).epsilon(1e-14));
  }

  TEST_CASE("sampling follows the table (chi-square, 10^5 draws)") {
    const auto d = JumpDistribution::from_atoms({{-3, 0.1}, {-1, 0.2}, {0, 0.3}, {2, 0.4}});
    RandomStream rng(3);
    std::map<double, int> counts;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[d.sample(rng)];
    double chi2 = 0.0;
    for (const JumpAtom& a : d.atoms()) {
      const double expected = a.prob * draws;
      chi2 += (counts[a.value] - expected) * (counts[a.value] - expected) / expected;
    }
    CHECK(counts.size() == 4);
    CHECK(chi2 < 16.266);  // 99.9% quantile, 3 degrees of freedom
  }

  TEST_CASE("csv export") {
    const auto d = JumpDistribution::from_atoms({{-1, 0.5}, {0, 0.25}, {2, 0.25}});
    std::ostringstream out;
    d.write_csv(out);
    CHECK(out.str() == "j,p_plus,p_minus\n0,0.25,0\n1,0,0.5\n2,0.25,0\n");
  }
}
