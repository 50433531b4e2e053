#include <doctest.h>

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "driftlab/random.hpp"
#include "driftlab/stats.hpp"

using namespace drift;

TEST_SUITE("random") {
  TEST_CASE("derive_seed is the splitmix64 stream") {
    // First SplitMix64 output for state 0.
    CHECK(derive_seed(0, 0) == 0xe220a8397b1dcdafull);
    CHECK(derive_seed(7, 3) == mix64(7 + 4 * kGoldenGamma));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
    CHECK(seen.size() == 1000);
  }

  TEST_CASE("streams are reproducible") {
    RandomStream a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(a.bits() == b.bits());
  }

  TEST_CASE("uniform ranges") {
    RandomStream rng(1);
    for (int i = 0; i < 100000; ++i) {
      const double u = rng.uniform();
      const double v = rng.uniform_positive();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      REQUIRE(v > 0.0);
      REQUIRE(v <= 1.0);
    }
  }

  TEST_CASE("below is uniform (chi-square, 10^5 draws)") {
    RandomStream rng(11);
    std::array<int, 10> counts{};
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[rng.below(10)];
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - draws / 10.0) * (c - draws / 10.0) / (draws / 10.0);
    // 99.9% quantile of chi-square with 9 degrees of freedom.
    CHECK(chi2 < 27.877);
  }
}

TEST_SUITE("stats") {
  TEST_CASE("wilson interval oracle") {
    const Interval ci = wilson_interval(5, 10);
    CHECK(ci.low == doctest::Approx(0.236593090512564).epsilon(1e-12));
    CHECK(ci.high == doctest::Approx(0.763406909487436).epsilon(1e-12));
    const Interval none = wilson_interval(0, 200);
    CHECK(none.low == 0.0);
    CHECK(none.high == doctest::Approx(0.0188453263772665735).epsilon(1e-12));
    const Interval all = wilson_interval(200, 200);
    CHECK(all.high == 1.0);
    CHECK(all.low < 1.0);
  }

  TEST_CASE("zero count upper limit") {
    CHECK(zero_count_upper_limit(100) == doctest::Approx(0.0295130496070399345).epsilon(1e-12));
  }

  TEST_CASE("student t quantile") {
    CHECK(student_t_quantile(10, 0.975) == doctest::Approx(2.2281388519862747).epsilon(1e-12));
  }

  TEST_CASE("summarize") {
    const std::vector<double> xs{1, 2, 3, 4};
    const SampleSummary s = summarize(xs);
    CHECK(s.count == 4);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.std_dev == doctest::Approx(std::sqrt(5.0 / 3.0)));
    const Interval ci = s.mean_interval();
    CHECK(ci.low < 2.5);
    CHECK(ci.high > 2.5);
  }
}
