#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "driftlab/analytic_bounds.hpp"
#include "driftlab/error.hpp"
#include "driftlab/random.hpp"

using namespace drift;

namespace {

const InequalityResult& link(const InequalityChain& chain, const std::string& name) {
  const auto it = std::find_if(chain.begin(), chain.end(), [&](const InequalityResult& r) { return r.name == name; });
  REQUIRE(it != chain.end());
  return *it;
}

void check_consistent(const InequalityChain& chain) {
  for (const InequalityResult& r : chain) {
    CHECK(r.holds == (r.lhs <= r.rhs));
    CHECK(std::isfinite(r.margin));
    CHECK(r.margin == r.rhs - r.lhs);
  }
}

}  // namespace

TEST_SUITE("analytic_bounds") {
  TEST_CASE("mutation chain oracle n=100, j=20") {
    const auto chain = mutation_tail_chain(100, 20);
    check_consistent(chain);
    const auto& first = link(chain, "mutation.choose_le_inverse_factorial");
    CHECK(std::log(first.lhs) == doctest::Approx(-44.372768910645526).epsilon(1e-12));
    CHECK(std::log(first.rhs) == doctest::Approx(-42.335616460753485).epsilon(1e-12));
    const auto& second = link(chain, "mutation.inverse_factorial_le_geometric");
    CHECK(std::log(second.rhs) == doctest::Approx(-13.169796430638961).epsilon(1e-12));
    for (const auto& r : chain) CHECK(r.holds);
  }

  TEST_CASE("mutation equalities are exact") {
    // j = n: both sides of the union link equal n^{-n}; j = 1, 2: 1/j! = 2^{1-j}.
    for (int n = 1; n <= 40; ++n) {
      const auto chain = mutation_tail_chain(n, n);
      CHECK(link(chain, "mutation.flip_tail_le_union").margin == 0.0);
      CHECK(link(chain, "mutation.flip_tail_le_union").holds);
    }
    CHECK(link(mutation_tail_chain(10, 2), "mutation.inverse_factorial_le_geometric").margin == 0.0);
    CHECK_THROWS_AS(mutation_tail_chain(5, 0), ConfigError);
    CHECK_THROWS_AS(mutation_tail_chain(5, 6), ConfigError);
  }

  TEST_CASE("mutation chain beyond the exact range") {
    const auto chain = mutation_tail_chain(5000, 300);
    check_consistent(chain);
    for (const auto& r : chain) CHECK(r.holds);
    CHECK(link(chain, "mutation.choose_le_inverse_factorial").log_scale);
  }

  TEST_CASE("matching chain") {
    const auto chain = matching_jump_bound(10, 2, 3);
    check_consistent(chain);
    for (const auto& r : chain) CHECK(r.holds);
    // sum_{i=3}^{7} (4/100)^i
    double sum = 0.0;
    for (int i = 3; i <= 7; ++i) sum += std::pow(0.04, i);
    CHECK(link(chain, "matching.sum_le_m_first_term").lhs == doctest::Approx(sum).epsilon(1e-12));
    CHECK(link(chain, "matching.ratio_identity").margin == 0.0);
    // e/4 <= 22/32 at m = 2, j = 5 (in logs).
    const auto& tight = link(matching_jump_bound(2, 1, 5), "matching.ratio_le_geometric");
    CHECK(tight.holds);
    CHECK(tight.lhs == doctest::Approx(0.67957045711476131).epsilon(1e-12));
    CHECK(tight.rhs == doctest::Approx(0.6875).epsilon(1e-12));
  }

  TEST_CASE("matching empty sum and preconditions") {
    const auto chain = matching_jump_bound(10, 2, 6);
    CHECK(link(chain, "matching.sum_le_m_first_term").lhs == 0.0);
    CHECK(link(chain, "matching.sum_le_m_first_term").holds);
    CHECK_THROWS_AS(matching_jump_bound(4, 3, 1), ConfigError);
    CHECK_THROWS_AS(matching_jump_bound(1, 1, 1), ConfigError);
    CHECK_THROWS_AS(matching_jump_bound(4, 1, -1), ConfigError);
  }

  TEST_CASE("diversity chain oracle mu=5, phi=3, j=2") {
    const auto chain = diversity_bound(5, 3, 2);
    check_consistent(chain);
    for (const auto& r : chain) CHECK(r.holds);
    CHECK(link(chain, "diversity.reindex_identity").lhs == 0.0);
    CHECK(link(chain, "diversity.finite_le_series").lhs == doctest::Approx(0.14333333333333333).epsilon(1e-14));
    CHECK(link(chain, "diversity.series_le_closed_form").lhs == doctest::Approx(0.14365636569180905).epsilon(1e-12));
    CHECK(link(chain, "diversity.series_le_closed_form").rhs == doctest::Approx(0.27182818284590452).epsilon(1e-12));
  }

  TEST_CASE("comma chain oracle n=100, lambda=7, j=5") {
    const auto chain = comma_lambda_bounds(100, 7, 5);
    check_consistent(chain);
    for (const auto& r : chain) CHECK(r.holds);
    const auto& first = link(chain, "comma.choose_le_inverse_factorial");
    CHECK(first.lhs == doctest::Approx(0.052701264).epsilon(1e-8));
    CHECK(first.rhs == doctest::Approx(7.0 / 120.0).epsilon(1e-14));
    CHECK(link(chain, "comma.inverse_factorial_le_geometric").rhs == doctest::Approx(0.4375).epsilon(1e-14));
    CHECK(std::log(link(chain, "comma.copy_probability_premise").lhs) ==
          doctest::Approx(std::log(0.18393972058572116)).epsilon(1e-12));
  }

  TEST_CASE("pea prime expectations") {
    const std::vector<double> f{2.0, 1.5, 1.25, 1.0};
    const SelectionExpectations s = pea_prime_expected_selections(f);
    CHECK(s.status == SelectionStatus::ok);
    CHECK(s.premise_holds);
    CHECK(s.sum_equals_mu);
    // E(S_1) = 1 + 3 * 2/5.75 - 3/4
    CHECK(s.expected[0] == doctest::Approx(1.0 + 3.0 * 2.0 / 5.75 - 0.75).epsilon(1e-14));
    CHECK(s.expected[3] == doctest::Approx(3.0 * 1.0 / 5.75 + 0.25).epsilon(1e-14));
    check_consistent(s.results);
  }

  TEST_CASE("pea prime premise failure is reported separately") {
    // f_1 / f_tot = 0.9 > 2/mu
    const std::vector<double> f{9.0, 0.5, 0.5};
    const SelectionExpectations s = pea_prime_expected_selections(f);
    CHECK_FALSE(s.premise_holds);
    CHECK(s.status == SelectionStatus::premise_fail);
    CHECK(s.sum_equals_mu);
    CHECK_THROWS_AS(pea_prime_expected_selections(std::vector<double>{1.0, 2.0}), ConfigError);
    CHECK_THROWS_AS(pea_prime_expected_selections(std::vector<double>{0.0, 0.0}), ConfigError);
  }

  TEST_CASE("log spaced grid") {
    const auto g = log_spaced(2, 10000, 40);
    CHECK(g.front() == 2);
    CHECK(g.back() == 10000);
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(std::adjacent_find(g.begin(), g.end()) == g.end());
  }

  TEST_CASE("small sweeps stream every result") {
    SweepGrid grid;
    grid.mutation_n_max = 30;
    std::uint64_t rows = 0;
    const SweepTotals t = run_sweep("mutation", grid, [&](const InequalityResult&) { ++rows; });
    CHECK(t.failures == 0);
    CHECK(rows == t.results);
    CHECK(rows == 3 * 30 * 31 / 2);
    CHECK_THROWS_AS(run_sweep("nope", grid, {}), ConfigError);
    grid.mutation_n_max = 0;
    CHECK(run_sweep("mutation", grid, {}).results == 0);
  }

  TEST_CASE("csv row") {
    std::ostringstream out;
    write_csv_header(out);
    write_csv_row(out, mutation_tail_chain(2, 1)[1]);
    CHECK(out.str() == "name,parameters,lhs,rhs,margin,holds,scale\n"
                       "mutation.choose_le_inverse_factorial,n=2;j=1,1,1,0,true,linear\n");
  }
}
