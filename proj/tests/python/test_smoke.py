import math

import pytest

import driftlab as dl


def test_counterexample_hits_within_n():
    p = dl.counterexample_chain(15)
    est = dl.estimate_hitting_probability(p, 0.0, 15.0, trials=2000, horizon=15, seed=3)
    assert est.point >= 0.999
    assert est.ci_low <= est.point <= est.ci_high


def test_counterexample_condition_variants():
    p = dl.counterexample_chain(15)
    one = dl.check_conditions_exact(p, 0, 15, eps=1, delta=1, r=2, variant="one_sided")
    two = dl.check_conditions_exact(p, 0, 15, eps=1, delta=1, r=2, variant="two_sided")
    assert one.verdict == "pass"
    assert two.verdict == "fail"


def test_simulate_unit_walk():
    hits = dl.simulate(dl.constant_step_walk(7.0, -1.0), 0.0, 7.0, trials=1, max_steps=100)
    assert hits == [7]


def test_simulate_is_deterministic_across_threads():
    p = dl.geometric_drift_walk(0.2, 1.0, start=10.0)
    a = dl.simulate(p, 0.0, 10.0, trials=64, max_steps=2000, seed=9, threads=1)
    b = dl.simulate(p, 0.0, 10.0, trials=64, max_steps=2000, seed=9, threads=4)
    assert a == b


def test_constants_regression():
    c = dl.derive_constants(1.0, 1.0, 2.0, 1e4)
    assert c.gamma == pytest.approx(0.40546510810816438, rel=1e-12)
    assert c.c_bound == pytest.approx(85.157138759419650, rel=1e-12)
    assert c.lambda_ == pytest.approx(0.0058714983533273368, rel=1e-12)
    assert c.p_ell == pytest.approx(340.62855503767860, rel=1e-12)
    assert "lambda" in c.trace()


def test_lemma_geometric_example():
    # P(X >= i) = 2^-i, f(x) = x on x_min = 0: sum_i (i+1) 2^-i = 4, tail of the series as remainder.
    terms = 60
    remainder = sum((i + 1) * 2.0**-i for i in range(terms, 200))
    bound = dl.lemma_tail_bound(0.0, lambda i: 2.0**-i, lambda x: x, terms, remainder)
    assert bound == pytest.approx(4.0, rel=1e-12)


def test_inequality_chains_hold():
    for r in dl.mutation_tail_chain(50, 7) + dl.matching_jump_bound(40, 5, 6) + dl.diversity_bound(5, 3, 2):
        assert r.holds, r
    for r in dl.comma_lambda_bounds(100, 7, 5):
        assert r.holds, r


def test_pea_prime_expectations():
    s = dl.pea_prime_expected_selections([2.0, 1.5, 1.2, 1.0])
    assert s.status == "ok"
    assert s.sum_equals_mu
    assert math.fsum(s.expected) == pytest.approx(4.0, abs=1e-12)
    q = dl.pea_prime_selection([2.0, 1.5, 1.2, 1.0])
    assert math.fsum(q) == pytest.approx(1.0, abs=1e-12)


def test_config_errors_raise():
    with pytest.raises(ValueError):
        dl.counterexample_chain(1)
    with pytest.raises(dl.ConfigError):
        dl.matching_jump_bound(4, 3, 1)


def test_cli_round_trip():
    code, out, _ = dl.run_cli(["list-presets"])
    assert code == 0 and "counterexample-n15" in out
    code, _, _ = dl.run_cli(["check", "--preset", "counterexample-twosided"])
    assert code == 1
    code, _, err = dl.run_cli(["simulate", "--preset", "no-such-preset"])
    assert code == 2 and "unknown preset" in err
