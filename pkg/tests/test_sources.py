import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellmd.numeric import DOUBLE, RATIONAL
from bellmd.samplers import random_response_model
from bellmd.scenario import CHSH_SHAPE, ScenarioShape, bell_value, catalog, pr_box
from bellmd.sources import (
    InfeasiblePriorError,
    SettingDistribution,
    SourceStrategy,
    SVParams,
    guessing_probability,
    m_prime,
    m_prime_bound_check,
    min_entropy,
    min_entropy_unconditioned,
    p_max_merit,
    p_min_merit,
    posteriors_from_strategy,
    response_model_from_strategy,
    solve_prior,
    source_polytope_vertices,
    strategy_general,
    strategy_hide_one,
    strategy_independent,
    strategy_theorem1,
    strategy_tilted_chsh,
    sv_check,
)

from conftest import brute_force_vertices


def observed_value(f, s):
    """Bell value of the observed behavior p(o|z) = sum_l p(l|z) e_l(o|z)."""
    post, _ = posteriors_from_strategy(s)
    flat = f.flat
    total = Fraction(0) if s.mode == RATIONAL else 0.0
    for zi in range(s.shape.num_settings):
        for l, strat in enumerate(s.outputs):
            total += post[zi, l] * flat[zi, strat.outputs()[zi]]
    return total


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("bound", [Fraction(1, 5), Fraction(27, 100), Fraction(1, 3), Fraction(1, 2), Fraction(7, 10)])
def test_polytope_matches_support_oracle(n, bound):
    if bound * n < 1:
        with pytest.raises(ValueError):
            source_polytope_vertices(n, bound)
        return
    got = source_polytope_vertices(n, bound)
    assert set(got) == brute_force_vertices(n, bound)
    assert len(got) == len(set(got))


def test_polytope_double_mode():
    got = source_polytope_vertices(4, 0.3, DOUBLE)
    ref = brute_force_vertices(4, Fraction(3, 10))
    assert len(got) == len(ref)
    assert all(abs(sum(v) - 1) < 1e-12 for v in got)


def test_theorem1_chsh_strategy():
    f = catalog("chsh")
    s = strategy_theorem1(CHSH_SHAPE, f)
    assert p_max_merit(s) == Fraction(1, 3)
    assert p_min_merit(s) == 0
    assert min_entropy(s) == pytest.approx(math.log2(3))
    assert min_entropy_unconditioned(s) == pytest.approx(2.0)
    assert list(s.induced_p_obs().probs) == [Fraction(1, 4)] * 4
    assert observed_value(f, s) == 4


def test_theorem1_reproduces_target():
    f = catalog("chsh")
    s = strategy_theorem1(CHSH_SHAPE, target=pr_box())
    assert len(s.lambdas) == 8
    assert observed_value(f, s) == 4
    assert p_max_merit(s) == Fraction(1, 3)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_hide_one_chained(m):
    f = catalog("chained", m=m)
    s = strategy_hide_one(f)
    assert p_max_merit(s) == Fraction(1, m * m - 1)
    assert observed_value(f, s) == 2 * m


def test_general_strategy_formula():
    f = catalog("chsh")
    pm = Fraction(3, 10)
    s = strategy_general(f, pm)
    for row in s.conditionals:
        assert sorted(row) == [1 - 3 * pm] + [pm] * 3
    assert p_max_merit(s) == pm
    # interpolates between measurement independence and the faking source
    assert observed_value(f, s) == 24 * pm - 4
    with pytest.raises(ValueError):
        strategy_general(f, Fraction(1, 5))
    with pytest.raises(ValueError):
        strategy_general(f, Fraction(2, 5))


def test_tilted_strategy():
    s = strategy_tilted_chsh()
    for alpha in (Fraction(0), Fraction(1, 2), Fraction(1)):
        assert observed_value(catalog("tilted_chsh", alpha=alpha), s) == 4 + alpha


def test_independent_source_has_zero_mprime():
    s = strategy_independent(CHSH_SHAPE)
    post, p_obs = posteriors_from_strategy(s)
    assert m_prime(post, p_obs) == 0


def test_guessing_probability_and_entropy():
    s = strategy_theorem1(CHSH_SHAPE)
    assert guessing_probability(s) == Fraction(1, 3)


def test_sv_check():
    s = strategy_theorem1(CHSH_SHAPE)
    assert sv_check(s, SVParams(Fraction(0), Fraction(1, 3)))
    assert not sv_check(s, SVParams(Fraction(1, 10), Fraction(1, 3)))
    with pytest.raises(ValueError):
        SVParams(Fraction(1, 2), Fraction(1, 3)).validate(4)


def test_strategy_validation():
    with pytest.raises(ValueError):
        SourceStrategy(CHSH_SHAPE, ("a",), [Fraction(1)], [[Fraction(1, 2)] * 4])
    with pytest.raises(ValueError):
        SettingDistribution(CHSH_SHAPE, [0.5, 0.5, 0.5, -0.5])


def test_solve_prior_unique():
    s = strategy_theorem1(CHSH_SHAPE)
    sol = solve_prior(s.conditionals.T, [Fraction(1, 4)] * 4)
    assert sol.unique
    assert list(sol.prior) == [Fraction(1, 4)] * 4


def test_solve_prior_infeasible_certificate():
    s = strategy_theorem1(CHSH_SHAPE)
    M = s.conditionals.T
    # every column puts at most 1/3 on a setting, so 7/10 is out of reach
    target = [Fraction(7, 10), Fraction(1, 10), Fraction(1, 10), Fraction(1, 10)]
    with pytest.raises(InfeasiblePriorError) as info:
        solve_prior(M, target)
    y = info.value.certificate
    assert all(v <= 0 for v in M.T @ y)
    assert sum(a * b for a, b in zip(target, y)) > 0


def test_solve_prior_underdetermined_max_entropy():
    s = strategy_theorem1(CHSH_SHAPE, target=pr_box())
    sol = solve_prior(s.conditionals.T, [Fraction(1, 4)] * 4)
    assert not sol.unique
    p = np.asarray(sol.prior, dtype=float)
    assert np.allclose(np.asarray(s.conditionals.T, dtype=float) @ p, 0.25)
    # symmetric problem: maximum entropy spreads evenly
    assert np.allclose(p, 1 / 8, atol=1e-6)


def test_mprime_direct():
    post = np.array([[1.0, 0.0], [0.0, 1.0]])
    p_obs = np.array([0.5, 0.5])
    # marginal (1/2, 1/2): each row is at L1 distance 1
    assert m_prime(post, p_obs) == pytest.approx(1.0)
    exact = np.array([[Fraction(1), Fraction(0)], [Fraction(1, 2), Fraction(1, 2)]], dtype=object)
    assert m_prime(exact, np.array([Fraction(1, 2)] * 2, dtype=object)) == Fraction(1, 2)


@pytest.mark.parametrize("seed", range(10))
def test_mprime_bound_random(seed):
    model = random_response_model(np.random.default_rng(seed))
    check = m_prime_bound_check(model)
    assert check.holds
    assert 0 <= check.m_prime <= 2


def test_bound_from_strategy():
    model = response_model_from_strategy(strategy_theorem1(CHSH_SHAPE, catalog("chsh")))
    check = m_prime_bound_check(model)
    assert check.holds
    # p(l|z) is 1/3 on three anchors, p(l) = 1/4: 3 * 1/12 + 1/4
    assert check.m_prime == pytest.approx(0.5)


probs = st.lists(st.integers(0, 20), min_size=2, max_size=6).filter(lambda v: sum(v) > 0)


@settings(max_examples=60, deadline=None)
@given(probs)
def test_min_max_merit_relation(weights):
    d = len(weights)
    p = [Fraction(w, sum(weights)) for w in weights]
    assert min(p) >= 1 - (d - 1) * max(p)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 3))
def test_mprime_data_processing(seed, merge):
    # merging hidden-variable values can only shrink M'
    rng = np.random.default_rng(seed)
    post = rng.dirichlet(np.ones(5), size=4)
    p_obs = rng.dirichlet(np.ones(4))
    merged = np.concatenate([post[:, :merge].sum(axis=1, keepdims=True), post[:, merge:]], axis=1)
    assert m_prime(merged, p_obs) <= m_prime(post, p_obs) + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_mprime_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    post = rng.dirichlet(np.ones(4), size=3)
    p_obs = rng.dirichlet(np.ones(3))
    perm = rng.permutation(4)
    assert m_prime(post[:, perm], p_obs) == pytest.approx(m_prime(post, p_obs))
