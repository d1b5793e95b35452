from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from bellmd import simplex
from bellmd.numeric import DOUBLE, RATIONAL, as_fraction, format_number, parse_number, to_array


def F(*vals):
    return np.array([Fraction(v) for v in vals], dtype=object)


def test_small_max_problem_exact():
    # max 3x + 2y, x + y + s1 = 4, x + 3y + s2 = 6
    A = np.array([[1, 1, 1, 0], [1, 3, 0, 1]], dtype=object)
    sol = simplex.solve_exact(A, F(4, 6), F(3, 2, 0, 0))
    assert sol.status == simplex.OPTIMAL
    assert sol.value == 12
    assert list(sol.x[:2]) == [4, 0]


def test_infeasible_certificate_exact():
    A = np.array([[1, 1], [1, 1]], dtype=object)
    b = F(1, 2)
    sol = simplex.solve_exact(A, b, F(0, 0))
    assert sol.status == simplex.INFEASIBLE
    y = sol.y
    assert all(v <= 0 for v in A.T @ y)
    assert b @ y > 0


def test_redundant_rows_are_harmless():
    A = np.array([[1, 1, 0], [2, 2, 0], [0, 1, 1]], dtype=object)
    sol = simplex.solve_exact(A, F(1, 2, 1), F(1, 0, 0))
    assert sol.status == simplex.OPTIMAL
    assert sol.value == 1


@pytest.mark.parametrize("seed", range(15))
def test_random_lps_agree_with_highs(seed):
    rng = np.random.default_rng(seed)
    m, n = 4, 9
    A = rng.integers(-3, 4, size=(m, n))
    x0 = rng.integers(0, 3, size=n)
    b = A @ x0
    c = rng.integers(-5, 3, size=n)
    ref = linprog(-c, A_eq=A, b_eq=b, bounds=[(0, 10)] * n, method="highs")
    # add box constraints as extra rows with slacks to keep the LP bounded
    Ab = np.block([[A, np.zeros((m, n), dtype=int)], [np.eye(n, dtype=int), np.eye(n, dtype=int)]])
    bb = np.concatenate([b, np.full(n, 10)])
    cb = np.concatenate([c, np.zeros(n, dtype=int)])
    exact = simplex.solve(to_array(Ab, RATIONAL), to_array(bb, RATIONAL), to_array(cb, RATIONAL), RATIONAL)
    fast = simplex.solve(Ab.astype(float), bb.astype(float), cb.astype(float), DOUBLE)
    assert exact.status == simplex.OPTIMAL
    assert float(exact.value) == pytest.approx(-ref.fun, abs=1e-9)
    assert fast.value == pytest.approx(-ref.fun, abs=1e-7)
    assert all(v >= 0 for v in exact.x)
    assert list(Ab @ exact.x) == list(bb)


@pytest.mark.parametrize("seed", range(10))
def test_random_infeasible_systems_yield_certificates(seed):
    rng = np.random.default_rng(100 + seed)
    A = rng.integers(0, 3, size=(3, 5))
    b = -rng.integers(1, 4, size=3)  # nonnegative combos cannot be negative
    for mode in (RATIONAL, DOUBLE):
        sol = simplex.solve(to_array(A, mode), to_array(b, mode), to_array(np.zeros(5), mode), mode)
        assert sol.status == simplex.INFEASIBLE
        y = np.asarray(sol.y, dtype=float)
        assert (A.T @ y <= 1e-9).all()
        assert b @ y > 0


def test_number_helpers():
    assert as_fraction(0.29) == Fraction(29, 100)
    assert as_fraction("1/3") == Fraction(1, 3)
    assert format_number(Fraction(62, 25)) == "62/25"
    assert format_number(2 ** 0.5) == "1.41421356237"
    assert parse_number("1/4", DOUBLE) == 0.25
