"""Two-phase primal simplex for ``max c@x  s.t.  A@x = b, x >= 0``.

``solve_exact`` pivots on :class:`~fractions.Fraction` tableaus with Bland's
rule and is the reference path. ``solve_float`` runs the float64 kernel from
:mod:`bellmd.kernels`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .numeric import RATIONAL, as_fraction, check_mode

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"

_STATUS = {
    kernels.OPTIMAL: OPTIMAL,
    kernels.INFEASIBLE: INFEASIBLE,
    kernels.UNBOUNDED: UNBOUNDED,
    kernels.ITERATION_LIMIT: ITERATION_LIMIT,
}

FEASIBILITY_TOL = 1e-9
OPTIMALITY_TOL = 1e-9


@dataclass(frozen=True)
class RawSolution:
    status: str
    x: np.ndarray | None
    value: object
    y: np.ndarray | None


def _pivot(T, basis, row, col):
    inv = 1 / T[row][col]
    prow = [v * inv for v in T[row]]
    T[row] = prow
    nz = [k for k, v in enumerate(prow) if v]
    for i, trow in enumerate(T):
        if i == row:
            continue
        f = trow[col]
        if f:
            for k in nz:
                trow[k] -= f * prow[k]
    basis[row] = col


def _bland(T, basis, n_allowed):
    m = len(T) - 1
    obj = T[m]
    col = next((j for j in range(n_allowed) if obj[j] < 0), None)
    if col is None:
        return "optimal"
    row = None
    best = None
    for i in range(m):
        a = T[i][col]
        if a > 0:
            ratio = T[i][-1] / a
            if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                best, row = ratio, i
    if row is None:
        return "unbounded"
    _pivot(T, basis, row, col)
    return "pivot"


def solve_exact(A, b, c, max_iter: int = 100_000) -> RawSolution:
    A = [[as_fraction(v) for v in row] for row in np.asarray(A, dtype=object).reshape(len(b), -1)]
    b = [as_fraction(v) for v in b]
    c = [as_fraction(v) for v in c]
    m, n = len(b), len(c)
    zero = Fraction(0)
    sign = [-1 if bi < 0 else 1 for bi in b]
    T = []
    for i in range(m):
        row = [sign[i] * v for v in A[i]] + [zero] * m + [sign[i] * b[i]]
        row[n + i] = Fraction(1)
        T.append(row)
    basis = list(range(n, n + m))
    obj = [-sum((T[i][j] for i in range(m)), zero) for j in range(n)] + [zero] * m
    obj.append(-sum((T[i][-1] for i in range(m)), zero))
    T.append(obj)

    it = 0
    while _bland(T, basis, n) != "optimal":
        it += 1
        if it > max_iter:
            return RawSolution(ITERATION_LIMIT, None, None, None)
    if T[m][-1] != 0:
        y = np.array([sign[i] * (1 - T[m][n + i]) for i in range(m)], dtype=object)
        return RawSolution(INFEASIBLE, None, None, y)

    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j] != 0), None)
            if j is not None:
                _pivot(T, basis, i, j)

    cost = [-v for v in c] + [zero] * m
    for j in range(n + m):
        T[m][j] = cost[j] - sum((cost[basis[i]] * T[i][j] for i in range(m)), zero)
    T[m][-1] = -sum((cost[basis[i]] * T[i][-1] for i in range(m)), zero)
    while True:
        step = _bland(T, basis, n)
        if step == "optimal":
            break
        if step == "unbounded":
            return RawSolution(UNBOUNDED, None, None, None)
        it += 1
        if it > max_iter:
            return RawSolution(ITERATION_LIMIT, None, None, None)
    x = np.array([zero] * n, dtype=object)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    y = np.array([sign[i] * T[m][n + i] for i in range(m)], dtype=object)
    value = sum((ci * xi for ci, xi in zip(c, x)), zero)
    return RawSolution(OPTIMAL, x, value, y)


def solve_float(A, b, c, tol: float = FEASIBILITY_TOL, max_iter: int = 100_000) -> RawSolution:
    A = np.ascontiguousarray(np.asarray(A, dtype=np.float64).reshape(len(b), -1))
    b = np.ascontiguousarray(np.asarray(b, dtype=np.float64))
    c = np.ascontiguousarray(np.asarray(c, dtype=np.float64))
    status, x, value, y = kernels.simplex_dense(A, b, c, tol, max_iter)
    status = _STATUS[int(status)]
    if status != OPTIMAL:
        x = None
        value = None if status != UNBOUNDED else np.inf
    if status not in (OPTIMAL, INFEASIBLE):
        y = None
    return RawSolution(status, x, value, y)


def solve(A, b, c, mode: str = RATIONAL) -> RawSolution:
    """Dispatch on numeric mode."""
    check_mode(mode)
    if mode == RATIONAL:
        return solve_exact(A, b, c)
    return solve_float(A, b, c)
