"""Hot numeric kernels (float64 only).

Each kernel is compiled with numba when available; ``BELLMD_DISABLE_NUMBA=1``
falls back to the numpy implementation. Both paths return identical results
for identical inputs.
"""
from __future__ import annotations

import numpy as np

from ._accel import NUMBA_ENABLED, jit

OPTIMAL = 0
INFEASIBLE = 1
UNBOUNDED = 2
ITERATION_LIMIT = 3


@jit
def _pivot(T, basis, row, col):
    T[row, :] /= T[row, col]
    pivot_row = T[row, :].copy()
    T -= np.outer(T[:, col], pivot_row)
    T[row, :] = pivot_row
    basis[row] = col


@jit
def _bland_step(T, basis, n_allowed, tol):
    """One Bland-rule pivot on the last-row reduced costs (minimisation).

    Returns 0 if a pivot happened, 1 at optimality, 2 if unbounded.
    """
    m = T.shape[0] - 1
    col = -1
    for j in range(n_allowed):
        if T[m, j] < -tol:
            col = j
            break
    if col < 0:
        return 1
    row = -1
    best = np.inf
    for i in range(m):
        a = T[i, col]
        if a > tol:
            ratio = T[i, -1] / a
            if ratio < best - tol or (abs(ratio - best) <= tol and basis[i] < basis[row]):
                best = ratio
                row = i
    if row < 0:
        return 2
    _pivot(T, basis, row, col)
    return 0


def _simplex_dense(A, b, c, tol, max_iter):
    """Maximise ``c @ x`` subject to ``A @ x == b``, ``x >= 0``.

    Two-phase tableau simplex with Bland's rule. Returns
    ``(status, x, value, y)``; on infeasibility ``y`` is a Farkas vector with
    ``A.T @ y <= 0`` and ``b @ y > 0``, on optimality it holds the duals.
    """
    m, n = A.shape
    sign = np.ones(m)
    for i in range(m):
        if b[i] < 0:
            sign[i] = -1.0
    T = np.zeros((m + 1, n + m + 1))
    for i in range(m):
        T[i, :n] = sign[i] * A[i, :]
        T[i, n + i] = 1.0
        T[i, -1] = sign[i] * b[i]
    basis = np.empty(m, dtype=np.int64)
    for i in range(m):
        basis[i] = n + i

    # phase 1: minimise the sum of artificials
    for j in range(n):
        T[m, j] = -T[:m, j].sum()
    T[m, -1] = -T[:m, -1].sum()
    it = 0
    while True:
        it += 1
        if it > max_iter:
            return ITERATION_LIMIT, np.zeros(n), np.nan, np.zeros(m)
        step = _bland_step(T, basis, n, tol)
        if step == 1:
            break
    infeas = -T[m, -1]
    if infeas > tol * max(1.0, np.abs(b).max() if m > 0 else 1.0):
        y = np.empty(m)
        for i in range(m):
            y[i] = sign[i] * (1.0 - T[m, n + i])
        return INFEASIBLE, np.zeros(n), np.nan, y

    # drive zero-level artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if abs(T[i, j]) > tol:
                    _pivot(T, basis, i, j)
                    break

    # phase 2: minimise -c over original columns only
    cost = np.zeros(n + m)
    cost[:n] = -c
    for j in range(n + m):
        acc = cost[j]
        for i in range(m):
            acc -= cost[basis[i]] * T[i, j]
        T[m, j] = acc
    acc = 0.0
    for i in range(m):
        acc -= cost[basis[i]] * T[i, -1]
    T[m, -1] = acc
    while True:
        it += 1
        if it > max_iter:
            return ITERATION_LIMIT, np.zeros(n), np.nan, np.zeros(m)
        step = _bland_step(T, basis, n, tol)
        if step == 1:
            break
        if step == 2:
            return UNBOUNDED, np.zeros(n), np.inf, np.zeros(m)
    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i, -1]
    y = np.empty(m)
    for i in range(m):
        y[i] = sign[i] * T[m, n + i]
    return OPTIMAL, x, float(np.dot(c, x)), y


simplex_dense = jit(_simplex_dense)


def _sample_counts_loop(cum_prior, cum_cond, outputs, u_lam, u_z, counts, lam_out, z_out, o_out):
    for r in range(u_lam.shape[0]):
        lam = np.searchsorted(cum_prior, u_lam[r], side="right")
        if lam >= cum_prior.shape[0]:
            lam = cum_prior.shape[0] - 1
        z = np.searchsorted(cum_cond[lam], u_z[r], side="right")
        if z >= cum_cond.shape[1]:
            z = cum_cond.shape[1] - 1
        o = outputs[lam, z]
        counts[z, o] += 1
        if lam_out.shape[0] > 0:
            lam_out[r] = lam
            z_out[r] = z
            o_out[r] = o


def _sample_counts_numpy(cum_prior, cum_cond, outputs, u_lam, u_z, counts, lam_out, z_out, o_out):
    n_lam, n_set = cum_cond.shape
    lam = np.minimum(np.searchsorted(cum_prior, u_lam, side="right"), n_lam - 1)
    z = np.empty_like(lam)
    for k in range(n_lam):
        sel = lam == k
        if sel.any():
            z[sel] = np.searchsorted(cum_cond[k], u_z[sel], side="right")
    np.minimum(z, n_set - 1, out=z)
    o = outputs[lam, z]
    counts += np.bincount(z * counts.shape[1] + o, minlength=counts.size).reshape(counts.shape)
    if lam_out.shape[0] > 0:
        lam_out[:] = lam
        z_out[:] = z
        o_out[:] = o


sample_counts_numba = jit(_sample_counts_loop) if NUMBA_ENABLED else None


def sample_counts(cum_prior, cum_cond, outputs, u_lam, u_z, counts, lam_out, z_out, o_out):
    """Map uniform draws to (lambda, setting, outcome) and accumulate counts in place.

    ``counts`` has shape (joint settings, joint outcomes). The ``*_out`` arrays
    are filled only when non-empty.
    """
    if NUMBA_ENABLED:
        sample_counts_numba(cum_prior, cum_cond, outputs, u_lam, u_z, counts, lam_out, z_out, o_out)
    else:
        _sample_counts_numpy(cum_prior, cum_cond, outputs, u_lam, u_z, counts, lam_out, z_out, o_out)


def _vertex_values(outputs, coeffs):
    """Per-vertex, per-setting functional value ``coeffs[z, outputs[v, z]]``."""
    n_v, n_z = outputs.shape
    out = np.empty((n_v, n_z))
    for v in range(n_v):
        for z in range(n_z):
            out[v, z] = coeffs[z, outputs[v, z]]
    return out


vertex_values = jit(_vertex_values)
