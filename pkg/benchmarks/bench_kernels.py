"""Compare the numba kernels with their plain numpy/Python fallbacks.

    python3 benchmarks/bench_kernels.py [--rounds N] [--repeat R]

Run with BELLMD_DISABLE_NUMBA=1 to time the fallback-only configuration;
otherwise both paths are timed in one process (the fallback via ``py_func``).
"""
from __future__ import annotations

import argparse
import time
from fractions import Fraction

import numpy as np

from bellmd import kernels
from bellmd._accel import NUMBA_ENABLED
from bellmd.numeric import DOUBLE, to_array
from bellmd.scenario import catalog, local_vertex_outputs
from bellmd.sources import source_polytope_vertices


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def sampling_inputs(rounds, seed=0):
    rng = np.random.default_rng(seed)
    L, S, O = 8, 9, 4
    cum_prior = np.cumsum(rng.dirichlet(np.ones(L)))
    cum_prior[-1] = 1.0
    cum_cond = np.cumsum(rng.dirichlet(np.ones(S), size=L), axis=1)
    cum_cond[:, -1] = 1.0
    outputs = rng.integers(0, O, size=(L, S)).astype(np.int64)
    return cum_prior, np.ascontiguousarray(cum_cond), outputs, rng.random(rounds), rng.random(rounds), (S, O)


def bench_sampling(rounds, repeat):
    cp, cc, out, ul, uz, (S, O) = sampling_inputs(rounds)
    empty = np.zeros(0, dtype=np.int64)

    def call(fn):
        return lambda: fn(cp, cc, out, ul, uz, np.zeros((S, O), dtype=np.int64), empty, empty, empty)

    rows = [("sample_counts numpy", best_of(call(kernels._sample_counts_numpy), repeat))]
    if NUMBA_ENABLED:
        call(kernels.sample_counts_numba)()  # compile
        rows.append(("sample_counts numba", best_of(call(kernels.sample_counts_numba), repeat)))
    small = max(rounds // 20, 1)
    cp, cc, out, ul, uz, _ = sampling_inputs(small)
    loop = best_of(lambda: kernels._sample_counts_loop(cp, cc, out, ul, uz, np.zeros((S, O), dtype=np.int64), empty, empty, empty), 1)
    rows.append((f"sample_counts python loop (x{rounds // small} extrapolated)", loop * rounds / small))
    return rows


def lp_inputs(m=3, pm=Fraction(1, 7)):
    f = catalog("chained", m=m, mode=DOUBLE)
    S = m * m
    probs = np.full(S, 1.0 / S)
    F = to_array(source_polytope_vertices(S, pm, DOUBLE), DOUBLE)
    outputs = local_vertex_outputs(f.shape)
    obj = f.vertex_values(outputs) @ (F / probs).T
    A = np.ascontiguousarray(np.tile(F.T, (1, len(outputs))))
    return A, probs, np.ascontiguousarray(obj.reshape(-1))


def bench_simplex(repeat):
    A, b, c = lp_inputs()
    rows = []
    py = kernels.simplex_dense.py_func
    rows.append((f"simplex_dense python ({A.shape[0]}x{A.shape[1]})", best_of(lambda: py(A, b, c, 1e-9, 100_000), repeat)))
    if NUMBA_ENABLED:
        kernels.simplex_dense(A, b, c, 1e-9, 100_000)
        rows.append((f"simplex_dense numba ({A.shape[0]}x{A.shape[1]})", best_of(lambda: kernels.simplex_dense(A, b, c, 1e-9, 100_000), repeat)))
        v1 = py(A, b, c, 1e-9, 100_000)[2]
        v2 = kernels.simplex_dense(A, b, c, 1e-9, 100_000)[2]
        assert abs(v1 - v2) < 1e-9, (v1, v2)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rounds", type=int, default=2_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"numba enabled: {NUMBA_ENABLED}")
    for name, t in bench_sampling(args.rounds, args.repeat) + bench_simplex(args.repeat):
        print(f"{name:55s} {t * 1e3:10.2f} ms")


if __name__ == "__main__":
    main()
