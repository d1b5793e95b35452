"""Linear programs over local and source polytope vertices.

The maximal Bell value reachable by local measurement-dependent models with
``P_M <= p_max_bound`` and observed setting distribution ``p_obs`` is an LP
over mixture weights ``gamma[i, j]`` of product vertices
``g_ij(o, z) = e_i(o|z) f_j(z)``, where ``e_i`` are deterministic local
strategies and ``f_j`` vertices of the source polytope.
"""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import simplex
from .numeric import DOUBLE, RATIONAL, as_fraction, check_mode, convert, format_number, to_array
from .scenario import Behavior, BellFunctional, local_vertex_outputs
from .sources import SettingDistribution, source_polytope_vertices

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
CAPPED = "capped"

DEFAULT_BASIS_CAP = 10**6


@dataclass(frozen=True, eq=False)
class LPSolution:
    """Result of an LP solve.

    ``weights`` is ``gamma`` with shape (local vertices, source vertices)
    for :func:`max_bell` and shape (local vertices,) for membership checks.
    ``certificate`` is a Farkas vector ``y`` over the equality rows when
    infeasible: ``A.T @ y <= 0`` and ``b @ y > 0``.
    """

    status: str
    value: object = None
    weights: np.ndarray | None = None
    certificate: np.ndarray | None = None
    local_vertices: np.ndarray | None = field(default=None, repr=False)
    source_vertices: list | None = field(default=None, repr=False)
    message: str = ""

    @property
    def feasible(self) -> bool:
        return self.status == OPTIMAL

    def joint_table(self, num_outcomes: int) -> np.ndarray:
        """``p(o, z) = sum_ij gamma_ij e_i(o|z) f_j(z)`` as (settings, outcomes) array."""
        if self.weights is None or self.weights.ndim != 2:
            raise ValueError("no product-basis optimizer available")
        outputs = self.local_vertices
        F = self.source_vertices
        n_z = outputs.shape[1]
        exact = self.weights.dtype == object
        zero = Fraction(0) if exact else 0.0
        table = np.full((n_z, num_outcomes), zero, dtype=object if exact else np.float64)
        nz = np.argwhere(np.asarray(self.weights != 0, dtype=bool))
        for i, j in nz:
            g = self.weights[i, j]
            for z in range(n_z):
                table[z, outputs[i, z]] += g * F[j][z]
        return table


def _probs(p_obs, f: BellFunctional, mode: str) -> np.ndarray:
    probs = p_obs.probs if isinstance(p_obs, SettingDistribution) else np.asarray(p_obs)
    probs = to_array(probs, mode).reshape(-1)
    if probs.shape != (f.shape.num_settings,):
        raise ValueError(f"p_obs needs {f.shape.num_settings} entries")
    return probs


def max_bell(
    f: BellFunctional,
    p_obs,
    p_max_bound,
    mode: str = RATIONAL,
    cap: int = DEFAULT_BASIS_CAP,
) -> LPSolution:
    """Maximal value of ``f`` over local models with ``P_M <= p_max_bound`` reproducing ``p_obs``.

    Objective ``sum_{o,z} c(o,z) p(o,z) / p_obs(z)``; constraints
    ``sum_ij gamma_ij f_j(z) = p_obs(z)``, ``gamma >= 0`` (normalisation is
    implied). Settings with ``p_obs(z) = 0`` must carry zero coefficients.
    A bound below ``max p_obs`` yields ``infeasible`` with a certificate.
    """
    check_mode(mode)
    shape = f.shape
    probs = _probs(p_obs, f, mode)
    bound = convert(p_max_bound, mode)
    S = shape.num_settings
    for z in f.used_settings:
        if probs[shape.setting_index(z)] == 0:
            raise ValueError(f"p_obs vanishes on used setting {z}; the normalised objective is undefined")

    if bound * S < 1 and not (mode == DOUBLE and abs(float(bound) * S - 1) < 1e-12):
        # empty source polytope: y = 1 certifies sum_z p_obs(z) = 1 > 0 with no columns
        return LPSolution(
            INFEASIBLE,
            certificate=to_array([1] * S, mode),
            message=f"p_max_bound {bound} < 1/{S}: source polytope is empty",
        )

    n_local = shape.num_vertices
    F = source_polytope_vertices(S, bound, mode)
    if n_local * len(F) > cap:
        return LPSolution(CAPPED, message=f"product basis of {n_local}x{len(F)} exceeds cap {cap}")
    outputs = local_vertex_outputs(shape)
    Fm = to_array(F, mode)  # (n_source, S)

    if mode == RATIONAL:
        coeff = f.flat if f.mode == RATIONAL else to_array(f.flat, RATIONAL)
        ratio = [[Fm[j, z] / probs[z] if probs[z] != 0 else Fraction(0) for z in range(S)] for j in range(len(F))]
        obj = np.empty((n_local, len(F)), dtype=object)
        for i in range(n_local):
            v = [coeff[z, outputs[i, z]] for z in range(S)]
            for j in range(len(F)):
                obj[i, j] = sum((v[z] * ratio[j][z] for z in range(S) if v[z] != 0), Fraction(0))
    else:
        V = f.vertex_values(outputs)
        safe = np.where(probs > 0, probs, 1.0)
        ratio = np.where(probs > 0, Fm / safe, 0.0)
        obj = V @ ratio.T

    A = np.tile(Fm.T, (1, n_local))  # column i*|F| + j holds f_j
    raw = simplex.solve(A, probs, obj.reshape(-1), mode)
    if raw.status == simplex.INFEASIBLE:
        return LPSolution(
            INFEASIBLE,
            certificate=raw.y,
            local_vertices=outputs,
            source_vertices=F,
            message="observed setting distribution lies outside the source polytope",
        )
    if raw.status != simplex.OPTIMAL:
        raise RuntimeError(f"LP ended with status {raw.status}")
    return LPSolution(
        OPTIMAL,
        value=raw.value,
        weights=raw.x.reshape(n_local, len(F)),
        local_vertices=outputs,
        source_vertices=F,
    )


def local_membership_on_subset(p: Behavior, subset, mode: str | None = None) -> LPSolution:
    """Whether a mixture of deterministic strategies matches ``p`` on every setting in ``subset``."""
    shape = p.shape
    subset = sorted({shape.validate_setting(z) for z in subset})
    if not subset:
        raise ValueError("subset must be nonempty")
    mode = mode or p.mode
    p = p.as_mode(mode)
    outputs = local_vertex_outputs(shape)
    n_v = outputs.shape[0]
    n_o = shape.num_outcomes
    rows, rhs = [], []
    for z in subset:
        zi = shape.setting_index(z)
        hit = outputs[:, zi]
        for o in range(n_o):
            rows.append((hit == o).astype(np.int64))
            rhs.append(p.flat[zi, o])
    rows.append(np.ones(n_v, dtype=np.int64))
    rhs.append(1)
    A = to_array(np.array(rows), mode)
    b = to_array(rhs, mode)
    raw = simplex.solve(A, b, [0] * n_v, mode)
    if raw.status == simplex.INFEASIBLE:
        return LPSolution(INFEASIBLE, certificate=raw.y, local_vertices=outputs)
    if raw.status != simplex.OPTIMAL:
        raise RuntimeError(f"LP ended with status {raw.status}")
    return LPSolution(OPTIMAL, value=0, weights=raw.x, local_vertices=outputs)


@dataclass(frozen=True)
class SweepRow:
    p_max: object
    bell_max: object
    status: str
    certificate: tuple | None = None


def _sweep_point(args):
    f, probs, pm, mode, cap = args
    try:
        sol = max_bell(f, probs, pm, mode, cap)
    except ValueError as exc:
        return SweepRow(pm, None, f"error: {exc}")
    cert = None if sol.certificate is None else tuple(sol.certificate)
    return SweepRow(pm, sol.value, sol.status, cert)


def sweep_max_bell(
    f: BellFunctional,
    p_obs,
    p_max_grid,
    mode: str = RATIONAL,
    cap: int = DEFAULT_BASIS_CAP,
    workers: int | None = None,
) -> list[SweepRow]:
    """One :func:`max_bell` solve per grid point; infeasible points are recorded, not raised.

    ``workers`` defaults to ``BELLMD_NUM_THREADS`` (1 when unset).
    """
    grid = list(p_max_grid)
    if any(float(a) > float(b) for a, b in zip(grid, grid[1:])):
        raise ValueError("p_max grid must be sorted ascending")
    probs = _probs(p_obs, f, mode)
    if workers is None:
        workers = int(os.environ.get("BELLMD_NUM_THREADS", "1") or 1)
    jobs = [(f, probs, convert(pm, mode), mode, cap) for pm in grid]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_point, jobs))
    return [_sweep_point(j) for j in jobs]


def parse_grid(spec: str) -> list:
    """``start:stop:step`` (stop exclusive, exact decimal arithmetic) or a comma list."""
    spec = spec.strip()
    if ":" not in spec:
        return [as_fraction(v) for v in spec.split(",") if v.strip()]
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:step, got {spec!r}")
    start, stop, step = (as_fraction(v) for v in parts)
    if step <= 0:
        raise ValueError("grid step must be positive")
    out = []
    v = start
    while v < stop:
        out.append(v)
        v += step
    return out


def sweep_to_csv(rows: list[SweepRow], stream=None) -> str:
    """CSV with header ``p_max,bell_max,status``.

    Exact values print as ``n/d``, floats at 12 significant digits.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p_max", "bell_max", "status"])
    for r in rows:
        writer.writerow([
            format_number(r.p_max),
            "" if r.bell_max is None else format_number(r.bell_max),
            r.status,
        ])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


__all__ = [
    "CAPPED",
    "INFEASIBLE",
    "LPSolution",
    "OPTIMAL",
    "SweepRow",
    "local_membership_on_subset",
    "max_bell",
    "parse_grid",
    "sweep_max_bell",
    "sweep_to_csv",
]
