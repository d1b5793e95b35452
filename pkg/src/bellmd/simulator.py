"""Round-by-round i.i.d. simulation of a Bell test driven by a source strategy."""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._accel import NUMBA_ENABLED
from .scenario import Behavior, BellFunctional
from .sources import SettingDistribution, SourceStrategy

RNG_ALGORITHM = "numpy.random.PCG64"
CHUNK_ROUNDS = 1_000_000
RECORD_LIMIT = 1_000_000


@dataclass(frozen=True, eq=False)
class ExperimentSummary:
    """Aggregated statistics of a simulated run.

    ``counts[z, o]`` are joint (setting, outcome) counts with flattened
    indices. ``bell_value`` is the plug-in estimate
    ``sum_z sum_o c(o,z) counts[z,o]/counts[z]`` over visited settings;
    ``undefined_settings`` lists used settings that were never drawn.
    """

    rounds: int
    seed: int
    rng_algorithm: str
    shape: object
    counts: np.ndarray
    bell_value: float | None
    bell_stderr: float | None
    undefined_settings: tuple = ()
    records: np.ndarray | None = field(default=None, repr=False)
    lambdas: tuple = ()

    @property
    def setting_counts(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def empirical_p_obs(self) -> SettingDistribution:
        return SettingDistribution(self.shape, self.setting_counts / self.rounds)

    @property
    def p_obs_stderr(self) -> np.ndarray:
        p = self.setting_counts / self.rounds
        return np.sqrt(p * (1 - p) / self.rounds)

    def conditional_frequencies(self) -> np.ndarray:
        """``counts[z, o] / counts[z]`` with NaN rows for unvisited settings."""
        n = self.setting_counts[:, None].astype(np.float64)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(n > 0, self.counts / np.where(n > 0, n, 1), np.nan)

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "seed": self.seed,
            "rng_algorithm": self.rng_algorithm,
            "settings": list(self.shape.settings),
            "outcomes": list(self.shape.outcomes),
            "setting_counts": [int(v) for v in self.setting_counts],
            "counts": self.counts.astype(int).tolist(),
            "empirical_p_obs": [float(v) for v in self.setting_counts / self.rounds],
            "p_obs_stderr": [float(v) for v in self.p_obs_stderr],
            "bell_value": self.bell_value,
            "bell_stderr": self.bell_stderr,
            "undefined_settings": [list(z) for z in self.undefined_settings],
        }

    def records_csv(self) -> str:
        """``round,lambda,z...,o...`` rows for retained records."""
        if self.records is None:
            raise ValueError("records were not kept; rerun with keep_records=True")
        K = self.shape.parties
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["round", "lambda"] + [f"z{k + 1}" for k in range(K)] + [f"o{k + 1}" for k in range(K)])
        for r, (lam, z, o) in enumerate(self.records):
            zt = np.unravel_index(int(z), self.shape.settings)
            ot = np.unravel_index(int(o), self.shape.outcomes)
            w.writerow([r, self.lambdas[int(lam)]] + [int(v) for v in zt] + [int(v) for v in ot])
        return buf.getvalue()


def _cumulative(rows: np.ndarray) -> np.ndarray:
    cum = np.cumsum(np.asarray(rows, dtype=np.float64), axis=-1)
    cum[..., -1] = 1.0
    return np.ascontiguousarray(cum)


def estimate_bell(f: BellFunctional, counts: np.ndarray):
    """Plug-in estimate and standard error; unvisited used settings are skipped."""
    shape = f.shape
    c = np.asarray(f.flat, dtype=np.float64)
    n_z = counts.sum(axis=1)
    value, var = 0.0, 0.0
    undefined = []
    for z in range(shape.num_settings):
        if not np.any(c[z] != 0):
            continue
        if n_z[z] == 0:
            undefined.append(shape.setting_tuple(z))
            continue
        freq = counts[z] / n_z[z]
        mean = float(c[z] @ freq)
        second = float((c[z] ** 2) @ freq)
        value += mean
        var += max(second - mean**2, 0.0) / n_z[z]
    return value, math.sqrt(var), tuple(undefined)


def simulate(
    s: SourceStrategy,
    f: BellFunctional,
    rounds: int,
    seed: int,
    keep_records: bool = False,
) -> ExperimentSummary:
    """Sample ``rounds`` i.i.d. rounds: lambda from the prior, settings from ``p(z|lambda)``.

    Outcomes come from the deterministic strategy attached to lambda. Rounds
    are generated in chunks of ``CHUNK_ROUNDS``; chunk ``k`` uses a fresh
    ``PCG64(seed + k)`` stream drawing the lambda uniforms first, then the
    setting uniforms, so results are reproducible across machines and
    independent of whether numba is enabled.
    """
    if s.outputs is None:
        raise ValueError("strategy carries no outputs; cannot simulate outcomes")
    if f.shape != s.shape:
        raise ValueError("strategy and functional shapes differ")
    rounds = int(rounds)
    if rounds < 1:
        raise ValueError("need at least one round")
    if keep_records and rounds > RECORD_LIMIT:
        raise ValueError(f"records are only retained up to {RECORD_LIMIT} rounds")
    shape = s.shape
    cum_prior = _cumulative(s.prior)
    cum_cond = _cumulative(s.conditionals)
    outputs = np.ascontiguousarray(np.stack([o.outputs() for o in s.outputs]).astype(np.int64))
    counts = np.zeros((shape.num_settings, shape.num_outcomes), dtype=np.int64)
    records = np.zeros((rounds, 3), dtype=np.int64) if keep_records else None
    empty = np.zeros(0, dtype=np.int64)
    done = 0
    chunk = 0
    while done < rounds:
        n = min(CHUNK_ROUNDS, rounds - done)
        rng = np.random.Generator(np.random.PCG64(seed + chunk))
        u_lam = rng.random(n)
        u_z = rng.random(n)
        if keep_records:
            lam_out = np.zeros(n, dtype=np.int64)
            z_out = np.zeros(n, dtype=np.int64)
            o_out = np.zeros(n, dtype=np.int64)
        else:
            lam_out = z_out = o_out = empty
        kernels.sample_counts(cum_prior, cum_cond, outputs, u_lam, u_z, counts, lam_out, z_out, o_out)
        if keep_records:
            records[done:done + n] = np.stack([lam_out, z_out, o_out], axis=1)
        done += n
        chunk += 1
    value, err, undefined = estimate_bell(f, counts)
    if undefined:
        warnings.warn(f"used settings never drawn, excluded from the Bell estimate: {list(undefined)}", stacklevel=2)
    return ExperimentSummary(
        rounds, seed, RNG_ALGORITHM, shape, counts, value, err, undefined, records, s.lambdas
    )


def reconstruct_behavior(summary: ExperimentSummary) -> Behavior:
    """Conditional frequency table as a double-mode behavior.

    Every joint setting must have been visited.
    """
    n = summary.setting_counts
    missing = [summary.shape.setting_tuple(z) for z in range(len(n)) if n[z] == 0]
    if missing:
        raise ValueError(f"settings never drawn, conditional frequencies undefined: {missing}")
    return Behavior.from_flat(summary.shape, summary.counts / n[:, None].astype(np.float64))


__all__ = [
    "ExperimentSummary",
    "NUMBA_ENABLED",
    "RNG_ALGORITHM",
    "estimate_bell",
    "reconstruct_behavior",
    "simulate",
]
