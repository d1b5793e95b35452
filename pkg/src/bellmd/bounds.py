"""Closed-form min-entropy and ``P_M`` thresholds.

All thresholds are per run and in bits; an ``N``-run i.i.d. test multiplies
the entropy thresholds by ``N``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .numeric import as_fraction
from .scenario import BellFunctional, ScenarioShape
from .sources import SettingDistribution

NO_SIGNALING_LIMIT = "no_signaling_limit"
QUANTUM_LIMIT = "quantum_limit"


@dataclass(frozen=True)
class BoundReport:
    """Threshold below which a min-entropy source cannot certify anything.

    ``effective_settings`` is the integer whose log2 is the threshold, so the
    exact value is ``log2(effective_settings)``.
    """

    per_run_min_entropy_threshold: float
    p_max_threshold: float
    regime: str
    inequality_dependent: bool
    effective_settings: int | None = None
    inequality: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def theorem1_threshold(shape: ScenarioShape) -> BoundReport:
    """Inequality-independent threshold ``log2(sum m_k - K + 1)``."""
    n = sum(shape.settings) - shape.parties + 1
    return BoundReport(math.log2(n), 1 / n, NO_SIGNALING_LIMIT, False, n)


def ns_threshold(f: BellFunctional) -> BoundReport:
    """Inequality-dependent threshold ``log2 |good settings|`` for reaching the no-signaling limit.

    Requires the good-set size and the symmetry flag on ``f``.
    """
    if f.good_set_size is None:
        raise ValueError(f"functional {f.name!r} carries no good-set size")
    if not f.ns_symmetric:
        raise ValueError(
            f"functional {f.name!r} is not flagged as hiding every setting equally often; "
            "use the LP (lp.max_bell) instead"
        )
    g = int(f.good_set_size)
    return BoundReport(math.log2(g), 1 / g, NO_SIGNALING_LIMIT, True, g, f.name)


def quantum_pm_threshold(f: BellFunctional) -> float:
    """``P_M`` sufficient to reach the quantum limit with a mixed faking source.

    ``(1/|S|) [1 + (B_Q - B_L)/(B_NS - B_L) (|S|/|S_g| - 1)]``.
    """
    lim = f.limits
    if lim.quantum is None:
        raise ValueError(f"functional {f.name!r} has no quantum limit")
    if lim.local is None or lim.no_signaling is None:
        raise ValueError(f"functional {f.name!r} needs local and no-signaling limits")
    if f.good_set_size is None:
        raise ValueError(f"functional {f.name!r} carries no good-set size")
    S = f.shape.num_settings
    g = f.good_set_size
    frac = (float(lim.quantum) - float(lim.local)) / (float(lim.no_signaling) - float(lim.local))
    return (1 + frac * (S / g - 1)) / S


def quantum_report(f: BellFunctional) -> BoundReport:
    pm = quantum_pm_threshold(f)
    return BoundReport(-math.log2(pm), pm, QUANTUM_LIMIT, True, None, f.name)


def chsh_analytic_max(p_obs, p_max_bound):
    """Closed-form maximal CHSH value under measurement dependence.

    ``4 - 1/2 [(1-3P)q + (1-3P)/(4P-1) (q-16)]`` with ``q = sum_z 1/p_obs(z)``,
    valid for ``max p_obs <= P < 1/3``. Exact when both inputs are exact.
    """
    probs = p_obs.probs if isinstance(p_obs, SettingDistribution) else list(p_obs)
    if len(probs) != 4:
        raise ValueError("CHSH needs four setting probabilities")
    exact = all(isinstance(v, (int, Fraction)) for v in probs) and isinstance(p_max_bound, (int, Fraction))
    if exact:
        probs = [as_fraction(v) for v in probs]
        P = as_fraction(p_max_bound)
        four, one, half, three, sixteen = 4, 1, Fraction(1, 2), 3, 16
    else:
        probs = [float(v) for v in probs]
        P = float(p_max_bound)
        four, one, half, three, sixteen = 4.0, 1.0, 0.5, 3.0, 16.0
    if min(probs) <= 0:
        raise ValueError("every setting needs positive probability")
    if not max(probs) <= P < Fraction(1, 3):
        raise ValueError(f"formula valid only for max p_obs <= P_M < 1/3, got P_M={P}")
    if P * 4 <= 1 and P * 4 != 1:
        raise ValueError("P_M below 1/4 is infeasible")
    q = sum(one / v for v in probs)
    a = one - three * P
    if 4 * P == 1:
        # uniform p_obs is the only feasible input here, so q = 16 and the second term vanishes
        return four - half * a * q
    return four - half * (a * q + a / (4 * P - one) * (q - sixteen))


__all__ = [
    "BoundReport",
    "NO_SIGNALING_LIMIT",
    "QUANTUM_LIMIT",
    "chsh_analytic_max",
    "ns_threshold",
    "quantum_pm_threshold",
    "quantum_report",
    "theorem1_threshold",
]
