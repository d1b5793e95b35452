"""Local mimics of no-signaling behaviors on a cross set of settings.

Given a no-signaling behavior and an anchor setting tuple, a single joint
distribution over one outcome per (party, setting) reproduces the behavior
on every setting tuple that differs from the anchor in at most one
coordinate. Its marginals are local by construction (each complete
assignment is a deterministic strategy).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numeric import RATIONAL, convert
from .scenario import Behavior, DeterministicStrategy, ScenarioShape, is_no_signaling


class SignalingError(ValueError):
    """The input behavior is signaling, so conditionals on other parties are ill-defined."""

    def __init__(self, report):
        super().__init__(
            f"behavior is signaling: party {report.party} between settings "
            f"{report.settings} (difference {report.difference})"
        )
        self.report = report


@dataclass(frozen=True)
class CrossSet:
    shape: ScenarioShape
    anchor: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]

    def __contains__(self, z) -> bool:
        return tuple(z) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def cross_set(shape: ScenarioShape, anchor) -> CrossSet:
    """Setting tuples differing from ``anchor`` in at most one coordinate.

    Size is ``sum(m_k) - K + 1``; in the bipartite case this is every pair
    sharing Alice's or Bob's anchor setting.
    """
    anchor = shape.validate_setting(anchor)
    members = {anchor}
    for i, m in enumerate(shape.settings):
        for j in range(m):
            members.add(anchor[:i] + (j,) + anchor[i + 1:])
    return CrossSet(shape, anchor, tuple(sorted(members)))


@dataclass(frozen=True)
class JointOutcomeModel:
    """Sparse joint distribution over complete outcome assignments."""

    shape: ScenarioShape
    entries: tuple[tuple[object, DeterministicStrategy], ...]

    def __post_init__(self):
        if any(w < 0 for w, _ in self.entries):
            raise ValueError("negative weight in joint outcome model")
        total = sum((w for w, _ in self.entries), 0)
        if abs(float(total) - 1) > 1e-9 or (isinstance(total, Fraction) and total != 1):
            raise ValueError(f"joint outcome model weights sum to {total}, not 1")

    @property
    def weights(self) -> list:
        return [w for w, _ in self.entries]

    @property
    def strategies(self) -> list[DeterministicStrategy]:
        return [s for _, s in self.entries]

    def behavior(self) -> Behavior:
        """Marginals ``p(o|z)`` of the joint model."""
        shape = self.shape
        exact = all(isinstance(w, Fraction) for w in self.weights)
        dtype = object if exact else np.float64
        flat = np.zeros((shape.num_settings, shape.num_outcomes), dtype=dtype)
        if exact:
            flat[...] = Fraction(0)
        rows = np.arange(shape.num_settings)
        for w, s in self.entries:
            flat[rows, s.outputs()] += w
        return Behavior.from_flat(shape, flat)


def _conditional(dist, mode):
    total = sum(dist, convert(0, mode))
    if total == 0:
        u = convert(Fraction(1, len(dist)), mode)
        return [u] * len(dist)
    return [v / total for v in dist]


def local_mimic(p: Behavior, anchor, tol: float | None = None) -> tuple[Behavior, JointOutcomeModel]:
    """Local behavior equal to ``p`` on ``cross_set(p.shape, anchor)``.

    The joint model is the anchor-setting distribution ``P(o | anchor)``
    times, for every party ``i`` and non-anchor setting ``j``, the
    conditional ``P(o_i | other parties' anchor outcomes)`` read off the
    setting tuple where only party ``i`` switches to ``j``. Conditionals on
    zero-probability events are taken uniform.
    """
    shape = p.shape
    anchor = shape.validate_setting(anchor)
    report = is_no_signaling(p, tol)
    if not report:
        raise SignalingError(report)
    mode = p.mode
    K = shape.parties
    zero = convert(0, mode)

    # factors[(i, j)][o_minus_i] -> conditional distribution over o_i
    factors = {}
    for i in range(K):
        for j in range(shape.settings[i]):
            if j == anchor[i]:
                continue
            z = anchor[:i] + (j,) + anchor[i + 1:]
            sub = p.table[z]
            table = {}
            for o_minus in itertools.product(*(range(d) for k, d in enumerate(shape.outcomes) if k != i)):
                dist = [sub[o_minus[:i] + (oi,) + o_minus[i:]] for oi in range(shape.outcomes[i])]
                table[o_minus] = _conditional(dist, mode)
            factors[(i, j)] = table

    keys = list(factors)
    entries = []
    anchor_table = p.table[anchor]
    for o_anchor in shape.outcome_tuples():
        w0 = anchor_table[o_anchor]
        if w0 == 0:
            continue
        choices = []
        for i, j in keys:
            o_minus = o_anchor[:i] + o_anchor[i + 1:]
            dist = factors[(i, j)][o_minus]
            choices.append([(oi, q) for oi, q in enumerate(dist) if q != 0])
        for combo in itertools.product(*choices):
            w = w0
            assignment = [[None] * m for m in shape.settings]
            for i in range(K):
                assignment[i][anchor[i]] = o_anchor[i]
            for (i, j), (oi, q) in zip(keys, combo):
                w = w * q
                assignment[i][j] = oi
            if w != zero:
                entries.append((w, DeterministicStrategy(shape, assignment)))
    model = JointOutcomeModel(shape, tuple(entries))
    return model.behavior(), model


def tightness_check(p: Behavior, anchor, extra) -> bool:
    """Whether some local behavior agrees with ``p`` on the cross set plus ``extra``."""
    from .lp import local_membership_on_subset

    cs = cross_set(p.shape, anchor)
    extra = p.shape.validate_setting(extra)
    if extra in cs:
        raise ValueError(f"extra setting {extra} already belongs to the cross set of {cs.anchor}")
    return local_membership_on_subset(p, list(cs.members) + [extra]).feasible


__all__ = [
    "CrossSet",
    "JointOutcomeModel",
    "SignalingError",
    "cross_set",
    "local_mimic",
    "tightness_check",
]
