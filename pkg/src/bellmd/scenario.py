"""Bell scenarios, behaviors, functionals and deterministic local strategies.

Indices are 0-based. A joint setting ``z = (z_1, ..., z_K)`` and a joint
outcome ``o = (o_1, ..., o_K)`` are flattened in row-major order (last party
fastest), which is also the axis order of every table:
``table[z_1, ..., z_K, o_1, ..., o_K]``. Binary outcomes map to correlator
signs as ``o -> (-1)**o``, so outcome 0 is ``+1``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import kernels
from .numeric import DOUBLE, RATIONAL, as_fraction, check_mode, convert, mode_of, to_array

DEFAULT_VERTEX_CAP = 10**6


class ResourceLimitError(RuntimeError):
    """An enumeration would exceed its configured size cap."""


@dataclass(frozen=True)
class ScenarioShape:
    """Numbers of settings and outcomes per party."""

    settings: tuple[int, ...]
    outcomes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "settings", tuple(int(m) for m in self.settings))
        object.__setattr__(self, "outcomes", tuple(int(d) for d in self.outcomes))
        if len(self.settings) != len(self.outcomes):
            raise ValueError("settings and outcomes must list one count per party")
        if len(self.settings) < 2:
            raise ValueError("a Bell scenario needs at least two parties")
        if min(self.settings) < 2 or min(self.outcomes) < 2:
            raise ValueError("every party needs at least two settings and two outcomes")

    @classmethod
    def uniform(cls, parties: int, settings: int = 2, outcomes: int = 2) -> "ScenarioShape":
        return cls((settings,) * parties, (outcomes,) * parties)

    @property
    def parties(self) -> int:
        return len(self.settings)

    @property
    def num_settings(self) -> int:
        """Size of the joint setting space."""
        return math.prod(self.settings)

    @property
    def num_outcomes(self) -> int:
        return math.prod(self.outcomes)

    @property
    def num_vertices(self) -> int:
        return math.prod(d**m for m, d in zip(self.settings, self.outcomes))

    @property
    def table_shape(self) -> tuple[int, ...]:
        return self.settings + self.outcomes

    def setting_tuples(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(m) for m in self.settings)))

    def outcome_tuples(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(d) for d in self.outcomes)))

    def setting_index(self, z) -> int:
        return int(np.ravel_multi_index(tuple(z), self.settings))

    def setting_tuple(self, index: int) -> tuple[int, ...]:
        return tuple(int(v) for v in np.unravel_index(index, self.settings))

    def outcome_index(self, o) -> int:
        return int(np.ravel_multi_index(tuple(o), self.outcomes))

    def validate_setting(self, z) -> tuple[int, ...]:
        z = tuple(int(v) for v in z)
        if len(z) != self.parties or any(not 0 <= v < m for v, m in zip(z, self.settings)):
            raise ValueError(f"setting tuple {z} is not valid for settings {self.settings}")
        return z


CHSH_SHAPE = ScenarioShape((2, 2), (2, 2))


@dataclass(frozen=True, eq=False)
class Behavior:
    """Conditional outcome table ``p(o|z)``."""

    shape: ScenarioShape
    table: np.ndarray
    tol: float = field(default=1e-9, repr=False)

    def __post_init__(self):
        raw = np.asarray(self.table)
        table = np.array(raw, dtype=object if raw.dtype == object else np.float64)
        if table.shape != self.shape.table_shape:
            raise ValueError(f"table shape {table.shape} does not match scenario {self.shape.table_shape}")
        flat = table.reshape(self.shape.num_settings, self.shape.num_outcomes)
        exact = table.dtype == object
        if exact:
            if any(v < 0 for v in flat.reshape(-1)):
                raise ValueError("behavior has negative entries")
            sums = [sum(row, Fraction(0)) for row in flat]
            if any(s != 1 for s in sums):
                raise ValueError("behavior rows do not sum to one")
        else:
            if (flat < -self.tol).any():
                raise ValueError("behavior has negative entries")
            if np.abs(flat.sum(axis=1) - 1).max() > self.tol:
                raise ValueError("behavior rows do not sum to one")
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    @property
    def mode(self) -> str:
        return mode_of(self.table)

    @property
    def flat(self) -> np.ndarray:
        """View with shape (joint settings, joint outcomes)."""
        return self.table.reshape(self.shape.num_settings, self.shape.num_outcomes)

    def prob(self, o, z):
        return self.table[tuple(z) + tuple(o)]

    def as_mode(self, mode: str) -> "Behavior":
        check_mode(mode)
        if mode == self.mode:
            return self
        return Behavior(self.shape, to_array(self.table, mode))

    @classmethod
    def from_flat(cls, shape: ScenarioShape, flat) -> "Behavior":
        flat = np.asarray(flat)
        return cls(shape, flat.reshape(shape.table_shape))


@dataclass(frozen=True)
class DeterministicStrategy:
    """Fixed outcome ``assignment[i][z_i]`` for every party ``i`` and setting ``z_i``."""

    shape: ScenarioShape
    assignment: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        assignment = tuple(tuple(int(o) for o in row) for row in self.assignment)
        object.__setattr__(self, "assignment", assignment)
        if len(assignment) != self.shape.parties:
            raise ValueError("assignment needs one row per party")
        for row, m, d in zip(assignment, self.shape.settings, self.shape.outcomes):
            if len(row) != m or any(not 0 <= o < d for o in row):
                raise ValueError(f"invalid assignment row {row}")

    def outcome(self, z) -> tuple[int, ...]:
        return tuple(row[zi] for row, zi in zip(self.assignment, z))

    def outputs(self) -> np.ndarray:
        """Joint outcome index for each joint setting index."""
        return np.array(
            [self.shape.outcome_index(self.outcome(z)) for z in self.shape.setting_tuples()],
            dtype=np.int64,
        )

    def behavior(self, mode: str = RATIONAL) -> Behavior:
        return behavior_from_outputs(self.shape, self.outputs(), mode)


def behavior_from_outputs(shape: ScenarioShape, outputs, mode: str = RATIONAL) -> Behavior:
    """0/1 behavior from a joint-outcome index per joint setting."""
    flat = np.full((shape.num_settings, shape.num_outcomes), convert(0, mode), dtype=object if mode == RATIONAL else np.float64)
    flat[np.arange(shape.num_settings), np.asarray(outputs)] = convert(1, mode)
    return Behavior.from_flat(shape, flat)


def _party_tables(m: int, d: int) -> np.ndarray:
    return np.array(list(itertools.product(range(d), repeat=m)), dtype=np.int64).reshape(-1, m)


def local_vertex_outputs(shape: ScenarioShape, cap: int = DEFAULT_VERTEX_CAP) -> np.ndarray:
    """All deterministic strategies as an int array ``outputs[v, z]``.

    Row order matches :func:`enumerate_local_vertices`.
    """
    if shape.num_vertices > cap:
        raise ResourceLimitError(f"{shape.num_vertices} local vertices exceed the cap of {cap}")
    K = shape.parties
    strides = [math.prod(shape.outcomes[i + 1:]) for i in range(K)]
    total = np.zeros([1] * (2 * K), dtype=np.int64)
    for i, (m, d) in enumerate(zip(shape.settings, shape.outcomes)):
        tab = _party_tables(m, d) * strides[i]
        view = [1] * (2 * K)
        view[i] = tab.shape[0]
        view[K + i] = m
        total = total + tab.reshape(view)
    return total.reshape(shape.num_vertices, shape.num_settings)


def enumerate_local_vertices(shape: ScenarioShape, cap: int = DEFAULT_VERTEX_CAP) -> list[DeterministicStrategy]:
    """Every deterministic local strategy.

    Order is lexicographic over the per-party assignment tables, party 1's
    table most significant, and within a table setting 0 most significant.
    """
    if shape.num_vertices > cap:
        raise ResourceLimitError(f"{shape.num_vertices} local vertices exceed the cap of {cap}")
    per_party = [list(itertools.product(range(d), repeat=m)) for m, d in zip(shape.settings, shape.outcomes)]
    return [DeterministicStrategy(shape, combo) for combo in itertools.product(*per_party)]


@dataclass(frozen=True)
class Limits:
    local: object = None
    quantum: object = None
    no_signaling: object = None
    algebraic: object = None

    def __post_init__(self):
        chain = [v for v in (self.local, self.quantum, self.no_signaling, self.algebraic) if v is not None]
        if any(float(a) > float(b) + 1e-12 for a, b in zip(chain, chain[1:])):
            raise ValueError(f"limits must satisfy local <= quantum <= no-signaling <= algebraic, got {self}")

    def as_tuple(self) -> tuple:
        return (self.local, self.quantum, self.no_signaling, self.algebraic)


@dataclass(frozen=True, eq=False)
class BellFunctional:
    """Linear functional ``sum_{o,z} c(o,z) p(o|z)`` with known limits.

    ``coefficients`` may be ``None`` for catalog entries that only carry
    setting-count metadata. ``good_set_size`` defaults to
    ``num_settings - hidden_set_size``. ``ns_symmetric`` records that the
    hidden sets can be chosen with every setting hidden equally often, which
    the inequality-dependent threshold requires.
    """

    shape: ScenarioShape
    coefficients: np.ndarray | None
    limits: Limits = Limits()
    name: str = "custom"
    hidden_set_size: int | None = None
    good_set_size: int | None = None
    used_settings_count: int | None = None
    ns_symmetric: bool = False

    def __post_init__(self):
        if self.coefficients is not None:
            raw = np.asarray(self.coefficients)
            c = np.array(raw, dtype=object if raw.dtype == object else np.float64)
            if c.shape != self.shape.table_shape:
                raise ValueError(f"coefficient shape {c.shape} does not match scenario {self.shape.table_shape}")
            c.flags.writeable = False
            object.__setattr__(self, "coefficients", c)
        if self.good_set_size is None and self.hidden_set_size is not None:
            object.__setattr__(self, "good_set_size", self.shape.num_settings - self.hidden_set_size)

    @property
    def mode(self) -> str:
        return mode_of(self.coefficients) if self.coefficients is not None else DOUBLE

    @property
    def flat(self) -> np.ndarray:
        self._require_table()
        return self.coefficients.reshape(self.shape.num_settings, self.shape.num_outcomes)

    def _require_table(self):
        if self.coefficients is None:
            raise ValueError(f"functional {self.name!r} carries metadata only, no coefficient table")

    @cached_property
    def used_settings(self) -> frozenset:
        """Joint settings with at least one nonzero coefficient."""
        flat = self.flat
        return frozenset(
            self.shape.setting_tuple(k) for k in range(self.shape.num_settings) if any(v != 0 for v in flat[k])
        )

    @property
    def num_used_settings(self) -> int:
        if self.coefficients is None:
            if self.used_settings_count is None:
                raise ValueError(f"functional {self.name!r} has no used-settings information")
            return self.used_settings_count
        return len(self.used_settings)

    def vertex_values(self, outputs: np.ndarray) -> np.ndarray:
        """``c(outputs[v, z], z)`` for every vertex row and setting (float)."""
        return kernels.vertex_values(np.ascontiguousarray(outputs), np.asarray(self.flat, dtype=np.float64))

    def local_max(self, cap: int = DEFAULT_VERTEX_CAP):
        """Brute-force maximum over deterministic strategies (exact when rational)."""
        outputs = local_vertex_outputs(self.shape, cap)
        flat = self.flat
        best = None
        for row in outputs:
            v = sum((flat[z, row[z]] for z in range(self.shape.num_settings)), 0 * flat[0, 0])
            if best is None or v > best:
                best = v
        return best


def bell_value(f: BellFunctional, p: Behavior):
    """Exact linear evaluation ``sum c(o,z) p(o|z)``."""
    if f.shape != p.shape:
        raise ValueError(f"shape mismatch: functional {f.shape} vs behavior {p.shape}")
    f._require_table()
    c = f.coefficients
    t = p.table
    if c.dtype == object and t.dtype == object:
        return sum((a * b for a, b in zip(c.reshape(-1), t.reshape(-1))), Fraction(0))
    return float(np.sum(np.asarray(c, dtype=np.float64) * np.asarray(t, dtype=np.float64)))


@dataclass(frozen=True)
class SignalingReport:
    """Outcome of :func:`is_no_signaling`; truthy when no-signaling holds."""

    no_signaling: bool
    party: int | None = None
    settings: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    difference: object = 0

    def __bool__(self) -> bool:
        return self.no_signaling


def is_no_signaling(p: Behavior, tol: float | None = None) -> SignalingReport:
    """Check that no party's setting influences the other parties' joint marginal.

    For every party ``j`` the table summed over ``o_j`` must not depend on
    ``z_j``. This implies the single-party condition and is what conditioning
    on the other parties' outcomes requires. Rational tables are compared
    exactly unless ``tol`` is given.
    """
    shape = p.shape
    K = shape.parties
    exact = p.mode == RATIONAL and tol is None
    if tol is None:
        tol = 0 if exact else 1e-9
    worst = SignalingReport(True)
    worst_diff = 0
    for j in range(K):
        marg = p.table.sum(axis=K + j)
        ref = np.take(marg, 0, axis=j)
        for zj in range(1, shape.settings[j]):
            other = np.take(marg, zj, axis=j)
            diff = other - ref
            absdiff = np.abs(diff) if not exact else np.vectorize(abs, otypes=[object])(diff)
            flat_idx = int(np.argmax(np.asarray(absdiff, dtype=np.float64)))
            d = absdiff.reshape(-1)[flat_idx]
            if d > tol and d > worst_diff:
                rest = np.unravel_index(flat_idx, absdiff.shape)[: K - 1]
                z_ref = tuple(int(v) for v in rest[:j]) + (0,) + tuple(int(v) for v in rest[j:])
                z_alt = z_ref[:j] + (zj,) + z_ref[j + 1:]
                worst = SignalingReport(False, j, (z_ref, z_alt), d)
                worst_diff = d
    return worst


def uniform_behavior(shape: ScenarioShape, mode: str = RATIONAL) -> Behavior:
    val = convert(Fraction(1, shape.num_outcomes), mode)
    table = np.full(shape.table_shape, val, dtype=object if mode == RATIONAL else np.float64)
    return Behavior(shape, table)


def pr_box(variant: tuple[int, int, int] = (0, 0, 0), mode: str = RATIONAL) -> Behavior:
    """PR box ``a xor b = x*y xor u*x xor v*y xor w`` with uniform marginals."""
    u, v, w = variant
    half = convert(Fraction(1, 2), mode)
    zero = convert(0, mode)
    table = np.empty((2, 2, 2, 2), dtype=object if mode == RATIONAL else np.float64)
    for x, y, a, b in itertools.product(range(2), repeat=4):
        table[x, y, a, b] = half if (a ^ b) == ((x & y) ^ (u & x) ^ (v & y) ^ w) else zero
    return Behavior(CHSH_SHAPE, table)


def mix(behaviors, weights) -> Behavior:
    """Convex combination of behaviors on one shape."""
    behaviors = list(behaviors)
    weights = list(weights)
    if not behaviors or len(behaviors) != len(weights):
        raise ValueError("need matching, nonempty behaviors and weights")
    shape = behaviors[0].shape
    if any(b.shape != shape for b in behaviors):
        raise ValueError("behaviors must share a shape")
    exact = all(b.mode == RATIONAL for b in behaviors) and all(
        isinstance(w, (int, Fraction)) for w in weights
    )
    mode = RATIONAL if exact else DOUBLE
    table = sum((convert(w, mode) * b.as_mode(mode).table for w, b in zip(weights, behaviors)))
    return Behavior(shape, np.asarray(table, dtype=object if exact else np.float64))


# ---------------------------------------------------------------- catalog


def _correlator_table(signs: dict, mode: str) -> np.ndarray:
    """Two-party binary coefficients ``s(x,y) (-1)^(a+b)``."""
    table = np.full((2, 2, 2, 2), convert(0, mode), dtype=object if mode == RATIONAL else np.float64)
    for (x, y), s in signs.items():
        for a, b in itertools.product(range(2), repeat=2):
            table[x, y, a, b] = convert(s * (-1) ** (a + b), mode)
    return table


def catalog_chsh(mode: str = RATIONAL) -> BellFunctional:
    """``<a0 b0> + <a0 b1> + <a1 b0> - <a1 b1> <= 2``."""
    check_mode(mode)
    table = _correlator_table({(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): -1}, mode)
    limits = Limits(convert(2, mode), 2 * math.sqrt(2), convert(4, mode), convert(4, mode))
    return BellFunctional(CHSH_SHAPE, table, limits, "chsh", hidden_set_size=1, ns_symmetric=True)


def catalog_tilted_chsh(alpha, mode: str = RATIONAL) -> BellFunctional:
    """CHSH plus ``alpha <a0>``.

    The marginal term is split evenly over Bob's two settings,
    ``alpha/2 * (<a0>_{y=0} + <a0>_{y=1})``, which equals ``alpha <a0>`` on
    no-signaling behaviors.
    """
    check_mode(mode)
    alpha = convert(alpha, mode)
    if not 0 <= alpha <= 2:
        raise ValueError(f"tilt alpha must lie in [0, 2], got {alpha}")
    table = _correlator_table({(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): -1}, mode)
    half = alpha / 2
    for y, a, b in itertools.product(range(2), repeat=3):
        table[0, y, a, b] += half * (-1) ** a
    two, four = convert(2, mode), convert(4, mode)
    limits = Limits(two + alpha, None, four, four + alpha)
    return BellFunctional(CHSH_SHAPE, table, limits, f"tilted_chsh(alpha={alpha})", hidden_set_size=1, ns_symmetric=True)


def catalog_chained(m: int, mode: str = RATIONAL) -> BellFunctional:
    """Chained inequality with ``m`` binary settings per party.

    ``p(a=b | 0, m-1) + sum_{x in {y, y+1}} p(a != b | x, y) <= 2m - 1``
    with 0-based settings.
    """
    check_mode(mode)
    m = int(m)
    if m < 2:
        raise ValueError("chained inequality needs m >= 2")
    shape = ScenarioShape((m, m), (2, 2))
    one, zero = convert(1, mode), convert(0, mode)
    table = np.full(shape.table_shape, zero, dtype=object if mode == RATIONAL else np.float64)
    for y in range(m):
        for x in (y, y + 1):
            if x < m:
                for a, b in itertools.product(range(2), repeat=2):
                    if a != b:
                        table[x, y, a, b] = one
    for a in range(2):
        table[0, m - 1, a, a] = one
    limits = Limits(convert(2 * m - 1, mode), None, convert(2 * m, mode), convert(2 * m, mode))
    return BellFunctional(shape, table, limits, f"chained(m={m})", hidden_set_size=1, ns_symmetric=True)


def catalog_mermin(parties: int) -> BellFunctional:
    """Metadata-only Mermin entry for an odd number of parties >= 3."""
    K = int(parties)
    if K < 3 or K % 2 == 0:
        raise ValueError("Mermin metadata is tabulated for odd party counts >= 3")
    good = 2 ** (K - 2) + 2 ** ((K - 3) // 2)
    return BellFunctional(
        ScenarioShape.uniform(K),
        None,
        Limits(),
        f"mermin(K={K})",
        good_set_size=good,
        used_settings_count=2 ** (K - 1),
        ns_symmetric=True,
    )


def catalog(name: str, **params) -> BellFunctional:
    """Look up a catalog functional by name (``chsh``, ``tilted_chsh``, ``chained``, ``mermin``)."""
    mode = params.get("mode", RATIONAL)
    name = name.lower().replace("-", "_")
    if name == "chsh":
        return catalog_chsh(mode)
    if name in ("tilted_chsh", "tilted"):
        return catalog_tilted_chsh(params.get("alpha", 1), mode)
    if name == "chained":
        return catalog_chained(params.get("m", 2), mode)
    if name == "mermin":
        return catalog_mermin(params.get("parties", 3))
    raise KeyError(f"unknown inequality {name!r}")


def chsh_point(a0: int, a1: int, b0: int, b1: int) -> DeterministicStrategy:
    """Deterministic CHSH strategy from +-1 values ``(a0, a1, b0, b1)``."""
    bit = {1: 0, -1: 1}
    return DeterministicStrategy(CHSH_SHAPE, ((bit[a0], bit[a1]), (bit[b0], bit[b1])))


__all__ = [
    "Behavior",
    "BellFunctional",
    "CHSH_SHAPE",
    "DeterministicStrategy",
    "Limits",
    "ResourceLimitError",
    "ScenarioShape",
    "SignalingReport",
    "as_fraction",
    "behavior_from_outputs",
    "bell_value",
    "catalog",
    "catalog_chained",
    "catalog_chsh",
    "catalog_mermin",
    "catalog_tilted_chsh",
    "chsh_point",
    "enumerate_local_vertices",
    "is_no_signaling",
    "local_vertex_outputs",
    "mix",
    "pr_box",
    "uniform_behavior",
]
