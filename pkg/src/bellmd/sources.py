"""Measurement-dependent setting sources.

A source is a finite hidden-variable alphabet with a prior ``p(lambda)`` and
setting conditionals ``p(z|lambda)`` over joint setting tuples. This module
holds the i.i.d. figures of merit, min-entropies, the Santha-Vazirani
predicate, the source polytope, explicit faking strategies, prior
feasibility and the total-variation dependence measure ``M'``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import simplex
from .fine import cross_set, local_mimic
from .numeric import DOUBLE, RATIONAL, check_mode, convert, mode_of, to_array
from .scenario import (
    CHSH_SHAPE,
    Behavior,
    BellFunctional,
    DeterministicStrategy,
    ScenarioShape,
    chsh_point,
    enumerate_local_vertices,
    local_vertex_outputs,
)


def _is_exact(arr) -> bool:
    return np.asarray(arr).dtype == object


def _sum(values):
    return sum(values, Fraction(0)) if values and isinstance(values[0], Fraction) else float(np.sum(values))


@dataclass(frozen=True, eq=False)
class SettingDistribution:
    """Probability vector over joint setting tuples (flattened row-major)."""

    shape: ScenarioShape
    probs: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.probs)
        probs = np.array(raw, dtype=object if raw.dtype == object else np.float64).reshape(-1)
        if probs.shape != (self.shape.num_settings,):
            raise ValueError(f"expected {self.shape.num_settings} setting probabilities, got {probs.shape}")
        if any(v < 0 for v in probs):
            raise ValueError("setting probabilities must be nonnegative")
        total = _sum(list(probs))
        if (probs.dtype == object and total != 1) or abs(float(total) - 1) > 1e-9:
            raise ValueError(f"setting probabilities sum to {total}")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, shape: ScenarioShape, mode: str = RATIONAL) -> "SettingDistribution":
        return cls(shape, to_array([Fraction(1, shape.num_settings)] * shape.num_settings, mode))

    @classmethod
    def of(cls, shape: ScenarioShape, values, mode: str = RATIONAL) -> "SettingDistribution":
        return cls(shape, to_array(list(values), mode))

    @property
    def mode(self) -> str:
        return mode_of(self.probs)

    def __getitem__(self, z):
        return self.probs[self.shape.setting_index(z)]

    def as_mode(self, mode: str) -> "SettingDistribution":
        return self if mode == self.mode else SettingDistribution(self.shape, to_array(self.probs, mode))


@dataclass(frozen=True, eq=False)
class SourceStrategy:
    """Finite hidden-variable model of a setting source.

    ``conditionals[l, z]`` is ``p(z|lambda_l)``; ``outputs[l]`` is the
    deterministic response distributed with ``lambda_l`` (needed only for
    simulation).
    """

    shape: ScenarioShape
    lambdas: tuple[str, ...]
    prior: np.ndarray
    conditionals: np.ndarray
    outputs: tuple[DeterministicStrategy, ...] | None = None

    def __post_init__(self):
        lambdas = tuple(str(l) for l in self.lambdas)
        object.__setattr__(self, "lambdas", lambdas)
        L, S = len(lambdas), self.shape.num_settings
        if len(set(lambdas)) != L:
            raise ValueError("lambda labels must be distinct")
        prior = np.asarray(self.prior)
        prior = np.array(prior, dtype=object if prior.dtype == object else np.float64).reshape(-1)
        cond = np.asarray(self.conditionals)
        cond = np.array(cond, dtype=object if cond.dtype == object else np.float64)
        if prior.shape != (L,) or cond.shape != (L, S):
            raise ValueError(f"prior must have shape ({L},) and conditionals ({L}, {S})")
        for vec, what in [(prior, "prior")] + [(row, f"p(z|{l})") for l, row in zip(lambdas, cond)]:
            if any(v < 0 for v in vec):
                raise ValueError(f"{what} has negative entries")
            total = _sum(list(vec))
            if (vec.dtype == object and total != 1) or abs(float(total) - 1) > 1e-9:
                raise ValueError(f"{what} sums to {total}")
        if self.outputs is not None:
            outputs = tuple(self.outputs)
            if len(outputs) != L or any(o.shape != self.shape for o in outputs):
                raise ValueError("outputs need one deterministic strategy per lambda on the same shape")
            object.__setattr__(self, "outputs", outputs)
        prior.flags.writeable = False
        cond.flags.writeable = False
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "conditionals", cond)

    @property
    def mode(self) -> str:
        return RATIONAL if self.prior.dtype == object and self.conditionals.dtype == object else DOUBLE

    def induced_p_obs(self) -> SettingDistribution:
        """``p_obs(z) = sum_l p(z|l) p(l)``."""
        if self.mode == RATIONAL:
            probs = np.array(
                [sum((self.prior[l] * self.conditionals[l, z] for l in range(len(self.lambdas))), Fraction(0))
                 for z in range(self.shape.num_settings)],
                dtype=object,
            )
        else:
            probs = np.asarray(self.prior, dtype=np.float64) @ np.asarray(self.conditionals, dtype=np.float64)
        return SettingDistribution(self.shape, probs)


@dataclass(frozen=True)
class SVParams:
    p_min: object
    p_max: object

    def validate(self, num_settings: int) -> "SVParams":
        if not 0 <= self.p_min <= Fraction(1, num_settings) <= self.p_max <= 1:
            raise ValueError(
                f"need 0 <= p_min <= 1/{num_settings} <= p_max <= 1, got ({self.p_min}, {self.p_max})"
            )
        return self


# ------------------------------------------------------------ figures of merit


def p_max_merit(s: SourceStrategy):
    """Largest ``p(z|lambda)``."""
    return max(s.conditionals.reshape(-1))


def p_min_merit(s: SourceStrategy):
    """Smallest ``p(z|lambda)``."""
    return min(s.conditionals.reshape(-1))


def guessing_probability(s: SourceStrategy):
    """``sum_l p(l) max_z p(z|l)``."""
    terms = [s.prior[l] * max(s.conditionals[l]) for l in range(len(s.lambdas))]
    return _sum(terms)


def min_entropy(s: SourceStrategy) -> float:
    """Conditional min-entropy ``H_min(Z|Lambda)`` in bits."""
    return -math.log2(guessing_probability(s))


def min_entropy_unconditioned(s: SourceStrategy) -> float:
    """``H_min(Z)`` of the induced setting distribution, in bits."""
    return -math.log2(max(s.induced_p_obs().probs))


def sv_check(s: SourceStrategy, params: SVParams) -> bool:
    """Every ``p(z|lambda)`` lies in ``[p_min, p_max]``."""
    params.validate(s.shape.num_settings)
    return all(params.p_min <= v <= params.p_max for v in s.conditionals.reshape(-1))


# ------------------------------------------------------------ source polytope


def source_polytope_vertices(num_settings: int, p_max_bound, mode: str = RATIONAL) -> list[tuple]:
    """Extreme points of ``{p : 0 <= p(z) <= p_max_bound, sum p = 1}``.

    Each vertex has ``k = floor(1/p_max_bound)`` entries equal to the bound,
    one remainder entry ``1 - k*p_max_bound`` when that is nonzero, zeros
    elsewhere. Output is sorted lexicographically in descending order.
    """
    check_mode(mode)
    n = int(num_settings)
    bound = convert(p_max_bound, mode)
    if n < 1:
        raise ValueError("need at least one setting")
    if bound * n < 1 and not math.isclose(float(bound) * n, 1.0, rel_tol=0, abs_tol=1e-12):
        raise ValueError(f"p_max_bound {bound} is below 1/{n}: the source polytope is empty")
    if bound > 1:
        bound = convert(1, mode)
    zero = convert(0, mode)
    if mode == RATIONAL:
        k = math.floor(1 / bound)
    else:
        k = int(math.floor(1 / bound + 1e-12))
    k = min(k, n)
    rest = 1 - k * bound
    if mode == DOUBLE and abs(rest) < 1e-12:
        rest = 0.0
    vertices = set()
    for top in itertools.combinations(range(n), k):
        base = [zero] * n
        for t in top:
            base[t] = bound
        if rest == 0:
            vertices.add(tuple(base))
            continue
        for r in range(n):
            if r in top:
                continue
            v = list(base)
            v[r] = rest
            vertices.add(tuple(v))
    return sorted(vertices, reverse=True)


# ------------------------------------------------------------ strategies


def _best_vertex_on(f: BellFunctional, settings) -> DeterministicStrategy:
    """Deterministic strategy maximising ``f`` restricted to ``settings`` (first in canonical order on ties)."""
    shape = f.shape
    outputs = local_vertex_outputs(shape)
    idx = [shape.setting_index(z) for z in settings]
    vals = f.vertex_values(outputs)[:, idx].sum(axis=1)
    best = int(np.argmax(vals))
    return enumerate_local_vertices(shape)[best]


def _uniform_on(shape: ScenarioShape, members, mode: str):
    row = [convert(0, mode)] * shape.num_settings
    w = convert(Fraction(1, len(members)), mode)
    for z in members:
        row[shape.setting_index(z)] = w
    return row


def strategy_theorem1(
    shape: ScenarioShape,
    f: BellFunctional | None = None,
    target: Behavior | None = None,
    mode: str = RATIONAL,
) -> SourceStrategy:
    """Cross-set faking source: one lambda per anchor setting tuple.

    ``p(z|lambda_anchor)`` is uniform on the anchor's cross set and zero
    elsewhere; the prior is uniform. Outputs:

    * with ``f``: per anchor, the deterministic strategy maximising ``f`` on
      the cross set (reaches the functional's algebraic per-setting maxima
      whenever one strategy can satisfy all of them, e.g. 4 for CHSH);
    * with a no-signaling ``target``: each anchor is refined into the
      deterministic points of the local mimic, weighted by the mimic, so the
      observed statistics reproduce ``target`` on every setting;
    * with neither: no outputs.
    """
    check_mode(mode)
    anchors = shape.setting_tuples()
    if f is not None and f.shape != shape:
        raise ValueError("functional shape does not match")
    lambdas, prior, cond, outputs = [], [], [], []
    p_anchor = convert(Fraction(1, len(anchors)), mode)
    for anchor in anchors:
        cs = cross_set(shape, anchor)
        row = _uniform_on(shape, cs.members, mode)
        label = "".join(map(str, anchor))
        if target is not None:
            _, model = local_mimic(target, anchor)
            for k, (w, strat) in enumerate(model.entries):
                lambdas.append(f"{label}.{k}")
                prior.append(p_anchor * convert(w, mode))
                cond.append(row)
                outputs.append(strat)
        else:
            lambdas.append(label)
            prior.append(p_anchor)
            cond.append(row)
            if f is not None:
                outputs.append(_best_vertex_on(f, [z for z in cs.members if z in f.used_settings]))
    return SourceStrategy(
        shape,
        tuple(lambdas),
        to_array(prior, mode),
        to_array(cond, mode),
        tuple(outputs) if outputs else None,
    )


def strategy_hide_one(f: BellFunctional, mode: str = RATIONAL) -> SourceStrategy:
    """Hide exactly one used setting per lambda; uniform on all the others.

    One lambda per used setting ``h``; ``p(z|lambda_h) = 1/(|S|-1)`` for
    ``z != h``. Outputs maximise ``f`` on the remaining used settings.
    """
    shape = f.shape
    used = sorted(f.used_settings)
    all_z = shape.setting_tuples()
    lambdas, cond, outputs = [], [], []
    for h in used:
        keep = [z for z in all_z if z != h]
        lambdas.append("hide" + "".join(map(str, h)))
        cond.append(_uniform_on(shape, keep, mode))
        outputs.append(_best_vertex_on(f, [z for z in used if z != h]))
    prior = [Fraction(1, len(used))] * len(used)
    return SourceStrategy(shape, tuple(lambdas), to_array(prior, mode), to_array(cond, mode), tuple(outputs))


def strategy_general(
    f: BellFunctional,
    p_max_bound,
    mode: str = RATIONAL,
    good_sets: dict | None = None,
    prior=None,
) -> SourceStrategy:
    """Source putting ``p_max_bound`` on each good setting and ``Q(lambda)`` on the hidden ones.

    ``Q(lambda) = (1 - |good(lambda)| * p_max_bound) / |hidden(lambda)|``.
    By default there is one lambda per anchor tuple with the cross set as
    its good set. ``good_sets`` maps labels to explicit good sets instead.
    The prior defaults to uniform.
    """
    check_mode(mode)
    shape = f.shape
    pm = convert(p_max_bound, mode)
    if good_sets is None:
        good_sets = {"".join(map(str, a)): cross_set(shape, a).members for a in shape.setting_tuples()}
    all_z = shape.setting_tuples()
    lambdas, cond, outputs = [], [], []
    for label, good in good_sets.items():
        good = [tuple(z) for z in good]
        hidden = [z for z in all_z if z not in good]
        row = [convert(0, mode)] * shape.num_settings
        for z in good:
            row[shape.setting_index(z)] = pm
        if hidden:
            q = (1 - len(good) * pm) / len(hidden)
            if mode == DOUBLE and abs(q) < 1e-12:
                q = 0.0
            if q < 0 or q > pm:
                raise ValueError(f"Q({label}) = {q} lies outside [0, {pm}]: not a valid strategy")
            for z in hidden:
                row[shape.setting_index(z)] = q
        elif len(good) * pm != 1:
            raise ValueError(f"good set of {label} covers every setting but p_max_bound is not 1/|S|")
        lambdas.append(label)
        cond.append(row)
        outputs.append(_best_vertex_on(f, [z for z in good if z in f.used_settings]) if f.coefficients is not None else None)
    if prior is None:
        prior = [Fraction(1, len(lambdas))] * len(lambdas)
    return SourceStrategy(
        shape,
        tuple(lambdas),
        to_array(prior, mode),
        to_array(cond, mode),
        tuple(outputs) if all(o is not None for o in outputs) else None,
    )


TILTED_CHSH_POINTS = (
    # (a0, a1, b0, b1) in +-1 values, and the setting pair it never sees
    ((+1, -1, -1, +1), (0, 0)),
    ((+1, +1, +1, -1), (0, 1)),
    ((+1, -1, +1, +1), (1, 0)),
    ((+1, +1, +1, +1), (1, 1)),
)


def strategy_tilted_chsh(mode: str = RATIONAL) -> SourceStrategy:
    """Four deterministic points, each excluding one setting pair, uniformly mixed.

    Reaches ``4 + alpha`` on the tilted CHSH functional for every ``alpha``.
    """
    lambdas, cond, outputs = [], [], []
    for point, hidden in TILTED_CHSH_POINTS:
        keep = [z for z in CHSH_SHAPE.setting_tuples() if z != hidden]
        lambdas.append("".join("+" if v > 0 else "-" for v in point))
        cond.append(_uniform_on(CHSH_SHAPE, keep, mode))
        outputs.append(chsh_point(*point))
    return SourceStrategy(CHSH_SHAPE, tuple(lambdas), to_array([Fraction(1, 4)] * 4, mode), to_array(cond, mode), tuple(outputs))


def strategy_independent(
    shape: ScenarioShape,
    outputs: list[DeterministicStrategy] | None = None,
    prior=None,
    p_obs: SettingDistribution | None = None,
    mode: str = RATIONAL,
) -> SourceStrategy:
    """Measurement-independent source: every lambda draws settings from ``p_obs``."""
    if outputs is None:
        outputs = [enumerate_local_vertices(shape)[0]]
    L = len(outputs)
    if prior is None:
        prior = [Fraction(1, L)] * L
    row = list((p_obs or SettingDistribution.uniform(shape, mode)).as_mode(mode).probs)
    return SourceStrategy(
        shape, tuple(f"v{k}" for k in range(L)), to_array(prior, mode), to_array([row] * L, mode), tuple(outputs)
    )


# ------------------------------------------------------------ prior feasibility


class InfeasiblePriorError(ValueError):
    """No prior reproduces the target; ``certificate`` is a Farkas vector ``y``.

    ``conditionals.T @ y <= 0`` entrywise while ``target @ y > 0``.
    """

    def __init__(self, certificate, message="no prior over the given conditionals reproduces the target"):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class PriorSolution:
    prior: np.ndarray
    unique: bool


def _rank_exact(M) -> int:
    rows = [list(r) for r in M]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _max_entropy_prior(M, t, start) -> np.ndarray:
    from scipy.optimize import minimize

    M = np.asarray(M, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    x0 = np.clip(np.asarray(start, dtype=np.float64), 1e-12, None)

    def neg_entropy(p):
        q = np.clip(p, 1e-300, None)
        return float(np.sum(q * np.log(q)))

    def grad(p):
        return np.log(np.clip(p, 1e-300, None)) + 1.0

    res = minimize(
        neg_entropy,
        x0,
        jac=grad,
        method="SLSQP",
        bounds=[(0.0, 1.0)] * len(x0),
        constraints=[{"type": "eq", "fun": lambda p: M @ p - t, "jac": lambda p: M}],
        options={"ftol": 1e-14, "maxiter": 500},
    )
    p = np.clip(res.x, 0.0, None) if res.success else np.asarray(start, dtype=np.float64)
    if np.abs(M @ p - t).max() > 1e-8:
        p = np.asarray(start, dtype=np.float64)
    return p


def solve_prior(conditionals, target, mode: str | None = None) -> PriorSolution:
    """Find ``p(lambda) >= 0`` with ``sum_l p(z|l) p(l) = target(z)``.

    ``conditionals`` has shape (settings, lambdas): column ``l`` is
    ``p(.|lambda_l)``. With full column rank the prior is unique and solved
    exactly; otherwise the maximum-entropy feasible prior is returned
    (numerically). Raises :class:`InfeasiblePriorError` with a Farkas
    certificate when no prior exists.
    """
    t = target.probs if isinstance(target, SettingDistribution) else np.asarray(target)
    M = np.asarray(conditionals)
    if mode is None:
        mode = RATIONAL if _is_exact(M) and _is_exact(t) else DOUBLE
    check_mode(mode)
    M = to_array(M, mode)
    t = to_array(t, mode).reshape(-1)
    S, L = M.shape
    if t.shape != (S,):
        raise ValueError(f"target needs {S} entries")
    if mode == RATIONAL:
        rank = _rank_exact(M)
    else:
        rank = int(np.linalg.matrix_rank(M.astype(np.float64)))

    raw = simplex.solve(M, t, [0] * L, mode)
    if raw.status == simplex.INFEASIBLE:
        raise InfeasiblePriorError(raw.y)
    if raw.status != simplex.OPTIMAL:
        raise RuntimeError(f"prior feasibility solve ended with status {raw.status}")
    if rank == L:
        # the feasible point is the unique solution of the linear system
        return PriorSolution(raw.x, True)
    return PriorSolution(_max_entropy_prior(M, t, raw.x), False)


# ------------------------------------------------------------ M' measure


def posteriors_from_strategy(s: SourceStrategy) -> tuple[np.ndarray, SettingDistribution]:
    """Bayes: ``p(lambda|z) = p(z|lambda) p(lambda) / p_obs(z)``, shape (settings, lambdas)."""
    p_obs = s.induced_p_obs()
    S, L = s.shape.num_settings, len(s.lambdas)
    post = np.empty((S, L), dtype=object if s.mode == RATIONAL else np.float64)
    for z in range(S):
        if p_obs.probs[z] == 0:
            raise ZeroDivisionError(f"setting {s.shape.setting_tuple(z)} has zero probability; p(lambda|z) undefined")
        for l in range(L):
            post[z, l] = s.conditionals[l, z] * s.prior[l] / p_obs.probs[z]
    return post, p_obs


def _marginal_lambda(posteriors, p_obs):
    S, L = posteriors.shape
    return np.array([sum((posteriors[z, l] * p_obs[z] for z in range(S)), 0 * posteriors[0, 0]) for l in range(L)], dtype=posteriors.dtype)


def m_prime(posteriors, p_obs) -> object:
    """``max_z 2 D(p(Lambda|z), p(Lambda))`` with ``p(Lambda) = sum_z p(Lambda|z) p_obs(z)``.

    ``posteriors`` has shape (settings, lambdas); rows are ``p(.|z)``.
    """
    probs = p_obs.probs if isinstance(p_obs, SettingDistribution) else np.asarray(p_obs)
    post = np.asarray(posteriors)
    if post.dtype != object or probs.dtype != object:
        post = post.astype(np.float64)
        probs = np.asarray(probs, dtype=np.float64)
    marginal = _marginal_lambda(post, probs)
    return max(sum(abs(a - b) for a, b in zip(row, marginal)) for row in post)


@dataclass(frozen=True)
class LocalResponseModel:
    """Measurement-dependent local model.

    ``responses[k][l, z_k, o_k] = p(o_k | z_k, lambda_l)`` for party ``k``;
    ``posteriors[z, l] = p(lambda_l | z)``; ``p_obs`` weights the settings.
    """

    shape: ScenarioShape
    responses: tuple[np.ndarray, ...]
    posteriors: np.ndarray
    p_obs: np.ndarray

    def behavior_table(self, weights_per_setting: np.ndarray) -> np.ndarray:
        """``sum_l prod_k p(o_k|z_k,l) w[z, l]`` as a flat (settings, outcomes) array."""
        shape = self.shape
        out = np.zeros((shape.num_settings, shape.num_outcomes))
        for zi, z in enumerate(shape.setting_tuples()):
            for oi, o in enumerate(shape.outcome_tuples()):
                prod = np.ones(weights_per_setting.shape[1])
                for k in range(shape.parties):
                    prod = prod * self.responses[k][:, z[k], o[k]]
                out[zi, oi] = float(prod @ weights_per_setting[zi])
        return out


@dataclass(frozen=True)
class BoundCheck:
    holds: bool
    max_deviation: float
    m_prime: float

    @property
    def slack(self) -> float:
        return self.m_prime - self.max_deviation


def m_prime_bound_check(model: LocalResponseModel, tol: float = 1e-12) -> BoundCheck:
    """Compare the dependent behavior with its independent counterpart entrywise.

    The dependent behavior uses ``p(lambda|z)``, the independent one the
    averaged ``p(lambda)``; every entry must differ by at most ``M'``.
    """
    post = np.asarray(model.posteriors, dtype=np.float64)
    p_obs = np.asarray(model.p_obs, dtype=np.float64)
    mp = float(m_prime(post, p_obs))
    marginal = p_obs @ post
    dependent = model.behavior_table(post)
    independent = model.behavior_table(np.tile(marginal, (post.shape[0], 1)))
    dev = float(np.abs(dependent - independent).max())
    return BoundCheck(dev <= mp + tol, dev, mp)


def response_model_from_strategy(s: SourceStrategy) -> LocalResponseModel:
    """Recast a strategy with deterministic outputs as a posterior-based local model."""
    if s.outputs is None:
        raise ValueError("strategy has no outputs")
    post, p_obs = posteriors_from_strategy(s)
    responses = []
    for k, (m, d) in enumerate(zip(s.shape.settings, s.shape.outcomes)):
        r = np.zeros((len(s.lambdas), m, d))
        for l, strat in enumerate(s.outputs):
            for zk in range(m):
                r[l, zk, strat.assignment[k][zk]] = 1.0
        responses.append(r)
    return LocalResponseModel(s.shape, tuple(responses), np.asarray(post, dtype=np.float64), np.asarray(p_obs.probs, dtype=np.float64))


__all__ = [
    "BoundCheck",
    "InfeasiblePriorError",
    "LocalResponseModel",
    "PriorSolution",
    "SVParams",
    "SettingDistribution",
    "SourceStrategy",
    "TILTED_CHSH_POINTS",
    "guessing_probability",
    "m_prime",
    "m_prime_bound_check",
    "min_entropy",
    "min_entropy_unconditioned",
    "p_max_merit",
    "p_min_merit",
    "posteriors_from_strategy",
    "response_model_from_strategy",
    "solve_prior",
    "source_polytope_vertices",
    "strategy_general",
    "strategy_hide_one",
    "strategy_independent",
    "strategy_tilted_chsh",
    "strategy_theorem1",
    "sv_check",
]
