"""Seeded random behaviors and local models for property tests and benchmarks."""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .numeric import RATIONAL
from .scenario import CHSH_SHAPE, Behavior, ScenarioShape, behavior_from_outputs, local_vertex_outputs, mix, pr_box
from .sources import LocalResponseModel


def _rational_weights(rng: np.random.Generator, n: int, denom: int = 1000) -> list[Fraction]:
    """Dirichlet weights rounded to a common denominator, summing to exactly 1."""
    w = rng.dirichlet(np.full(n, 0.5))
    ints = np.floor(w * denom).astype(int)
    ints[int(np.argmax(w))] += denom - int(ints.sum())
    return [Fraction(int(v), denom) for v in ints]


def chsh_ns_vertices(mode: str = RATIONAL) -> list[Behavior]:
    """The 24 extreme points of the CHSH no-signaling polytope: 16 deterministic, 8 PR boxes."""
    local = [behavior_from_outputs(CHSH_SHAPE, o, mode) for o in local_vertex_outputs(CHSH_SHAPE)]
    boxes = [pr_box(v, mode) for v in itertools.product(range(2), repeat=3)]
    return local + boxes


def random_chsh_ns(rng: np.random.Generator, support: int | None = None) -> Behavior:
    """Exact random mixture of CHSH no-signaling vertices."""
    verts = chsh_ns_vertices()
    k = support or int(rng.integers(1, len(verts) + 1))
    idx = rng.choice(len(verts), size=k, replace=False)
    return mix([verts[i] for i in idx], _rational_weights(rng, k))


def _embedded_pr(variant, carrier: int, local_out: int) -> Behavior:
    """Tripartite (2,2,2) behavior: a PR box between two parties, the third deterministic."""
    shape = ScenarioShape((2, 2, 2), (2, 2, 2))
    box = pr_box(variant).table
    table = np.full(shape.table_shape, Fraction(0), dtype=object)
    pair = [k for k in range(3) if k != carrier]
    for z in itertools.product(range(2), repeat=3):
        for o in itertools.product(range(2), repeat=3):
            if o[carrier] != (local_out >> z[carrier]) & 1:
                continue
            table[z + o] = box[z[pair[0]], z[pair[1]], o[pair[0]], o[pair[1]]]
    return Behavior(shape, table)


def random_tripartite_ns(rng: np.random.Generator, support: int = 6) -> Behavior:
    """Exact mixture of tripartite deterministic points and embedded PR boxes."""
    shape = ScenarioShape((2, 2, 2), (2, 2, 2))
    outputs = local_vertex_outputs(shape)
    parts = []
    for _ in range(support):
        if rng.random() < 0.5:
            parts.append(behavior_from_outputs(shape, outputs[int(rng.integers(len(outputs)))]))
        else:
            variant = tuple(int(v) for v in rng.integers(0, 2, size=3))
            parts.append(_embedded_pr(variant, int(rng.integers(3)), int(rng.integers(4))))
    return mix(parts, _rational_weights(rng, support))


def random_response_model(
    rng: np.random.Generator,
    shape: ScenarioShape = CHSH_SHAPE,
    num_lambdas: int = 4,
) -> LocalResponseModel:
    """Random local model with stochastic responses and setting-dependent posteriors."""
    responses = tuple(
        rng.dirichlet(np.ones(d), size=(num_lambdas, m)) for m, d in zip(shape.settings, shape.outcomes)
    )
    posteriors = rng.dirichlet(np.full(num_lambdas, 0.7), size=shape.num_settings)
    p_obs = rng.dirichlet(np.ones(shape.num_settings))
    return LocalResponseModel(shape, responses, posteriors, p_obs)


__all__ = [
    "chsh_ns_vertices",
    "random_chsh_ns",
    "random_response_model",
    "random_tripartite_ns",
]
