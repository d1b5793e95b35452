import itertools
from fractions import Fraction

import numpy as np
import pytest

from bellmd.scenario import CHSH_SHAPE, catalog


@pytest.fixture
def chsh():
    return catalog("chsh")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def brute_force_vertices(n, bound):
    """Vertices of {0 <= p <= bound, sum p = 1} by support patterns.

    A point is a vertex iff at most one coordinate is strictly between 0 and
    the bound; enumerate all patterns in {0, bound, free}^n and solve for the
    free coordinate.
    """
    bound = Fraction(bound)
    out = set()
    for pattern in itertools.product((0, 1, 2), repeat=n):
        if pattern.count(2) > 1:
            continue
        v = [bound if s == 1 else Fraction(0) for s in pattern]
        rest = 1 - sum(v)
        if 2 in pattern:
            if not 0 < rest < bound:
                continue
            v[pattern.index(2)] = rest
        elif rest != 0:
            continue
        out.add(tuple(v))
    return out


def chsh_setting_values():
    return CHSH_SHAPE.setting_tuples()
