import itertools
from fractions import Fraction

import numpy as np
import pytest

from bellmd.fine import JointOutcomeModel, SignalingError, cross_set, local_mimic, tightness_check
from bellmd.lp import local_membership_on_subset
from bellmd.numeric import DOUBLE
from bellmd.samplers import random_chsh_ns, random_tripartite_ns
from bellmd.scenario import CHSH_SHAPE, Behavior, ScenarioShape, bell_value, catalog, pr_box


def test_cross_set_sizes():
    assert len(cross_set(CHSH_SHAPE, (0, 0))) == 3
    assert len(cross_set(ScenarioShape((2, 2, 2), (2, 2, 2)), (1, 0, 1))) == 4
    assert len(cross_set(ScenarioShape((3, 4), (2, 2)), (2, 1))) == 6
    assert len(cross_set(ScenarioShape((3, 2, 4), (2, 2, 2)), (0, 0, 0))) == 3 + 2 + 4 - 3 + 1


def test_cross_set_rejects_bad_anchor():
    with pytest.raises(ValueError):
        cross_set(CHSH_SHAPE, (0, 2))


def test_pr_mimic():
    mimic, model = local_mimic(pr_box(), (0, 0))
    assert bell_value(catalog("chsh"), mimic) == 2
    assert sorted(model.weights) == [Fraction(1, 2), Fraction(1, 2)]
    for w, s in model.entries:
        # a0 = a1 = b0 = b1 on the (0,0) anchor
        assert len({o for row in s.assignment for o in row}) == 1
    for z in cross_set(CHSH_SHAPE, (0, 0)):
        assert (mimic.table[z] == pr_box().table[z]).all()
    # the hidden setting is where the mimic differs
    assert not (mimic.table[1, 1] == pr_box().table[1, 1]).all()


@pytest.mark.parametrize("anchor", CHSH_SHAPE.setting_tuples())
def test_pr_tightness_fails_for_every_anchor(anchor):
    opposite = tuple(1 - a for a in anchor)
    assert tightness_check(pr_box(), anchor, opposite) is False
    assert local_membership_on_subset(pr_box(), cross_set(CHSH_SHAPE, anchor).members).feasible


def test_tightness_rejects_cross_member():
    with pytest.raises(ValueError):
        tightness_check(pr_box(), (0, 0), (0, 1))


def test_signaling_input_rejected():
    table = np.zeros(CHSH_SHAPE.table_shape, dtype=object)
    table[...] = Fraction(0)
    for x, y in itertools.product(range(2), repeat=2):
        table[x, y, 0, x] = Fraction(1)
    with pytest.raises(SignalingError) as info:
        local_mimic(Behavior(CHSH_SHAPE, table), (0, 0))
    assert info.value.report.difference != 0


@pytest.mark.parametrize("seed", range(20))
def test_random_mimic_is_exact_and_local(seed):
    p = random_chsh_ns(np.random.default_rng(seed))
    for anchor in CHSH_SHAPE.setting_tuples():
        mimic, model = local_mimic(p, anchor)
        for z in cross_set(CHSH_SHAPE, anchor):
            assert (mimic.table[z] == p.table[z]).all()
        assert sum(model.weights) == 1
        assert all(w > 0 for w in model.weights)
        assert abs(bell_value(catalog("chsh"), mimic)) <= 2


@pytest.mark.parametrize("seed", range(5))
def test_tripartite_mimic(seed):
    p = random_tripartite_ns(np.random.default_rng(seed))
    anchor = (seed % 2, 1, 0)
    mimic, model = local_mimic(p, anchor)
    for z in cross_set(p.shape, anchor):
        assert (mimic.table[z] == p.table[z]).all()


def test_zero_probability_conditionals_default_uniform():
    # deterministic behavior: many conditioning events have probability zero
    from bellmd.scenario import chsh_point

    p = chsh_point(1, -1, 1, 1).behavior()
    mimic, model = local_mimic(p, (1, 1))
    assert len(model.entries) == 1
    assert (mimic.table == p.table).all()


def test_double_mode_mimic():
    p = pr_box(mode=DOUBLE)
    mimic, _ = local_mimic(p, (1, 0))
    assert mimic.mode == DOUBLE
    for z in cross_set(CHSH_SHAPE, (1, 0)):
        assert np.allclose(mimic.table[z], p.table[z])


def test_joint_model_weights_checked():
    from bellmd.scenario import chsh_point

    with pytest.raises(ValueError):
        JointOutcomeModel(CHSH_SHAPE, ((Fraction(1, 2), chsh_point(1, 1, 1, 1)),))
