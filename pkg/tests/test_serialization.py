from fractions import Fraction

import numpy as np
import pytest

from bellmd import serialization as ser
from bellmd.numeric import DOUBLE
from bellmd.samplers import random_chsh_ns, random_response_model
from bellmd.scenario import catalog, pr_box
from bellmd.sources import strategy_theorem1, strategy_tilted_chsh
from bellmd.scenario import CHSH_SHAPE


def test_behavior_round_trip_exact():
    p = random_chsh_ns(np.random.default_rng(3))
    q = ser.behavior_from_json(ser.behavior_to_json(p))
    assert q.mode == p.mode
    assert (q.table == p.table).all()


def test_behavior_round_trip_double():
    p = pr_box(mode=DOUBLE)
    obj = ser.behavior_to_json(p)
    assert obj["table"][0][0][0][0] == 0.5
    assert ser.behavior_from_json(obj).mode == DOUBLE


@pytest.mark.parametrize("name,params", [("chsh", {}), ("tilted_chsh", {"alpha": Fraction(1, 2)}), ("chained", {"m": 3}), ("mermin", {"parties": 5})])
def test_functional_round_trip(name, params):
    f = catalog(name, **params)
    g = ser.functional_from_json(ser.functional_to_json(f))
    assert g.name == f.name
    assert g.good_set_size == f.good_set_size
    assert g.num_used_settings == f.num_used_settings
    if f.coefficients is not None:
        assert (np.asarray(g.coefficients, dtype=float) == np.asarray(f.coefficients, dtype=float)).all()


def test_strategy_round_trip():
    for s in (strategy_theorem1(CHSH_SHAPE, catalog("chsh")), strategy_tilted_chsh()):
        t = ser.strategy_from_json(ser.strategy_to_json(s))
        assert t.lambdas == s.lambdas
        assert (t.conditionals == s.conditionals).all()
        assert [o.assignment for o in t.outputs] == [o.assignment for o in s.outputs]


def test_response_model_round_trip():
    model = random_response_model(np.random.default_rng(0))
    back, post, p_obs = ser.response_model_from_json(ser.response_model_to_json(model))
    assert np.allclose(back.posteriors, model.posteriors)
    assert np.allclose(p_obs, model.p_obs)


def test_schemas_ship_and_validate():
    jsonschema = pytest.importorskip("jsonschema")
    for name in ("behavior", "functional", "strategy", "mimic", "bounds", "summary", "sweep", "mprime"):
        jsonschema.Draft202012Validator.check_schema(ser.load_schema(name))
    jsonschema.validate(ser.behavior_to_json(pr_box()), ser.load_schema("behavior"))
    jsonschema.validate(ser.functional_to_json(catalog("chsh")), ser.load_schema("functional"))
    jsonschema.validate(ser.strategy_to_json(strategy_tilted_chsh()), ser.load_schema("strategy"))
