"""JSON encodings of behaviors, functionals, strategies and mimic models.

Exact numbers are written as ``"n/d"`` strings, floats as JSON numbers.
Tables are nested lists indexed ``[z_1]...[z_K][o_1]...[o_K]``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .fine import JointOutcomeModel
from .numeric import DOUBLE, RATIONAL, format_number, parse_number
from .scenario import Behavior, BellFunctional, DeterministicStrategy, Limits, ScenarioShape
from .sources import LocalResponseModel, SourceStrategy


def encode_number(x, digits: int = 12):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if x is None:
        return None
    return float(format_number(float(x), digits))


def _encode_array(arr):
    arr = np.asarray(arr, dtype=object)
    if arr.ndim == 0:
        return encode_number(arr.item())
    return [_encode_array(a) for a in arr]


def _has_string(obj) -> bool:
    if isinstance(obj, str):
        return True
    if isinstance(obj, list):
        return any(_has_string(v) for v in obj)
    return False


def _infer_mode(obj, mode):
    if mode is not None:
        return mode
    return RATIONAL if _has_string(obj) else DOUBLE


def _decode_array(obj, mode):
    arr = np.array(obj, dtype=object)
    out = np.empty(arr.shape, dtype=object if mode == RATIONAL else np.float64)
    for idx, v in np.ndenumerate(arr):
        out[idx] = parse_number(v, mode)
    return out


def shape_to_json(shape: ScenarioShape) -> dict:
    return {"settings": list(shape.settings), "outcomes": list(shape.outcomes)}


def shape_from_json(obj: dict) -> ScenarioShape:
    return ScenarioShape(tuple(obj["settings"]), tuple(obj["outcomes"]))


def behavior_to_json(p: Behavior) -> dict:
    return {"shape": shape_to_json(p.shape), "mode": p.mode, "table": _encode_array(p.table)}


def behavior_from_json(obj: dict, mode: str | None = None) -> Behavior:
    mode = _infer_mode(obj["table"], mode or obj.get("mode"))
    return Behavior(shape_from_json(obj["shape"]), _decode_array(obj["table"], mode))


def functional_to_json(f: BellFunctional) -> dict:
    lim = f.limits
    return {
        "name": f.name,
        "shape": shape_to_json(f.shape),
        "coefficients": None if f.coefficients is None else _encode_array(f.coefficients),
        "limits": {
            "local": encode_number(lim.local),
            "quantum": encode_number(lim.quantum),
            "no_signaling": encode_number(lim.no_signaling),
            "algebraic": encode_number(lim.algebraic),
        },
        "hidden_set_size": f.hidden_set_size,
        "good_set_size": f.good_set_size,
        "used_settings_count": f.num_used_settings if f.coefficients is not None else f.used_settings_count,
        "ns_symmetric": f.ns_symmetric,
    }


def functional_from_json(obj: dict, mode: str | None = None) -> BellFunctional:
    coeffs = obj.get("coefficients")
    mode = _infer_mode(coeffs, mode) if coeffs is not None else DOUBLE
    lim = obj.get("limits") or {}

    def num(v):
        return None if v is None else parse_number(v, RATIONAL if isinstance(v, str) else DOUBLE)

    return BellFunctional(
        shape_from_json(obj["shape"]),
        None if coeffs is None else _decode_array(coeffs, mode),
        Limits(num(lim.get("local")), num(lim.get("quantum")), num(lim.get("no_signaling")), num(lim.get("algebraic"))),
        obj.get("name", "custom"),
        obj.get("hidden_set_size"),
        obj.get("good_set_size"),
        obj.get("used_settings_count") if coeffs is None else None,
        bool(obj.get("ns_symmetric", False)),
    )


def strategy_to_json(s: SourceStrategy) -> dict:
    out = {
        "shape": shape_to_json(s.shape),
        "lambdas": list(s.lambdas),
        "prior": _encode_array(s.prior),
        "conditionals": {l: _encode_array(row) for l, row in zip(s.lambdas, s.conditionals)},
    }
    if s.outputs is not None:
        out["outputs"] = {l: [list(r) for r in o.assignment] for l, o in zip(s.lambdas, s.outputs)}
    return out


def strategy_from_json(obj: dict, mode: str | None = None) -> SourceStrategy:
    shape = shape_from_json(obj["shape"])
    lambdas = [str(l) for l in obj["lambdas"]]
    cond = [obj["conditionals"][l] for l in lambdas]
    mode = _infer_mode([obj["prior"], cond], mode)
    outputs = None
    if obj.get("outputs"):
        outputs = tuple(DeterministicStrategy(shape, obj["outputs"][l]) for l in lambdas)
    return SourceStrategy(shape, tuple(lambdas), _decode_array(obj["prior"], mode), _decode_array(cond, mode), outputs)


def joint_model_to_json(model: JointOutcomeModel) -> list:
    return [{"weight": encode_number(w), "assignment": [list(r) for r in s.assignment]} for w, s in model.entries]


def response_model_from_json(obj: dict) -> tuple[LocalResponseModel | None, np.ndarray, np.ndarray]:
    """Returns ``(model or None, posteriors, p_obs)``; the model needs ``responses``."""
    post = _decode_array(obj["posteriors"], DOUBLE)
    p_obs = _decode_array(obj["p_obs"], DOUBLE)
    if "responses" not in obj:
        return None, post, p_obs
    shape = shape_from_json(obj["shape"])
    responses = tuple(_decode_array(r, DOUBLE) for r in obj["responses"])
    return LocalResponseModel(shape, responses, post, p_obs), post, p_obs


def response_model_to_json(model: LocalResponseModel) -> dict:
    return {
        "shape": shape_to_json(model.shape),
        "posteriors": _encode_array(model.posteriors),
        "p_obs": _encode_array(model.p_obs),
        "responses": [_encode_array(r) for r in model.responses],
    }


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


def dump_json(obj, path=None, **kw) -> str:
    text = json.dumps(obj, indent=2, **kw)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


SCHEMA_DIR = Path(__file__).with_name("schemas")


def load_schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text())
