import csv
import io
import json
import math
import subprocess
import sys

import jsonschema
import pytest

from bellmd.cli import main
from bellmd.serialization import behavior_to_json, dump_json, load_schema, response_model_to_json
from bellmd.samplers import random_response_model
from bellmd.scenario import pr_box

import numpy as np


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv, schema=None):
    code, out, err = run(*argv)
    assert code == 0, err
    obj = json.loads(out)
    if schema:
        jsonschema.validate(obj, load_schema(schema))
    return obj


def test_bounds_chsh():
    obj = run_json("bounds", "--inequality", "chsh", schema="bounds")
    assert obj["theorem1"]["per_run_min_entropy_threshold"] == pytest.approx(math.log2(3), abs=1e-11)
    assert obj["ns"]["per_run_min_entropy_threshold"] == pytest.approx(math.log2(3), abs=1e-11)
    assert obj["quantum_pm"] == pytest.approx(0.284517796864, abs=1e-12)


def test_bounds_chained_and_mermin():
    obj = run_json("bounds", "--inequality", "chained", "--m", "10", schema="bounds")
    assert obj["ns"]["per_run_min_entropy_threshold"] == pytest.approx(math.log2(99), abs=1e-11)
    obj = run_json("bounds", "--inequality", "mermin", "--parties", "5", schema="bounds")
    assert obj["ns"]["effective_settings"] == 10


def test_bounds_multipartite_settings():
    obj = run_json("bounds", "--inequality", "mermin", "--parties", "3", "--settings", "3,2,4")
    assert obj["theorem1"]["effective_settings"] == 7


def test_unknown_inequality_is_usage_error():
    code, out, err = run("bounds", "--inequality", "nope")
    assert code == 2
    assert "unknown inequality" in err


def test_missing_subcommand_is_usage_error():
    assert run()[0] == 2


def test_maxbell_uniform_csv():
    code, out, _ = run("maxbell", "--grid", "0.25:0.3334:0.005")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 17
    values = [float(eval_fraction(r["bell_max"])) for r in rows]
    assert values == sorted(values)
    for r in rows:
        assert float(eval_fraction(r["bell_max"])) == pytest.approx(24 * float(eval_fraction(r["p_max"])) - 4, abs=1e-9)


def eval_fraction(text):
    from fractions import Fraction

    return Fraction(text)


def test_maxbell_point_and_infeasible_rows():
    code, out, err = run("maxbell", "--p-obs", "0.29,0.13,0.29,0.29", "--grid", "0.26,0.29")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["status"] == "infeasible"
    assert rows[1]["bell_max"] == "2"
    assert "certificate" in err
    code, _, _ = run("maxbell", "--p-obs", "0.29,0.13,0.29,0.29", "--grid", "0.26")
    assert code == 1


def test_maxbell_csv_json_equivalent():
    args = ("maxbell", "--p-obs", "0.3,0.3,0.2,0.2", "--grid", "0.29:0.33:0.01")
    _, text, _ = run(*args, "--format", "csv")
    obj = run_json(*args, "--format", "json", schema="sweep")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [r["p_max"] for r in rows] == [o["p_max"] for o in obj]
    assert [r["bell_max"] or None for r in rows] == [o["bell_max"] for o in obj]
    assert [r["status"] for r in rows] == [o["status"] for o in obj]


def test_maxbell_double_mode():
    code, out, _ = run("maxbell", "--grid", "0.27", "--mode", "double")
    assert code == 0
    assert out.splitlines()[1] == "0.27,2.48,optimal"


def test_maxbell_bad_grid_and_pobs():
    assert run("maxbell", "--grid", "0.25:0.3:0")[0] == 2
    assert run("maxbell", "--grid", "0.3", "--p-obs", "0.5,0.5,0.5,0.5")[0] == 2


def test_fine_pr(tmp_path):
    path = tmp_path / "pr.json"
    dump_json(behavior_to_json(pr_box()), path)
    obj = run_json("fine", "--behavior", str(path), "--anchor", "0,0", schema="mimic")
    assert obj["chsh_value"] == "2"
    assert len(obj["cross_set"]) == 3
    assert sum(float(eval_fraction(e["weight"])) for e in obj["decomposition"]) == 1
    builtin = run_json("fine", "--behavior", "builtin:pr", "--anchor", "0,0")
    assert builtin == obj


def test_fine_csv_matches_json():
    obj = run_json("fine", "--behavior", "builtin:pr", "--anchor", "1,1")
    _, text, _ = run("fine", "--behavior", "builtin:pr", "--anchor", "1,1", "--format", "csv")
    flat = dict(list(csv.reader(io.StringIO(text)))[1:])
    assert flat["chsh_value"] == obj["chsh_value"]
    assert flat["decomposition.0.weight"] == obj["decomposition"][0]["weight"]


def test_fine_bad_anchor():
    assert run("fine", "--behavior", "builtin:pr", "--anchor", "0,5")[0] == 2


def test_fine_signaling_behavior_is_infeasible(tmp_path):
    from fractions import Fraction

    table = [[[[str(Fraction(int(b == x))) if a == 0 else "0" for b in range(2)] for a in range(2)] for y in range(2)] for x in range(2)]
    path = tmp_path / "sig.json"
    path.write_text(json.dumps({"shape": {"settings": [2, 2], "outcomes": [2, 2]}, "table": table}))
    assert run("fine", "--behavior", str(path), "--anchor", "0,0")[0] == 1


def test_strategy_and_simulate(tmp_path):
    _, text, _ = run("strategy", "--kind", "theorem1")
    path = tmp_path / "thm1_chsh.json"
    path.write_text(text)
    jsonschema.validate(json.loads(text), load_schema("strategy"))
    obj = run_json("simulate", "--strategy", str(path), "--rounds", "100000", "--seed", "42", schema="summary")
    assert obj["bell_value"] == 4
    again = run_json("simulate", "--strategy", str(path), "--rounds", "100000", "--seed", "42")
    assert again == obj


def test_simulate_records_and_tilted(tmp_path):
    _, text, _ = run("strategy", "--kind", "tilted")
    path = tmp_path / "tilted.json"
    path.write_text(text)
    rec = tmp_path / "rec.csv"
    obj = run_json("simulate", "--strategy", str(path), "--inequality", "tilted_chsh", "--alpha", "1",
                   "--rounds", "2000", "--seed", "1", "--keep-records", str(rec))
    assert obj["bell_value"] == 5
    assert rec.read_text().splitlines()[0] == "round,lambda,z1,z2,o1,o2"


def test_simulate_shape_mismatch(tmp_path):
    _, text, _ = run("strategy", "--kind", "theorem1")
    path = tmp_path / "s.json"
    path.write_text(text)
    code = run("simulate", "--strategy", str(path), "--inequality", "chained", "--m", "3", "--rounds", "10", "--seed", "0")[0]
    assert code == 2


def test_strategy_general_and_hide_one():
    obj = json.loads(run("strategy", "--kind", "general", "--p-max", "0.3")[1])
    assert len(obj["lambdas"]) == 4
    assert run("strategy", "--kind", "general", "--p-max", "0.2")[0] == 1
    assert run("strategy", "--kind", "general")[0] == 2
    obj = json.loads(run("strategy", "--kind", "hide_one", "--inequality", "chained", "--m", "3")[1])
    assert len(obj["lambdas"]) == 6


def test_mprime_independent(tmp_path):
    path = tmp_path / "independent.json"
    path.write_text(json.dumps({"posteriors": [[0.5, 0.5]] * 4, "p_obs": [0.25] * 4}))
    obj = run_json("mprime", "--model", str(path), schema="mprime")
    assert obj["m_prime"] == 0


def test_mprime_with_bound_check(tmp_path):
    path = tmp_path / "model.json"
    dump_json(response_model_to_json(random_response_model(np.random.default_rng(1))), path)
    obj = run_json("mprime", "--model", str(path), schema="mprime")
    assert obj["bound_check"]["holds"] is True


def test_missing_file_is_usage_error(tmp_path):
    assert run("mprime", "--model", str(tmp_path / "none.json"))[0] == 2


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "bellmd.cli", "bounds", "--inequality", "chsh"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["theorem1"]["effective_settings"] == 3
    assert "bits/run" in res.stderr
