"""``bellmd`` command-line interface.

Machine-readable output goes to stdout (JSON, or CSV with ``--format csv``),
a short human-readable summary to stderr. Exit codes: 0 success,
1 computational infeasibility, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import bounds, fine, lp, sources
from .numeric import DOUBLE, RATIONAL, as_fraction, format_number
from .scenario import CHSH_SHAPE, ScenarioShape, bell_value, catalog, pr_box
from .serialization import (
    behavior_from_json,
    behavior_to_json,
    encode_number,
    functional_from_json,
    joint_model_to_json,
    load_json,
    response_model_from_json,
    strategy_from_json,
    strategy_to_json,
)
from .simulator import simulate

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _functional(args, mode=RATIONAL):
    if getattr(args, "functional", None):
        return functional_from_json(load_json(args.functional))
    params = {"mode": mode}
    if args.m is not None:
        params["m"] = args.m
    if args.alpha is not None:
        params["alpha"] = as_fraction(args.alpha) if mode == RATIONAL else float(args.alpha)
    if args.parties is not None:
        params["parties"] = args.parties
    try:
        return catalog(args.inequality, **params)
    except KeyError as exc:
        raise UsageError(str(exc.args[0]))
    except ValueError as exc:
        raise UsageError(str(exc))


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}." if not prefix else f"{prefix}{k}.")
    elif isinstance(obj, list):
        for k, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{k}.")
    else:
        yield prefix.rstrip("."), obj


def _emit(obj, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(obj, indent=2) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in _flatten(obj):
        w.writerow([k, "" if v is None else v])


def _report(r: bounds.BoundReport) -> dict:
    d = r.to_dict()
    d["per_run_min_entropy_threshold"] = encode_number(d["per_run_min_entropy_threshold"])
    d["p_max_threshold"] = encode_number(d["p_max_threshold"])
    return d


def cmd_bounds(args, out, err) -> int:
    f = _functional(args)
    shape = ScenarioShape(args.settings, (2,) * len(args.settings)) if args.settings else f.shape
    t1 = bounds.theorem1_threshold(shape)
    result = {"inequality": f.name, "settings": list(shape.settings), "theorem1": _report(t1)}
    try:
        result["ns"] = _report(bounds.ns_threshold(f))
    except ValueError as exc:
        result["ns"] = None
        err.write(f"ns threshold unavailable: {exc}\n")
    try:
        result["quantum_pm"] = encode_number(bounds.quantum_pm_threshold(f))
    except ValueError:
        result["quantum_pm"] = None
    result["good_set_size"] = f.good_set_size
    result["used_settings"] = f.num_used_settings
    _emit(result, args.format, out)
    err.write(
        f"{f.name}: inequality-independent threshold {format_number(t1.per_run_min_entropy_threshold)} bits/run"
        + (f", ns threshold {result['ns']['per_run_min_entropy_threshold']} bits/run" if result["ns"] else "")
        + (f", quantum P_M {result['quantum_pm']}" if result["quantum_pm"] is not None else "")
        + "\n"
    )
    return EXIT_OK


def cmd_maxbell(args, out, err) -> int:
    mode = args.mode
    f = _functional(args, mode)
    if args.p_obs:
        p_obs = [as_fraction(v) for v in args.p_obs.split(",")]
    else:
        p_obs = [as_fraction(1) / f.shape.num_settings] * f.shape.num_settings
    if sum(p_obs) != 1:
        raise UsageError(f"p_obs sums to {sum(p_obs)}, not 1")
    try:
        grid = lp.parse_grid(args.grid)
    except ValueError as exc:
        raise UsageError(str(exc))
    rows = lp.sweep_max_bell(f, p_obs, grid, mode=mode, workers=args.workers)
    if args.format == "csv":
        lp.sweep_to_csv(rows, out)
    else:
        out.write(json.dumps([
            {
                "p_max": encode_number(r.p_max),
                "bell_max": encode_number(r.bell_max),
                "status": r.status,
            }
            for r in rows
        ], indent=2) + "\n")
    n_bad = sum(r.status != lp.OPTIMAL for r in rows)
    for r in rows:
        if r.certificate is not None:
            cert = ",".join(format_number(v) for v in r.certificate)
            err.write(f"P_M={format_number(r.p_max)}: infeasible, Farkas certificate y=({cert})\n")
    err.write(f"{f.name}: {len(rows)} grid points, {n_bad} infeasible\n")
    return EXIT_INFEASIBLE if rows and n_bad == len(rows) else EXIT_OK


def _load_behavior(spec: str, mode):
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name != "pr":
            raise UsageError(f"unknown builtin behavior {name!r}")
        return pr_box(mode=mode or RATIONAL)
    return behavior_from_json(load_json(spec), mode)


def cmd_fine(args, out, err) -> int:
    p = _load_behavior(args.behavior, args.mode)
    try:
        anchor = p.shape.validate_setting(args.anchor)
    except ValueError as exc:
        raise UsageError(str(exc))
    try:
        mimic, model = fine.local_mimic(p, anchor)
    except fine.SignalingError as exc:
        err.write(f"{exc}\n")
        return EXIT_INFEASIBLE
    cs = fine.cross_set(p.shape, anchor)
    result = {
        "anchor": list(anchor),
        "cross_set": [list(z) for z in cs.members],
        "mimic": behavior_to_json(mimic),
        "decomposition": joint_model_to_json(model),
    }
    if p.shape == CHSH_SHAPE:
        result["chsh_value"] = encode_number(bell_value(catalog("chsh", mode=mimic.mode), mimic))
    _emit(result, args.format, out)
    err.write(f"local mimic on {len(cs)} settings from {len(model.entries)} deterministic points\n")
    return EXIT_OK


def cmd_strategy(args, out, err) -> int:
    mode = args.mode
    f = _functional(args, mode)
    if args.kind == "theorem1":
        s = sources.strategy_theorem1(f.shape, f, mode=mode)
    elif args.kind == "tilted":
        s = sources.strategy_tilted_chsh(mode)
    elif args.kind == "hide_one":
        s = sources.strategy_hide_one(f, mode)
    else:
        if args.p_max is None:
            raise UsageError("--p-max is required for the general strategy")
        try:
            s = sources.strategy_general(f, as_fraction(args.p_max), mode)
        except ValueError as exc:
            err.write(f"{exc}\n")
            return EXIT_INFEASIBLE
    _emit(strategy_to_json(s), "json", out)
    err.write(
        f"{args.kind} strategy: {len(s.lambdas)} lambdas, P_M={format_number(s.conditionals.max())}, "
        f"H_min(Z|L)={format_number(sources.min_entropy(s))} bits\n"
    )
    return EXIT_OK


def cmd_simulate(args, out, err) -> int:
    s = strategy_from_json(load_json(args.strategy))
    f = _functional(args, s.mode)
    if f.shape != s.shape:
        raise UsageError("strategy and inequality shapes differ")
    if s.outputs is None:
        raise UsageError("strategy file has no outputs")
    summary = simulate(s, f, args.rounds, args.seed, keep_records=bool(args.keep_records))
    if args.keep_records:
        with open(args.keep_records, "w") as fh:
            fh.write(summary.records_csv())
    result = summary.to_dict()
    result["inequality"] = f.name
    result["bell_value"] = encode_number(result["bell_value"])
    result["bell_stderr"] = encode_number(result["bell_stderr"])
    result["empirical_p_obs"] = [encode_number(v) for v in result["empirical_p_obs"]]
    result["p_obs_stderr"] = [encode_number(v) for v in result["p_obs_stderr"]]
    _emit(result, args.format, out)
    err.write(f"{args.rounds} rounds, {f.name} estimate {format_number(summary.bell_value)}\n")
    return EXIT_OK


def cmd_mprime(args, out, err) -> int:
    obj = load_json(args.model)
    model, post, p_obs = response_model_from_json(obj)
    value = sources.m_prime(post, p_obs)
    result = {"m_prime": encode_number(float(value))}
    if model is not None:
        check = sources.m_prime_bound_check(model)
        result["bound_check"] = {
            "holds": check.holds,
            "max_deviation": encode_number(check.max_deviation),
            "slack": encode_number(check.slack),
        }
    _emit(result, args.format, out)
    err.write(f"M' = {format_number(float(value))}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bellmd", description="Measurement dependence in Bell tests")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_inequality(p, default="chsh"):
        p.add_argument("--inequality", default=default, help="chsh, tilted_chsh, chained or mermin")
        p.add_argument("--functional", help="BellFunctional JSON file (overrides --inequality)")
        p.add_argument("--m", type=int, help="settings per party for the chained inequality")
        p.add_argument("--alpha", help="tilt for tilted_chsh")
        p.add_argument("--parties", type=int, help="number of parties for mermin")

    def add_format(p, default="json"):
        p.add_argument("--format", choices=("json", "csv"), default=default)

    p = sub.add_parser("bounds", help="min-entropy thresholds")
    add_inequality(p)
    p.add_argument("--settings", type=_ints, help="settings per party for the inequality-independent bound, e.g. 2,2,2")
    add_format(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("maxbell", help="LP sweep of the maximal Bell value over P_M")
    add_inequality(p)
    p.add_argument("--p-obs", help="comma-separated observed setting distribution (default uniform)")
    p.add_argument("--grid", required=True, help="start:stop:step (stop exclusive) or comma list")
    p.add_argument("--mode", choices=(RATIONAL, DOUBLE), default=RATIONAL)
    p.add_argument("--workers", type=int, default=None, help="parallel solves (default BELLMD_NUM_THREADS)")
    add_format(p, "csv")
    p.set_defaults(func=cmd_maxbell)

    p = sub.add_parser("fine", help="local mimic of a no-signaling behavior on a cross set")
    p.add_argument("--behavior", required=True, help="Behavior JSON file or builtin:pr")
    p.add_argument("--anchor", type=_ints, required=True, help="anchor setting tuple, e.g. 0,0")
    p.add_argument("--mode", choices=(RATIONAL, DOUBLE), default=None)
    add_format(p)
    p.set_defaults(func=cmd_fine)

    p = sub.add_parser("strategy", help="emit a faking source strategy as JSON")
    add_inequality(p)
    p.add_argument("--kind", choices=("theorem1", "tilted", "hide_one", "general"), default="theorem1")
    p.add_argument("--p-max", help="P_M for the general strategy")
    p.add_argument("--mode", choices=(RATIONAL, DOUBLE), default=RATIONAL)
    p.set_defaults(func=cmd_strategy)

    p = sub.add_parser("simulate", help="simulate a Bell test driven by a strategy")
    add_inequality(p)
    p.add_argument("--strategy", required=True, help="SourceStrategy JSON file")
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--keep-records", metavar="CSV", help="write per-round records to this file")
    add_format(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mprime", help="total-variation dependence measure M'")
    p.add_argument("--model", required=True, help="JSON with posteriors, p_obs and optional responses")
    add_format(p)
    p.set_defaults(func=cmd_mprime)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, err)
    except UsageError as exc:
        err.write(f"bellmd {args.command}: {exc}\n")
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        err.write(f"bellmd {args.command}: {exc}\n")
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
