"""Batch entry point.

Every subcommand prints a JSON summary on stdout and, with ``--out DIR``,
writes deterministic CSV/JSON artifacts there. Exit codes: 0 success,
1 validation error, 2 internal inconsistency.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import jsonschema
import numpy as np

from .clifford_reps import (RepresentationError, build_generators, canonical_1d,
                            theorem_check, verify_clifford)
from .positivity_witness import (InternalInconsistencyError, WitnessPreconditionError,
                                 find_counterexample)
from .propagator import EvolutionParams, zero_mode_stochasticity
from .spectral_solver import (DensityField, GridSpec, PropagatorBugError, cauchy_initial,
                              evolve, positivity_scan, write_density_csv)
from .trotter_prw import (ConfigError, LatticeField, PRWConfig, l1_distance, prw_simulate,
                          trotter_evolve, write_ensemble_csv, write_histogram_csv)

COMMANDS = ("rep", "evolve", "trotter", "prw", "witness", "theorem-check", "report")

# config key -> (json schema, help)
KEYS = {
    "dim": ({"type": "integer", "minimum": 1}, "spatial dimension d"),
    "m": ({"type": "integer", "minimum": 1}, "number of sigma_1/sigma_3 blocks (d=1 only)"),
    "alpha": ({"type": "number"}, "damping parameter alpha"),
    "grid": ({"type": "integer", "minimum": 8}, "grid points per axis (power of two)"),
    "L": ({"type": "number", "exclusiveMinimum": 0}, "half-extent of the periodic box"),
    "time": ({"type": "array", "items": {"type": "number", "minimum": 0}},
             "comma separated sample times"),
    "lambda": ({"type": "number", "minimum": 0}, "flip rate of the random walk"),
    "c": ({"type": "number", "exclusiveMinimum": 0}, "walker speed"),
    "walkers": ({"type": "integer", "minimum": 1}, "number of walkers"),
    "seed": ({"type": "integer", "minimum": 0}, "64-bit random seed"),
    "dt": ({"type": "number", "exclusiveMinimum": 0}, "walk time step"),
    "out": ({"type": "string"}, "output directory"),
    "check": ({"type": "boolean"}, "also validate the Clifford relations"),
}

# keys each subcommand accepts, with defaults
DEFAULTS = {
    "rep": {"dim": 1, "m": None, "check": False},
    "theorem-check": {"dim": 1, "m": None, "alpha": 1.0},
    "evolve": {"dim": 1, "m": None, "alpha": 1.0, "grid": 1024, "L": 40.0,
               "time": [0.5, 1.0, 2.0]},
    "trotter": {"grid": 1024, "L": 8.0, "time": [1.0]},
    "prw": {"lambda": 1.0, "c": 1.0, "walkers": 100000, "seed": 20240101,
            "dt": 0.004, "time": [1.0], "grid": 256, "L": 5.12},
    "witness": {"dim": 2, "alpha": 1.0, "grid": 256, "L": 20.0},
    "report": {"grid": 256, "L": 20.0},
}
for _d in DEFAULTS.values():
    _d["out"] = None


class ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _time_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of numbers: {text!r}")


_FLAG_TYPES = {"dim": int, "m": int, "alpha": float, "grid": int, "L": float,
               "time": _time_list, "lambda": float, "c": float, "walkers": int,
               "seed": int, "dt": float, "out": str}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dirac-positivity",
                     description="Positivity preservation of the Euclidean Dirac equation.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    for name in COMMANDS:
        keys = DEFAULTS[name]
        sp = sub.add_parser(name, help=f"{name} (config keys: {', '.join(keys)})",
                            description=f"Config keys: {', '.join(keys)}.")
        for key in keys:
            help_text = f"{KEYS[key][1]} [default: {keys[key]}]"
            if key == "check":
                sp.add_argument("--check", action="store_true", default=None, help=help_text)
            else:
                sp.add_argument(f"--{key}", dest=key, type=_FLAG_TYPES[key], default=None,
                                help=help_text)
        sp.add_argument("--config", default=None,
                        help="JSON file with any of the keys above; flags override it")
    return parser


def resolve_config(command: str, args: argparse.Namespace) -> dict:
    """Defaults, then the JSON file, then explicit flags; schema-checked."""
    allowed = DEFAULTS[command]
    cfg = dict(allowed)
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}")
        if not isinstance(data, dict):
            raise ValidationError("config file must hold a JSON object")
        for key in data:
            if key not in allowed:
                raise ValidationError(f"unknown config key {key!r} for {command}")
        cfg.update(data)
    for key in allowed:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    schema = {
        "type": "object",
        "additionalProperties": False,
        "properties": {k: {"oneOf": [KEYS[k][0], {"type": "null"}]} for k in allowed},
    }
    try:
        jsonschema.validate(cfg, schema)
    except jsonschema.ValidationError as exc:
        where = ".".join(str(p) for p in exc.absolute_path) or "config"
        raise ValidationError(f"invalid value for {where!r}: {exc.instance!r}")
    return cfg


def _generators(cfg):
    if cfg.get("m") is not None:
        if cfg["dim"] != 1:
            raise ValidationError("--m applies to --dim 1 only")
        return canonical_1d(cfg["m"])
    return build_generators(cfg["dim"])


def _grid(cfg, d):
    try:
        return GridSpec(d, cfg["grid"], float(cfg["L"]))
    except ValueError as exc:
        raise ValidationError(str(exc))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _write_json(out, name, obj):
    if out:
        Path(out, name).write_text(_dump(obj) + "\n")


def cmd_rep(cfg):
    g = _generators(cfg)
    res = {"d": g.d, "S": g.S, "e": [m.tolist() for m in g.e]}
    if cfg["check"]:
        res["violations"] = verify_clifford(g)
    _write_json(cfg["out"], "generators.json", res)
    return res


def cmd_theorem_check(cfg):
    res = theorem_check(_generators(cfg), float(cfg["alpha"])).to_dict()
    _write_json(cfg["out"], "verdict.json", res)
    return res


def _bump(grid, S):
    return cauchy_initial(grid, S, 0)


def cmd_evolve(cfg):
    g = _generators(cfg)
    grid = _grid(cfg, g.d)
    params = EvolutionParams(float(cfg["alpha"]), g)
    p0 = _bump(grid, g.S)
    times = sorted(cfg["time"])
    rep = positivity_scan(params, p0, times)
    res = {"times": rep.times, "mass": rep.mass, "min_entry": rep.min_entry,
           "location": [[c, list(s)] for c, s in rep.location]}
    if cfg["out"]:
        for i, t in enumerate(times):
            write_density_csv(evolve(params, p0, t), Path(cfg["out"], f"density_{i}.csv"))
    _write_json(cfg["out"], "scan.json", res)
    return res


def cmd_trotter(cfg):
    grid = _grid(cfg, 1)
    t = float(cfg["time"][0])
    N = t / grid.dx
    if abs(N - round(N)) > 1e-9 or round(N) < 1:
        raise ValidationError(f"time/dx = {N} must be a positive integer")
    N = int(round(N))
    x = grid.axis()
    v = np.zeros((2, grid.n))
    v[0] = np.exp(-x**2 / 0.5)
    v /= v.sum() * grid.dx
    p0 = DensityField(grid, v)
    out = trotter_evolve(LatticeField.from_density(p0), t, N)
    ref = evolve(EvolutionParams(1.0, canonical_1d(1)), p0, t)
    res = {"t": t, "N": N, "min_entry": float(out.values.min()), "mass": out.mass(),
           "l1_to_spectral": float(grid.dx * np.abs(out.values - ref.values).sum())}
    if cfg["out"]:
        write_density_csv(out.to_density(grid), Path(cfg["out"], "trotter.csv"))
    _write_json(cfg["out"], "trotter.json", res)
    return res


def cmd_prw(cfg):
    try:
        pc = PRWConfig(cfg["lambda"], cfg["c"], cfg["walkers"], cfg["seed"], cfg["dt"])
    except ConfigError as exc:
        raise ValidationError(str(exc))
    grid = _grid(cfg, 1)
    t = float(cfg["time"][0])
    if not t > 0:
        raise ValidationError("time must be positive")
    ens = prw_simulate(pc, t)
    res = {"t": ens.t, "walkers": pc.n_walkers, "seed": pc.seed}
    if pc.lam > 0:
        res["l1_to_master_equation"] = l1_distance(ens, grid, pc.lam, pc.c)
    if cfg["out"]:
        write_ensemble_csv(ens, Path(cfg["out"], "ensemble.csv"))
        write_histogram_csv(ens.histogram(grid), Path(cfg["out"], "histogram.csv"))
    _write_json(cfg["out"], "prw.json", res)
    return res


def cmd_witness(cfg):
    g = build_generators(cfg["dim"])
    grid = _grid(cfg, g.d)
    try:
        w = find_counterexample(g, float(cfg["alpha"]), grid)
    except WitnessPreconditionError as exc:
        raise ValidationError(str(exc))
    res = w.to_dict()
    _write_json(cfg["out"], "witness.json", res)
    return res


def cmd_report(cfg):
    res = {"theorem": {}, "zero_mode": {}, "witness": None}
    for d in (1, 2, 3):
        res["theorem"][f"d{d}"] = theorem_check(build_generators(d), 1.0).to_dict()
    for alpha in (0.5, 1.0, 2.0):
        z = zero_mode_stochasticity(EvolutionParams(alpha, canonical_1d(1)), 1.0)
        res["zero_mode"][f"alpha={alpha}"] = {"column_sums": z.column_sums.tolist(),
                                              "min_entry": z.min_entry}
    res["witness"] = find_counterexample(build_generators(2), 1.0, _grid(cfg, 2)).to_dict()
    _write_json(cfg["out"], "report.json", res)
    return res


HANDLERS = {"rep": cmd_rep, "theorem-check": cmd_theorem_check, "evolve": cmd_evolve,
            "trotter": cmd_trotter, "prw": cmd_prw, "witness": cmd_witness,
            "report": cmd_report}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args.command, args)
        if cfg.get("out"):
            Path(cfg["out"]).mkdir(parents=True, exist_ok=True)
        res = HANDLERS[args.command](cfg)
    except (ValidationError, RepresentationError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InternalInconsistencyError, PropagatorBugError) as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 2
    print(_dump(res))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
