"""Command-line entry point: ``staopt {run,bench,compare,demo}``.

Config files are INI-style (``[experiment]`` and ``[variant]`` sections, see
``configs/quick.ini``). Any flag given on the command line wins over the file.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import os
import sys
from pathlib import Path

from .algorithms import Variant, VariantConfig, run
from .benchmarks import BENCHMARKS, UnknownFunction, make
from .harness import ExperimentConfig, fe_budget, run_experiment

DEMO_START = (0.0, 0.75)
DEMO_BUDGET = 1_000_000
DEMO_EPSILON = 1e-8

EXPERIMENT_KEYS = {
    "function", "dim", "variant", "seed", "reps", "budget", "epsilon",
    "term_epsilon", "output", "workers", "reference",
}
VARIANT_KEYS = {"se", "tp", "ur_threshold", "aas_threshold", "beta"}


class ConfigError(ValueError):
    pass


def _key_line(text: str, key: str):
    for i, line in enumerate(text.splitlines(), 1):
        if line.split("=", 1)[0].strip().lower() == key:
            return i
    return None


def load_config(path) -> dict:
    """Read a config file into ``{'experiment': {...}, 'variant': {...}}``.

    Raises ConfigError with the offending line for syntax errors and
    unknown sections or keys.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    out = {"experiment": {}, "variant": {}}
    allowed = {"experiment": EXPERIMENT_KEYS, "variant": VARIANT_KEYS}
    for sec in cp.sections():
        if sec not in allowed:
            raise ConfigError(f"{path}: unknown section [{sec}]")
        for key, val in cp.items(sec):
            if key not in allowed[sec]:
                raise ConfigError(f"{path}:{_key_line(text, key)}: unknown key {key!r} in [{sec}]")
            out[sec][key] = (val, _key_line(text, key))
    return out


def _split(v: str) -> list:
    return [p.strip() for p in str(v).split(",") if p.strip()]


def _parsed(where, key, raw, conv):
    try:
        return conv(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: bad value for {key}: {raw!r} ({exc})") from None


def _settings(args, file_cfg) -> dict:
    """Merge file values and flags; flags override."""
    exp = {k: v for k, (v, _) in file_cfg["experiment"].items()}
    lines = {k: ln for k, (_, ln) in file_cfg["experiment"].items()}
    for k in EXPERIMENT_KEYS:
        flag = getattr(args, k, None)
        if flag is not None:
            exp[k] = flag
            lines[k] = None

    def where(k):
        if lines.get(k) is None:
            return f"--{k.replace('_', '-')}"
        return f"{args.config}:{lines[k]}"

    s = {}
    conv = {
        "function": lambda v: [BENCHMARKS[f.upper()].id if f.upper() in BENCHMARKS else _unknown(f) for f in _split(v)],
        "dim": lambda v: [int(d) for d in _split(v)],
        "variant": lambda v: [Variant.parse(x) for x in _split(v)],
        "seed": int,
        "reps": int,
        "budget": lambda v: None if str(v).strip().lower() in ("", "auto") else int(v),
        "epsilon": float,
        "term_epsilon": float,
        "workers": int,
        "reference": lambda v: Variant.parse(v),
        "output": str,
    }
    for k, v in exp.items():
        try:
            s[k] = _parsed(where(k), k, v, conv[k])
        except UnknownFunction as exc:
            raise ConfigError(f"{where(k)}: UnknownId: {exc.args[0]}") from None
    var = {}
    for k, (v, ln) in file_cfg["variant"].items():
        var[k] = _parsed(f"{args.config}:{ln}", k, v, float if k in ("ur_threshold", "aas_threshold", "beta") else int)
    s["variant_params"] = var
    return s


def _unknown(fid):
    raise UnknownFunction(f"unknown benchmark id {fid!r} (expected F1..F14)")


def _variant_configs(s, default):
    names = s.get("variant", default)
    try:
        return [VariantConfig(variant=v, **s["variant_params"]) for v in names]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid variant settings: {exc}") from None


def _output_dir(s) -> Path:
    return Path(s.get("output") or os.environ.get("STAOPT_OUTPUT") or "staopt_out")


def _experiment(s, default_fns, default_dims, default_variants, reps=10, reference=None, term_eps=0.0):
    fns = s.get("function", default_fns)
    dims = s.get("dim", default_dims)
    try:
        return ExperimentConfig(
            functions=[(f, d) for f in fns for d in dims],
            variants=_variant_configs(s, default_variants),
            repetitions=s.get("reps", reps),
            budget=s.get("budget"),
            success_epsilon=s.get("epsilon", 1e-8),
            termination_epsilon=s.get("term_epsilon", term_eps),
            base_seed=s.get("seed", 0),
            reference=s.get("reference", reference),
            workers=s.get("workers", 1),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _print_summary(out: Path):
    sys.stdout.write((out / "summary.csv").read_text())


def cmd_run(s) -> int:
    fid = s.get("function", ["F6"])[0]
    D = s.get("dim", [20])[0]
    try:
        f = make(fid, D)
        cfg = _variant_configs(s, [Variant.NMQI_POSTA])[0]
        cfg.seed = s.get("seed", 0)
        budget = s.get("budget") or fe_budget(D)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rec = run(f, cfg, budget, term_eps=s.get("term_epsilon", 0.0), success_eps=s.get("epsilon", 1e-8))
    print(json.dumps({
        "function": rec.function,
        "D": rec.dimension,
        "variant": rec.variant.value,
        "seed": rec.seed,
        "final_fitness": rec.final.fitness,
        "final_point": rec.final.point.tolist(),
        "total_fes": rec.total_fes,
        "terminated_by": rec.terminated_by.value,
        "success": rec.success,
        "improvements": len(rec.trace),
    }, indent=2))
    return 0


def cmd_bench(s) -> int:
    cfg = _experiment(s, list(BENCHMARKS), [20], list(Variant))
    out = _output_dir(s)
    run_experiment(cfg, out)
    _print_summary(out)
    return 0


def cmd_compare(s) -> int:
    variants = s.get("variant", list(Variant))
    if len(variants) < 2:
        raise ConfigError("compare needs at least two variants")
    cfg = _experiment(s, ["F6"], [20], variants, reference=variants[0])
    out = _output_dir(s)
    run_experiment(cfg, out)
    _print_summary(out)
    return 0


def write_path(rec, path: Path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "fe"] + [f"x{i + 1}" for i in range(rec.dimension)] + ["fitness"])
        for k, ((fe, v), x) in enumerate(zip(rec.trace, rec.path)):
            w.writerow([k, fe] + [repr(float(c)) for c in x] + [repr(float(v))])


def cmd_demo(s) -> int:
    eps = s.get("epsilon", DEMO_EPSILON)
    s = {**s, "budget": s.get("budget") or DEMO_BUDGET, "term_epsilon": s.get("term_epsilon", eps)}
    cfg = _experiment(s, ["F3", "F7"], [2], [Variant.POSTA, Variant.NM_POSTA], reps=30,
                      term_eps=eps)
    out = _output_dir(s)
    run_experiment(cfg, out)
    (out / "paths").mkdir(parents=True, exist_ok=True)
    for fid, D in cfg.functions:
        start = DEMO_START if D == 2 else None
        for v in cfg.variants:
            vc = VariantConfig(**{**vars(v), "seed": cfg.base_seed, "start": start})
            rec = run(make(fid, D), vc, cfg.budget_for(D), term_eps=cfg.termination_epsilon,
                      success_eps=cfg.success_epsilon, record_path=True)
            write_path(rec, out / "paths" / f"{fid}_D{D}_{v.variant.value}.csv")
    _print_summary(out)
    return 0


COMMANDS = {"run": cmd_run, "bench": cmd_bench, "compare": cmd_compare, "demo": cmd_demo}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="staopt", description="POSTA-family optimisers and benchmark runs")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="INI config file; flags override its values")
        sp.add_argument("--function", help="benchmark id(s), comma separated (F1..F14)")
        sp.add_argument("--dim", help="dimension(s), comma separated")
        sp.add_argument("--variant", help="variant name(s), comma separated")
        sp.add_argument("--seed", help="base seed")
        sp.add_argument("--reps", help="independent runs per cell")
        sp.add_argument("--budget", help="evaluation cap, or 'auto' for 5000*D*ln(D)")
        sp.add_argument("--epsilon", help="success tolerance")
        sp.add_argument("--term-epsilon", dest="term_epsilon", help="stop once within this of the optimum")
        sp.add_argument("--output", help="output directory (default $STAOPT_OUTPUT or ./staopt_out)")
        sp.add_argument("--workers", help="parallel worker processes")
        sp.add_argument("--reference", help="reference variant for the significance column")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        file_cfg = load_config(args.config) if args.config else {"experiment": {}, "variant": {}}
        s = _settings(args, file_cfg)
        return COMMANDS[args.command](s)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
