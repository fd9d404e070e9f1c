"""Command-line front end.

Three subcommands, each writing comma-separated files with a fixed header:

``simulate``
    ``report.csv`` with columns ``quantity,index,value``.  Rows are
    ``emise``, ``stderr``, ``replications``, ``seed`` (empty index), one
    ``ise`` row per replication (index = replication number) and one
    ``k_hat_count`` row per distinct selected cut-off (index = cut-off).
    ``curves.csv`` with columns ``x,truth,median`` and, with
    ``--all-curves``, one ``rep_<j>`` column per replication.
``estimate``
    ``estimate.csv`` with columns ``x,density`` (or ``x,survival``) and
    ``selection.csv`` with columns
    ``k,contrast,penalty,objective,k_hat,k_n,sigma_hat_sq,kappa``.
``mellin-table``
    ``mellin_table.csv`` with columns ``t,re,im,abs`` for ``t >= 0``.

Configuration files are JSON objects; see the README for the keys.
Exit status is 0 when every output was written, 1 for invalid input and
2 for command-line usage errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import distributions as D
from .empirical import as_sample, empirical_mellin, mx_hat, mx_tilde, sigma_hat_sq, threshold_mask
from .estimators import estimate
from .mellin_core import DEFAULT_T_MAX, DEFAULT_T_STEP, WeightFn, make_tgrid
from .selection import PRACTICAL_KAPPA, PenaltyConfig, select_known, select_unknown
from .simulation import ExperimentSpec, PRESETS, preset, run_experiment

PROG = "mellin-deconv"


class ConfigError(ValueError):
    pass


class SampleFileError(ValueError):
    pass


# ---------------------------------------------------------------- input parsing

def read_sample_file(path) -> np.ndarray:
    """One strictly positive decimal per line; blank lines and ``#`` comments are skipped."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise SampleFileError(f"cannot read sample file {path}: {exc}") from exc
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        entry = line.split("#", 1)[0].strip()
        if not entry:
            continue
        try:
            val = float(entry)
        except ValueError:
            raise SampleFileError(f"{path}, line {lineno}: not a number: {entry!r}") from None
        if not (math.isfinite(val) and val > 0):
            raise SampleFileError(
                f"{path}, line {lineno}: sample values must be finite and strictly positive, "
                f"got {entry!r}")
        values.append(val)
    if not values:
        raise SampleFileError(f"{path}: no observations")
    return as_sample(values)


def load_config(path) -> dict:
    path = Path(path)
    try:
        cfg = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    cfg["_base_dir"] = str(path.parent)
    return cfg


def _check_keys(cfg: dict, allowed: set, where: str):
    extra = sorted(k for k in cfg if k not in allowed and not k.startswith("_"))
    if extra:
        raise ConfigError(f"unknown {where} config key(s): {', '.join(extra)}")


def parse_dist(obj) -> D.DistSpec:
    """``{"family": "pareto", "params": [1, 1]}`` or the string ``"pareto:1,1"``."""
    if isinstance(obj, str):
        family, _, rest = obj.partition(":")
        params = [p for p in rest.split(",") if p.strip()]
    elif isinstance(obj, dict):
        _check_keys(obj, {"family", "params"}, "distribution")
        family, params = obj.get("family"), obj.get("params", [])
    else:
        raise ConfigError(f"cannot interpret distribution {obj!r}")
    if not isinstance(family, str) or not isinstance(params, (list, tuple)):
        raise ConfigError(f"cannot interpret distribution {obj!r}")
    try:
        return D.make_dist(family.strip(), *(float(p) for p in params))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad distribution {obj!r}: {exc}") from exc


def _x_points(obj) -> np.ndarray | None:
    if obj is None:
        return None
    if isinstance(obj, dict):
        _check_keys(obj, {"lo", "hi", "num"}, "x_grid")
        try:
            return np.linspace(float(obj["lo"]), float(obj["hi"]), int(obj["num"]))
        except KeyError as exc:
            raise ConfigError(f"x_grid needs lo, hi and num (missing {exc})") from None
    return np.asarray(obj, dtype=float)


SIM_KEYS = {"preset", "target", "error", "n", "m", "c", "a", "kappa", "replications",
            "seed", "x_grid", "t_max", "t_step", "k_step", "survival", "name"}


def experiment_from_config(cfg: dict) -> ExperimentSpec:
    _check_keys(cfg, SIM_KEYS, "simulate")
    fields = {}
    for key, conv in (("n", int), ("c", float), ("a", float), ("kappa", float),
                      ("seed", int), ("t_max", float), ("t_step", float),
                      ("k_step", float), ("survival", bool), ("name", str)):
        if key in cfg:
            fields[key] = conv(cfg[key])
    if "m" in cfg:
        fields["m"] = None if cfg["m"] is None else int(cfg["m"])
    if "replications" in cfg:
        fields["N"] = int(cfg["replications"])
    for key in ("target", "error"):
        if key in cfg:
            fields[key] = parse_dist(cfg[key])
    x = _x_points(cfg.get("x_grid"))
    if x is not None:
        fields["x_points"] = x
    if "preset" in cfg:
        return preset(str(cfg["preset"]), **fields)
    missing = [k for k in ("target", "error", "n") if k not in fields]
    if missing:
        raise ConfigError(f"simulate config without a preset needs: {', '.join(missing)}")
    return ExperimentSpec(**fields)


# ---------------------------------------------------------------- output

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow([_fmt(v) for v in row])


def _prepare_out(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from exc
    if not os.access(out, os.W_OK):
        raise ConfigError(f"output directory {out} is not writable")
    return out


# ---------------------------------------------------------------- commands

def cmd_simulate(args) -> list[Path]:
    cfg = load_config(args.config) if args.config else {}
    if args.preset:
        cfg["preset"] = args.preset
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.replications is not None:
        cfg["replications"] = args.replications
    if args.survival:
        cfg["survival"] = True
    if args.known_error:
        cfg["m"] = None
    spec = experiment_from_config(cfg)
    # the transforms need E[X^(c-1)], E[U^(c-1)]; the variance bound needs the 2(c-1) moments
    for dist in (spec.target, spec.error):
        dist.check_moment(spec.c)
        dist.check_moment(2 * spec.c - 1)
    out = _prepare_out(args.out)

    report = run_experiment(spec, jobs=args.jobs)
    rows = [("emise", None, report.emise), ("stderr", None, report.stderr),
            ("replications", None, spec.N), ("seed", None, spec.seed)]
    rows += [("ise", j, v) for j, v in enumerate(report.per_replication_ise)]
    rows += [("k_hat_count", k, cnt) for k, cnt in report.k_hat_histogram.items()]
    report_path = out / "report.csv"
    write_csv(report_path, ["quantity", "index", "value"], rows)

    header = ["x", "truth", "median"]
    cols = [spec.x_points, report.truth, report.median_curve]
    if args.all_curves:
        header += [f"rep_{j}" for j in range(spec.N)]
        cols += list(report.curves)
    curves_path = out / "curves.csv"
    write_csv(curves_path, header, zip(*cols))
    return [report_path, curves_path]


EST_KEYS = {"y_file", "u_file", "error", "c", "a", "kappa", "x_grid", "t_max", "t_step",
            "k_step", "survival"}


def _resolve(cfg, key, override):
    if override:
        return Path(override)
    if cfg.get(key) is None:
        return None
    p = Path(cfg[key])
    return p if p.is_absolute() else Path(cfg.get("_base_dir", ".")) / p


def cmd_estimate(args) -> list[Path]:
    cfg = load_config(args.config) if args.config else {}
    _check_keys(cfg, EST_KEYS, "estimate")
    y_path = _resolve(cfg, "y_file", args.y_file)
    u_path = _resolve(cfg, "u_file", args.u_file)
    if y_path is None:
        raise ConfigError("estimate needs a Y-sample file (y_file in the config or --y-file)")
    error = parse_dist(args.error if args.error else cfg["error"]) if (
        args.error or cfg.get("error")) else None
    known = args.known_error or u_path is None
    if known and error is None:
        raise ConfigError("no U-sample file given and no known error distribution "
                          "(error in the config or --error)")

    c = float(cfg.get("c", 0.5))
    survival = bool(args.survival or cfg.get("survival", False))
    if survival and not c > 1:
        raise ConfigError(f"survival estimation requires c > 1, got c = {c:g}")
    a = float(cfg.get("a", 0.0))
    regime = "known" if known else "unknown"
    kappa = cfg.get("kappa")
    kappa = PRACTICAL_KAPPA[regime] if kappa is None else float(kappa)
    grid = make_tgrid(float(cfg.get("t_max", DEFAULT_T_MAX)),
                      float(cfg.get("t_step", DEFAULT_T_STEP)))
    k_step = float(cfg.get("k_step", grid.step))
    x = _x_points(cfg.get("x_grid"))
    if x is None:
        x = np.linspace(0.01, 8.0, 400)

    y = read_sample_file(y_path)
    out = _prepare_out(args.out)
    v = WeightFn(grid, c, a)
    mY = empirical_mellin(y, c, grid)
    s2 = sigma_hat_sq(y, c)
    pen = PenaltyConfig(regime, kappa)
    if known:
        mU = D.analytic_mellin_fn(error, c, grid)
        sel = select_known(mY, mU, v, c, y.size, pen, s2, k_step)
        mx = mx_tilde(mY, mU)
    else:
        u = read_sample_file(u_path)
        mU_hat = empirical_mellin(u, c, grid)
        mask = threshold_mask(mU_hat, u.size, y.size)
        sel = select_unknown(mY, mU_hat, mask, v, c, y.size, u.size, pen, s2, k_step)
        mx = mx_hat(mY, mU_hat, mask)
    curve = estimate(mx, sel.k_hat, c, x, survival=survival, known=known)

    est_path = out / "estimate.csv"
    write_csv(est_path, ["x", "survival" if survival else "density"],
              zip(curve.x_points, curve.values))
    sel_path = out / "selection.csv"
    write_csv(sel_path, ["k", "contrast", "penalty", "objective", "k_hat", "k_n",
                         "sigma_hat_sq", "kappa"],
              ((float(k), con, p, obj, sel.k_hat, sel.k_n, sel.sigma_hat_sq, sel.kappa)
               for k, con, p, obj in zip(sel.ks, sel.contrast, sel.penalty, sel.objective)))
    return [est_path, sel_path]


TABLE_KEYS = {"dist", "c", "t_max", "t_step"}


def cmd_mellin_table(args) -> list[Path]:
    cfg = load_config(args.config) if args.config else {}
    _check_keys(cfg, TABLE_KEYS, "mellin-table")
    if args.dist:
        cfg["dist"] = args.dist
    if args.c is not None:
        cfg["c"] = args.c
    if "dist" not in cfg:
        raise ConfigError("mellin-table needs a distribution (dist in the config or --dist)")
    dist = parse_dist(cfg["dist"])
    c = float(cfg.get("c", 0.5))
    dist.check_moment(c)
    grid = make_tgrid(float(cfg.get("t_max", DEFAULT_T_MAX)),
                      float(cfg.get("t_step", DEFAULT_T_STEP)))
    t = grid.points[grid.half:]
    m = np.asarray(D.analytic_mellin(dist, c, t), dtype=complex)
    out = _prepare_out(args.out)
    path = out / "mellin_table.csv"
    write_csv(path, ["t", "re", "im", "abs"], zip(t, m.real, m.imag, np.abs(m)))
    return [path]


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=PROG, description=(
        "Multiplicative deconvolution with Mellin transforms."))
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", default=".", help="output directory (default: .)")

    s = sub.add_parser("simulate", parents=[common], help="run a Monte Carlo experiment")
    s.add_argument("--preset", choices=PRESETS, help="named configuration")
    s.add_argument("--seed", type=int, help="override the master seed")
    s.add_argument("--replications", type=int, help="override the number of replications")
    s.add_argument("--jobs", type=int, default=1, help="worker processes (default: 1)")
    s.add_argument("--survival", action="store_true", help="estimate the survival function")
    s.add_argument("--known-error", action="store_true",
                   help="use the exact error transform instead of an error sample")
    s.add_argument("--all-curves", action="store_true",
                   help="write every replication's curve to curves.csv")
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("estimate", parents=[common], help="estimate from sample files")
    e.add_argument("--y-file", help="file with the noisy observations")
    e.add_argument("--u-file", help="file with a sample of the error")
    e.add_argument("--error", help="known error distribution, e.g. pareto:1,1")
    e.add_argument("--survival", action="store_true", help="estimate the survival function")
    e.add_argument("--known-error", action="store_true",
                   help="use the exact transform of --error even if a U-file is given")
    e.set_defaults(func=cmd_estimate)

    t = sub.add_parser("mellin-table", parents=[common], help="tabulate an exact Mellin transform")
    t.add_argument("--dist", help="distribution, e.g. gamma:1,3")
    t.add_argument("--c", type=float, help="abscissa of the integration line")
    t.set_defaults(func=cmd_mellin_table)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate" and not (args.preset or args.config):
        parser.error("simulate needs --preset or --config")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    if getattr(args, "replications", None) is not None and args.replications < 1:
        parser.error("--replications must be at least 1")
    try:
        paths = args.func(args)
    except (ValueError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
