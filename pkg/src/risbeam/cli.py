"""Command-line front end.

Exit codes: 0 success, 1 validation failure (optimality gap), 2 usage or
input error. Angles are radians unless ``--degrees`` is given, which
converts inputs and outputs at the boundary.

Channel instance file (JSON)::

    {"direct": {"beta": 1.0, "alpha": 0.0},
     "cascaded": [{"beta": 0.7, "alpha": 1.2}, ...]}

Monte-Carlo config file (JSON); ``N``, ``K``, ``R`` and ``beta_min`` may be
lists, in which case every combination is run::

    {"N": 64, "K": [3, 8], "R": 6.283185307179586, "beta_min": 0.2,
     "alpha_r": 1.6, "phi_r": 1.5707963267948966, "peak_aligned": true,
     "kappa": 0, "trials": 1000, "seed": 1,
     "algorithms": ["alg1", "eapq", "apq"],
     "percentiles": [1, 50], "cdf_grid": [0, 10, 100],
     "direct_power": 1.0, "element_power": 1.0, "workers": 1}
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    approx_ratio_continuous,
    approx_ratio_limited,
    approx_ratio_uniform,
    loss_db_decomposition,
)
from .core import (
    TWO_PI,
    ChannelInstance,
    PdaProfile,
    Regime,
    build_coefficient_set,
    build_phase_set,
)
from .experiments import SOLVERS, ChannelModelConfig, TrialError, run_monte_carlo
from .search import DEFAULT_BUDGET, BudgetExceeded, boundary_offsets, exhaustive_search

EXIT_OK, EXIT_GAP, EXIT_USAGE = 0, 1, 2
GAP_TOL = 1e-9
RECORD_COLUMNS = ["trial", "algorithm", "power", "snr_boost", "normalized_power", "steps"]


class InputError(Exception):
    """Malformed input file or config; reported with exit code 2."""


# ---------------------------------------------------------------- output


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, Regime):
        return v.value
    return v


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _json_text(meta, data) -> str:
    return json.dumps({"meta": _jsonable(meta), "data": _jsonable(data)}, indent=2) + "\n"


def _emit(args, text: str, path=None):
    path = path or args.output
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _meta(args, **extra):
    cfg = {k: v for k, v in vars(args).items() if k not in ("func",)}
    cfg.update(extra)
    return {"tool": "risbeam", "version": __version__, "command": args.command, "config": cfg}


def _table(args, header, rows, extra_meta=None):
    if args.format == "json":
        data = [dict(zip(header, r)) for r in rows]
        meta = _meta(args)
        meta.update(extra_meta or {})
        _emit(args, _json_text(meta, data))
    else:
        _emit(args, _csv_text(header, rows))


# ---------------------------------------------------------------- helpers


def _angle_in(args, x):
    return None if x is None else (math.radians(x) if args.degrees else float(x))


def _angle_out(args, x):
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_angle_out(args, v) for v in x]
    return math.degrees(x) if args.degrees else float(x)


def _profile(args, beta_min=None) -> PdaProfile:
    return PdaProfile(
        args.beta_min if beta_min is None else beta_min,
        args.alpha_r,
        _angle_in(args, args.phi_r),
    )


def _peak_offset(args):
    return None if args.literal_profile else _angle_in(args, args.peak_offset)


def _range(args, R=None):
    R = args.R if R is None else R
    return TWO_PI if R is None else _angle_in(args, R)


def _coefficients(args, K=None, R_rad=None, beta_min=None):
    R_rad = _range(args) if R_rad is None else R_rad
    pset = build_phase_set(args.K if K is None else K, R_rad)
    return build_coefficient_set(pset, _profile(args, beta_min), _peak_offset(args))


def load_instance(path, degrees=False) -> ChannelInstance:
    """Parse a channel instance file, raising InputError with a located message."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc

    def pair(obj, where):
        if not isinstance(obj, dict):
            raise InputError(f"{path}: {where}: expected an object with 'beta' and 'alpha'")
        vals = []
        for key in ("beta", "alpha"):
            if key not in obj:
                raise InputError(f"{path}: {where}.{key}: missing field")
            v = obj[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InputError(f"{path}: {where}.{key}: expected a finite number, got {v!r}")
            vals.append(float(v))
        if vals[0] < 0:
            raise InputError(f"{path}: {where}.beta: must be non-negative")
        if degrees:
            vals[1] = math.radians(vals[1])
        return vals

    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    b0, a0 = pair(doc.get("direct", {"beta": 0.0, "alpha": 0.0}), "direct")
    cascaded = doc.get("cascaded")
    if not isinstance(cascaded, list):
        raise InputError(f"{path}: cascaded: missing or not a list")
    pairs = [pair(c, f"cascaded[{i}]") for i, c in enumerate(cascaded)]
    betas = [p[0] for p in pairs]
    alphas = [p[1] for p in pairs]
    return ChannelInstance(b0, a0, np.asarray(betas, dtype=float), np.asarray(alphas, dtype=float))


# ---------------------------------------------------------------- commands


def cmd_solve(args) -> int:
    channel = load_instance(args.instance, args.degrees)
    ws = _coefficients(args)
    try:
        if args.algorithm == "exhaustive":
            sol = exhaustive_search(channel, ws, budget=args.budget)
        else:
            sol = SOLVERS[args.algorithm](channel, ws)
    except BudgetExceeded as exc:
        print(f"error: refusing exhaustive search: {exc}", file=sys.stderr)
        return EXIT_USAGE
    data = {
        "algorithm": sol.algorithm,
        "selections": [int(k) for k in sol.selections],
        "phases": _angle_out(args, sol.phases),
        "power": sol.power,
        "snr_boost": sol.snr_boost,
        "steps": sol.steps,
        "n_boundaries": sol.n_boundaries,
        "certified": bool(sol.certified),
    }
    if args.format == "json":
        _emit(args, _json_text(_meta(args), data))
    else:
        row = [
            data["algorithm"],
            sol.power,
            sol.snr_boost,
            sol.steps,
            sol.n_boundaries,
            data["certified"],
            " ".join(str(k) for k in data["selections"]),
            " ".join(_fmt(p) for p in data["phases"]),
        ]
        header = ["algorithm", "power", "snr_boost", "steps", "n_boundaries", "certified", "selections", "phases"]
        _emit(args, _csv_text(header, [row]))
    return EXIT_OK


def cmd_validate(args) -> int:
    ws = _coefficients(args)
    need = args.K**args.N
    if need > args.budget:
        print(f"error: refusing exhaustive search: {need} evaluations exceed budget {args.budget}", file=sys.stderr)
        return EXIT_USAGE
    cfg = ChannelModelConfig(args.N, seed=args.seed)
    res = run_monte_carlo(cfg, ws, ("alg1", "exhaustive"), args.trials, workers=args.workers, budget=args.budget)
    alg, exh = res.power["alg1"], res.power["exhaustive"]
    gap = np.where(exh > 0, (exh - alg) / np.where(exh > 0, exh, 1.0), 0.0)
    summary = {
        "trials": args.trials,
        "max_gap": float(gap.max()),
        "mean_gap": float(gap.mean()),
        "certified": bool(ws.locally_convex),
    }
    header = ["trial", "alg1_power", "exhaustive_power", "relative_gap"]
    rows = [(t, alg[t], exh[t], gap[t]) for t in range(args.trials)]
    if args.format == "json":
        _emit(args, _json_text(_meta(args), {"summary": summary, "trials": [dict(zip(header, r)) for r in rows]}))
    else:
        _emit(args, _csv_text(header, rows))
    print(
        f"trials={summary['trials']} max_gap={summary['max_gap']:.3e} "
        f"mean_gap={summary['mean_gap']:.3e} certified={summary['certified']}",
        file=sys.stderr,
    )
    if summary["certified"] and summary["max_gap"] > GAP_TOL:
        return EXIT_GAP
    return EXIT_OK


def cmd_loss_table(args) -> int:
    header = ["beta_min", "K", "e_pda", "loss_db", "gain_loss_db", "quantization_loss_db"]
    rows = []
    for b in args.beta_min:
        for K in args.K:
            ws = _coefficients(args, K=K, R_rad=TWO_PI, beta_min=b)
            rep = approx_ratio_uniform(ws)
            gl, ql = loss_db_decomposition(ws)
            rows.append((b, K, rep.e_pda, rep.loss_db, gl, ql))
    _table(args, header, rows)
    return EXIT_OK


def cmd_ratios(args) -> int:
    header = ["beta_min", "K", "R", "regime", "e_pda", "loss_db"]
    rows = []
    for b in args.beta_min:
        for K in args.K:
            for R in args.R or [TWO_PI if not args.degrees else 360.0]:
                Rr = _range(args, R)
                ws = _coefficients(args, K=K, R_rad=Rr, beta_min=b)
                if ws.regime is Regime.UNIFORM:
                    rep = approx_ratio_uniform(ws)
                else:
                    rep = approx_ratio_limited(ws, Rr)
                rows.append((b, K, _angle_out(args, Rr), rep.regime.value, rep.e_pda, rep.loss_db))
        cont = approx_ratio_continuous(_profile(args, b))
        rows.append((b, None, None, "continuous", cont.e_pda, cont.loss_db))
    _table(args, header, rows)
    return EXIT_OK


def cmd_boundaries(args) -> int:
    ws = _coefficients(args)
    try:
        deltas, s = boundary_offsets(ws)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    header = ["k", "phase", "gain", "delta", "s"]
    rows = [
        (k, _angle_out(args, ws.phases[k]), ws.gains[k], _angle_out(args, deltas[k]), _angle_out(args, s[k]))
        for k in range(ws.K)
    ]
    _table(args, header, rows, {"locally_convex": ws.locally_convex})
    return EXIT_OK


_CONFIG_KEYS = {
    "N", "K", "R", "beta_min", "alpha_r", "phi_r", "peak_aligned", "kappa", "trials",
    "seed", "algorithms", "percentiles", "cdf_grid", "direct_power", "element_power",
    "workers", "metric",
}


def load_config(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    unknown = sorted(set(doc) - _CONFIG_KEYS)
    if unknown:
        raise InputError(f"{path}: unknown fields {unknown}")
    for key in ("N", "K", "trials"):
        if key not in doc:
            raise InputError(f"{path}: {key}: missing field")
    cfg = {
        "R": TWO_PI,
        "beta_min": 0.2,
        "alpha_r": 1.6,
        "phi_r": math.pi / 2,
        "peak_aligned": True,
        "kappa": 0.0,
        "seed": 0,
        "algorithms": ["alg1", "eapq", "apq"],
        "percentiles": [1.0, 50.0],
        "cdf_grid": [],
        "direct_power": 1.0,
        "element_power": 1.0,
        "workers": 1,
        "metric": "snr_boost",
    }
    cfg.update(doc)
    bad = [a for a in cfg["algorithms"] if a not in SOLVERS]
    if bad:
        raise InputError(f"{path}: algorithms: unknown {bad}; choose from {sorted(SOLVERS)}")
    return cfg


def _as_list(v):
    return list(v) if isinstance(v, (list, tuple)) else [v]


def cmd_montecarlo(args) -> int:
    cfg = load_config(args.config)
    to_rad = math.radians if args.degrees else float
    records, aggregates = [], []
    grid = [float(x) for x in cfg["cdf_grid"]]
    for N, K, R, b in itertools.product(*(_as_list(cfg[k]) for k in ("N", "K", "R", "beta_min"))):
        R_rad = to_rad(R)
        profile = PdaProfile(b, cfg["alpha_r"], to_rad(cfg["phi_r"]))
        ws = build_coefficient_set(build_phase_set(K, R_rad), profile, 0.0 if cfg["peak_aligned"] else None)
        model = ChannelModelConfig(N, cfg["direct_power"], cfg["element_power"], cfg["kappa"], cfg["seed"])
        res = run_monte_carlo(model, ws, cfg["algorithms"], cfg["trials"], workers=cfg["workers"])
        if ws.regime is Regime.UNIFORM:
            theory = approx_ratio_uniform(ws).e_pda
        else:
            theory = approx_ratio_limited(ws, R_rad).e_pda
        setting = (N, K, _angle_out(args, R_rad), b)
        records.extend(r + setting for r in res.records())
        for a in res.algorithms:
            agg = res.aggregate(a, cfg["percentiles"], grid or None, cfg["metric"])
            row = dict(zip(("N", "K", "R", "beta_min"), setting))
            row.update(
                algorithm=a,
                mean=agg["mean"],
                mean_power=agg["mean_power"],
                mean_normalized_power=agg["mean_normalized_power"],
                e_pda_apq=theory,
                certified=bool(ws.locally_convex),
            )
            for p, v in agg["percentiles"].items():
                row[f"p{_fmt(p)}"] = v
            for x, c in zip(grid, agg.get("cdf", [])):
                row[f"cdf@{_fmt(x)}"] = c
            aggregates.append(row)

    header = RECORD_COLUMNS + ["N", "K", "R", "beta_min"]
    if args.format == "json":
        meta = _meta(args, resolved=cfg)
        data = {"records": [dict(zip(header, r)) for r in records], "aggregates": aggregates}
        _emit(args, _json_text(meta, data))
    else:
        _emit(args, _csv_text(header, records))
        agg_header = list(aggregates[0]) if aggregates else []
        text = _csv_text(agg_header, [[r[k] for k in agg_header] for r in aggregates])
        if args.output in (None, "-"):
            sys.stdout.write("\n" + text)
        else:
            out = Path(args.output)
            _emit(args, text, out.with_name(out.stem + "_aggregate" + out.suffix))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_common(p, *, lists=False, need_k=True):
    nargs = "+" if lists else None
    if need_k:
        p.add_argument("--K", type=int, nargs=nargs, default=[2, 3, 4, 6, 8] if lists else 4,
                       help="number of discrete phases")
    p.add_argument("--beta-min", type=float, nargs=nargs, default=[0.2, 0.5, 0.8] if lists else 0.2)
    p.add_argument("--alpha-r", type=float, default=1.6)
    p.add_argument("--phi-r", type=float, default=None, help="PDA rotation (default pi/2)")
    p.add_argument("--peak-offset", type=float, default=0.0,
                   help="angle of the PDA peak from the grid phase nearest zero")
    p.add_argument("--literal-profile", action="store_true",
                   help="evaluate the PDA curve at the phases using phi_r, without peak alignment")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="risbeam", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"risbeam {__version__}")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    parser.add_argument("--degrees", action="store_true", help="angles in and out in degrees")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimize one channel instance")
    p.add_argument("instance")
    p.add_argument("--algorithm", choices=sorted(SOLVERS), default="alg1")
    p.add_argument("--R", type=float, default=None, help="phase range (default 2*pi)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="compare the sweep against exhaustive search")
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--R", type=float, default=None)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("loss-table", help="loss in dB versus the ideal, uniform phases")
    _add_common(p, lists=True)
    p.set_defaults(func=cmd_loss_table)

    p = sub.add_parser("ratios", help="approximation ratios over K, R and beta_min")
    p.add_argument("--R", type=float, nargs="+", default=None)
    _add_common(p, lists=True)
    p.set_defaults(func=cmd_ratios)

    p = sub.add_parser("boundaries", help="decision boundary table of one coefficient set")
    p.add_argument("--R", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_boundaries)

    p = sub.add_parser("montecarlo", help="run a Monte-Carlo campaign from a config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_montecarlo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "phi_r", "absent") is None:
        args.phi_r = 90.0 if args.degrees else math.pi / 2
    try:
        return args.func(args)
    except (InputError, TrialError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
