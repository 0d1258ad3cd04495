"""Command-line interface.

Exit codes: 0 success, 2 validation error, 3 domain error, 4 convergence failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .bvp import lorentz_distance, wavefront
from .errors import ConvergenceFailure, DomainError, ValidationError
from .geodesics import covector_from_hbar, exp_map, geodesic_samples, light_like_boundary_c
from .hamiltonian import Covector, integrate_batch
from .lie import GroupPoint, MetricParams, Regime
from .optimality import maxwell_time, optimality_report
from .reachability import attainable_contains, oblate_reach_plan, plan_endpoint, sample_admissible_trajectory

FIGURE_ETAS = (-0.8, 0.0, 0.1)


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.floating):
        return _jsonable(float(x))
    if isinstance(x, np.integer):
        return int(x)
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), allow_nan=False, indent=None) + "\n"


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows, columns) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(columns)
    for r in rows:
        wr.writerow([_csv_cell(r[k]) for k in columns])
    return buf.getvalue()


def _emit(args, text: str, name: str | None = None):
    if args.out is None:
        sys.stdout.write(text)
        return
    path = args.out if name is None else os.path.join(args.out, name)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _emit_rows(args, rows, columns, name=None):
    if args.format == "json":
        _emit(args, dumps(rows), None if name is None else name + ".json")
    else:
        _emit(args, rows_to_csv(rows, columns), None if name is None else name + ".csv")


def params_from_args(args) -> MetricParams:
    if args.eta is not None:
        return MetricParams.from_eta(args.eta, I1=args.I1, n=args.n)
    return MetricParams(I1=args.I1, I2=args.I2 if args.I2 is not None else args.I1, n=args.n)


def _point(args) -> GroupPoint:
    w = [complex(*pair) for pair in json.loads(args.w)] if args.w.strip().startswith("[") else None
    if w is None:
        re_, im_ = (float(v) for v in args.w.split(","))
        return GroupPoint(args.c, complex(re_, im_))
    return GroupPoint(args.c, w[0] if len(w) == 1 else np.array(w))


def _covector(args, params) -> Covector:
    if args.hbar1 is not None:
        return covector_from_hbar(params, args.hbar1, args.phi, args.chi)
    if args.h1 is None:
        raise ValidationError("give either --h1/--h2/--h3 or --hbar1")
    return Covector(args.h1, args.h2, args.h3)


# --- commands ---------------------------------------------------------------


def cmd_geodesic(args):
    params = params_from_args(args)
    h = _covector(args, params)
    hperp = None
    if params.n > 1:
        hperp = np.zeros(params.n, dtype=complex)
        hperp[0] = complex(h.h2, h.h3)
        if args.hperp is not None:
            hperp = np.array([complex(*pair) for pair in json.loads(args.hperp)])
    rows = geodesic_samples(params, h, args.t_max, args.samples, hperp)
    n = len(rows[0]["re_w"])
    flat = []
    for r in rows:
        d = {"t": r["t"], "tau": r["tau"], "c": r["c"]}
        if n == 1:
            d["re_w"], d["im_w"] = r["re_w"][0], r["im_w"][0]
        else:
            for k in range(n):
                d[f"re_w{k + 1}"] = r["re_w"][k]
            for k in range(n):
                d[f"im_w{k + 1}"] = r["im_w"][k]
        flat.append(d)
    _emit_rows(args, flat, list(flat[0].keys()))


def cmd_report(args):
    params = params_from_args(args)
    h = _covector(args, params)
    _emit(args, dumps(optimality_report(params, h).to_dict()))


def cmd_reach(args):
    params = params_from_args(args)
    p = _point(args)
    out = attainable_contains(params, p).to_dict()
    if args.plan:
        plan = oblate_reach_plan(params, p, tol=args.tol)
        end = plan_endpoint(plan)
        out["plan"] = [s.to_dict() for s in plan]
        out["endpoint"] = end.to_dict()
        out["error"] = end.distance(p)
    _emit(args, dumps(out))


def cmd_distance(args):
    params = params_from_args(args)
    _emit(args, dumps(lorentz_distance(params, _point(args)).to_dict()))


def cmd_wavefront(args):
    params = params_from_args(args)
    rows = wavefront(params, args.t, args.samples)
    _emit_rows(args, rows, ["hbar1", "chi", "t", "c", "abs_w", "w_signed"])


def cmd_oracle(args):
    """Deviation between the closed form and the integrator for one covector."""
    params = params_from_args(args)
    h = _covector(args, params)
    steps = args.oracle_steps
    nsave = math.gcd(steps, args.samples - 1) if args.samples > 1 else 1
    _, G = integrate_batch(params, h.as_array(), [args.t], steps, nsave)
    dev = max(float(np.abs(exp_map(params, h, args.t * k / nsave).as_array() - G[0, k]).max())
              for k in range(nsave + 1))
    _emit(args, dumps({"steps": steps, "checkpoints": nsave + 1, "max_deviation": dev}))


def cmd_trajectory(args):
    params = params_from_args(args)
    pts, _ = sample_admissible_trajectory(params, args.seed, args.steps, args.dt)
    rows = []
    for k, p in enumerate(pts):
        v = attainable_contains(params, p)
        rows.append({"step": k, "c": p.c, "re_w": complex(p.w).real, "im_w": complex(p.w).imag,
                     "attainable": v.in_attainable})
    _emit_rows(args, rows, ["step", "c", "re_w", "im_w", "attainable"])


def figure_datasets(I1: float = 1.0, samples: int = 64):
    """Datasets behind the attainable-set, geodesic and wavefront figures."""
    out = {}
    for eta in FIGURE_ETAS:
        params = MetricParams.from_eta(eta, I1=I1)
        tag = f"eta{eta:+.1f}".replace("+", "p").replace("-", "m").replace(".", "_")
        if params.regime is not Regime.OBLATE:
            rows = []
            for r in np.linspace(0.0, 3.0, samples):
                upper = math.pi - math.atan(r) if params.regime is Regime.SYMMETRIC else math.inf
                rows.append({"abs_w": float(r), "c_lower": light_like_boundary_c(params, float(r)),
                             "c_upper": upper})
            out[f"boundary_{tag}"] = (rows, ["abs_w", "c_lower", "c_upper"])
        geo = []
        hb1 = np.linspace(-1.0, -3.0, 9)
        if eta < 0:
            hb1 = np.linspace(-1.0, -1.0 / math.sqrt(-eta) * (1 - 1e-3), 9)
        for k, hbar1 in enumerate(hb1):
            h = covector_from_hbar(params, float(hbar1))
            t_m, pm = maxwell_time(params, h)
            for t in np.linspace(0.0, t_m, samples):
                p = exp_map(params, h, float(t))
                geo.append({"family": k, "hbar1": float(hbar1), "t": float(t), "c": p.c,
                            "abs_w": p.abs_w, "maxwell": False})
            geo.append({"family": k, "hbar1": float(hbar1), "t": t_m, "c": pm.c, "abs_w": 0.0,
                        "maxwell": True})
        out[f"geodesics_{tag}"] = (geo, ["family", "hbar1", "t", "c", "abs_w", "maxwell"])
        wav = []
        t_axis = 2.0 * math.pi * params.I2 / math.sqrt(params.I2)
        for frac in (0.25, 0.5, 0.75, 1.1):
            for r in wavefront(params, frac * t_axis, samples):
                wav.append(dict(r, t_fraction=frac))
        out[f"wavefronts_{tag}"] = (wav, ["t_fraction", "hbar1", "chi", "t", "c", "abs_w", "w_signed"])
    return out


def cmd_figures(args):
    if args.out is None:
        raise ValidationError("figures needs --out DIR")
    os.makedirs(args.out, exist_ok=True)
    data = figure_datasets(args.I1, args.samples)
    for name, (rows, cols) in data.items():
        _emit_rows(args, rows, cols, name)
    with open(os.path.join(args.out, "manifest.json"), "w") as fh:
        fh.write(dumps({"files": sorted(data)}))


# --- parser -----------------------------------------------------------------


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--I1", type=float, default=1.0)
    grp = common.add_mutually_exclusive_group()
    grp.add_argument("--I2", type=float)
    grp.add_argument("--eta", type=float)
    common.add_argument("--n", type=_positive_int, default=1)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out")
    common.add_argument("--oracle-steps", type=_positive_int, default=100000)
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--seed", type=int, default=0)

    cov = argparse.ArgumentParser(add_help=False)
    cov.add_argument("--h1", type=float)
    cov.add_argument("--h2", type=float, default=0.0)
    cov.add_argument("--h3", type=float, default=0.0)
    cov.add_argument("--hbar1", type=float)
    cov.add_argument("--phi", type=float, default=0.0)
    cov.add_argument("--chi", type=int, choices=(-1, 1), default=-1)

    pt = argparse.ArgumentParser(add_help=False)
    pt.add_argument("--c", type=float, required=True)
    pt.add_argument("--w", default="0,0", help="'re,im' or JSON [[re, im], ...]")

    ap = argparse.ArgumentParser(prog="berger-ads", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("geodesic", parents=[common, cov], help="sample a geodesic")
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--samples", type=_positive_int, default=101)
    p.add_argument("--hperp", help="JSON [[re, im], ...] of length n")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("report", parents=[common, cov], help="conjugate/Maxwell/cut times")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("figures", parents=[common], help="write figure datasets")
    p.add_argument("--samples", type=_positive_int, default=64)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("reach", parents=[common, pt], help="attainable-set verdict")
    p.add_argument("--plan", action="store_true", help="emit an oblate control plan")
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("wavefront", parents=[common], help="wavefront section at time t")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--samples", type=_positive_int, default=101)
    p.set_defaults(func=cmd_wavefront)

    p = sub.add_parser("distance", parents=[common, pt], help="Lorentzian distance")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("oracle", parents=[common, cov], help="closed form vs integrator")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--samples", type=_positive_int, default=11)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("trajectory", parents=[common], help="random admissible trajectory")
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--dt", type=float, default=0.1)
    p.set_defaults(func=cmd_trajectory)
    return ap


def _error(kind, exc, code, extra=None):
    body = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    if extra:
        body["diagnostics"] = extra
    sys.stdout.write(dumps(body))
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ValidationError as e:
        return _error("validation", e, 2)
    except DomainError as e:
        return _error("domain", e, 3)
    except ConvergenceFailure as e:
        return _error("convergence", e, 4, {k: repr(v) for k, v in e.diagnostics.items()})
    return 0


if __name__ == "__main__":
    sys.exit(main())
