"""Inverse exponential map, Lorentzian distance and wavefronts."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceFailure, OutsideDomain, RegimeError
from .geodesics import covector_from_hbar, exp_map, hbar1_range, kil_zero_covector
from .hamiltonian import Covector
from .lie import GroupPoint, MetricParams, Regime
from .optimality import cut_locus, cut_time
from .reachability import attainable_contains

RESIDUAL_TOL = 1e-9
TAU_EPS = 1e-12
TAU_OVERFLOW = 700.0


@dataclass(frozen=True)
class ShootingResult:
    h: Covector
    t: float
    residual: float
    iterations: int
    chi: int = -1
    tau: float = float("nan")


class DistanceKind(str, Enum):
    FINITE = "finite"
    ZERO = "zero"
    INFINITE = "infinite"
    UNREACHABLE = "unreachable"
    NO_LONGEST_ARC = "no-longest-arc"


@dataclass(frozen=True)
class DistanceAnswer:
    kind: DistanceKind
    value: float | None = None
    multi_geodesic: bool = False
    shooting: ShootingResult | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        v = self.value
        if v is not None and math.isinf(v):
            v = "inf"
        return {"kind": self.kind.value, "value": v, "multi_geodesic": self.multi_geodesic}


# --- one-dimensional reduction ----------------------------------------------


def _hbar1_of_tau(r, tau, chi):
    if chi < 0:
        return -math.sqrt(1.0 + (r / math.sin(tau)) ** 2)
    return -math.sqrt((r / math.sinh(tau)) ** 2 - 1.0)


def c_of_tau(params: MetricParams, r: float, tau: float, chi: int) -> float:
    """Fiber coordinate of the geodesic reaching ``|w| = r`` at parameter ``tau``."""
    eta = params.eta
    if chi < 0:
        s = math.sin(tau)
        return math.atan2(math.sqrt(s * s + r * r), math.cos(tau)) + eta * tau * math.sqrt(1.0 + (r / s) ** 2)
    s = math.sinh(tau)
    return (math.atan2(math.sqrt(max(r * r - s * s, 0.0)), math.cosh(tau))
            + eta * tau * math.sqrt(max((r / s) ** 2 - 1.0, 0.0)))


def kil_zero_surface(params: MetricParams, r: float) -> float:
    """``c`` swept by time-like geodesics with ``Kil(h) = 0``: ``arctan r + eta r``."""
    return math.atan(r) + params.eta * r


def tau_light(params: MetricParams, r: float) -> float:
    eta = params.eta
    return math.asinh(r * math.sqrt(eta) / math.sqrt(eta + 1.0))


def _in_domain(params: MetricParams, p: GroupPoint) -> None:
    if params.regime is Regime.OBLATE:
        raise RegimeError("the exponential map is not a diffeomorphism onto a domain for eta < 0")
    v = attainable_contains(params, p)
    if not v.in_attainable or v.on_boundary:
        raise OutsideDomain("target is not in the interior of the attainable set")
    if cut_locus(params).contains(p, tol=1e-12):
        raise OutsideDomain("target lies on the cut locus")
    if params.regime is Regime.SYMMETRIC and not v.longest_arc_exists:
        raise OutsideDomain("target is beyond the region of existence of longest arcs")


def _result(params, target, h, t, iters, chi, tau):
    res = exp_map(params, h, t).distance(target)
    if res > RESIDUAL_TOL * (1.0 + target.abs_w + abs(target.c)):
        raise ConvergenceFailure("shooting residual above tolerance", residual=res, h=h.to_dict(), t=t)
    return ShootingResult(h, t, res, iters, chi, tau)


def inverse_exp(params: MetricParams, target: GroupPoint) -> ShootingResult:
    """The unique ``(h, t)`` with ``t`` below the cut time and ``exp_map(h, t) = target``."""
    _in_domain(params, target)
    c, r = target.c, target.abs_w
    I2 = params.I2
    if r == 0:
        h = Covector(-math.sqrt(params.I1), 0.0, 0.0)
        return _result(params, target, h, 2.0 * c * math.sqrt(params.I1), 0, -1, c / (1.0 + params.eta))

    arg_w = cmath.phase(complex(target.w))
    eta = params.eta
    c0 = kil_zero_surface(params, r)
    if eta > 0 and abs(c - c0) <= 1e-13 * (1.0 + abs(c)):
        h = kil_zero_covector(params, arg_w + eta * r)
        return _result(params, target, h, 2.0 * r * math.sqrt(I2 * eta), 0, 0, 0.0)

    chi = -1 if (eta == 0 or c > c0) else 1
    if chi < 0:
        lo, hi = TAU_EPS, math.pi - TAU_EPS
    else:
        lo, hi = TAU_EPS, tau_light(params, r) * (1.0 - 1e-15)
    f = lambda tau: c_of_tau(params, r, tau, chi) - c
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise ConvergenceFailure("no bracket for the shooting parameter", c=c, abs_w=r, chi=chi,
                                 f_lo=flo, f_hi=fhi)
    tau, info = brentq(f, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500, full_output=True)
    hbar1 = _hbar1_of_tau(r, tau, chi)
    phi = arg_w - tau * eta * hbar1
    h = covector_from_hbar(params, hbar1, phi, chi)
    t = 2.0 * I2 * tau / h.norm
    return _result(params, target, h, t, info.iterations, chi, tau)


# --- two-dimensional multi-start (uniqueness witness) -----------------------


def _decode(params, a, b, chi):
    if chi < 0:
        return -math.cosh(a), math.pi / (1.0 + math.exp(-b))
    return -math.cosh(a) / math.sqrt(params.eta), math.exp(b)


def _axial(params, a, b, chi):
    hbar1, tau = _decode(params, a, b, chi)
    h = covector_from_hbar(params, hbar1, 0.0, chi)
    t = 2.0 * params.I2 * tau / h.norm
    p = exp_map(params, h, t)
    return np.array([p.c, p.abs_w]), hbar1, tau, t


def _newton(params, target_cr, x0, chi, max_iter=100, tol=1e-13):
    x = np.array(x0, dtype=float)

    def F(z):
        return _axial(params, z[0], z[1], chi)[0] - target_cr

    fx = F(x)
    for it in range(max_iter):
        nf = float(np.linalg.norm(fx))
        if nf <= tol * (1.0 + np.abs(target_cr).max()):
            return x, it, nf
        J = np.empty((2, 2))
        for k in range(2):
            d = 1e-7 * max(1.0, abs(x[k]))
            e = np.zeros(2)
            e[k] = d
            J[:, k] = (F(x + e) - F(x - e)) / (2 * d)
        try:
            step = np.linalg.solve(J, -fx)
        except np.linalg.LinAlgError:
            return x, it, nf
        lam = 1.0
        while lam > 1e-8:
            xn = x + lam * step
            try:
                fn = F(xn)
            except Exception:
                fn = None
            if fn is not None and np.all(np.isfinite(fn)) and np.linalg.norm(fn) < nf:
                x, fx = xn, fn
                break
            lam *= 0.5
        else:
            return x, it, nf
    return x, max_iter, float(np.linalg.norm(fx))


def multistart(params: MetricParams, target: GroupPoint, starts: int = 16, seed: int = 0):
    """Damped Newton on the ``(c, |w|)`` equations from ``starts`` initial
    points spread over both branches.

    Returns ``(solutions, failures)``; each solution is ``(h, t)``.
    """
    _in_domain(params, target)
    rng = np.random.default_rng(seed)
    tc = np.array([target.c, target.abs_w])
    arg_w = cmath.phase(complex(target.w)) if target.abs_w > 0 else 0.0
    branches = [-1, 1] if params.regime is Regime.PROLATE else [-1]
    sols, failures = [], 0
    for k in range(starts):
        chi = branches[k % len(branches)]
        if chi < 0:
            a_max = math.acosh(1.0 / math.sqrt(-params.eta)) if params.eta < 0 else 3.0
            x0 = (rng.uniform(0.05, a_max), rng.uniform(-3.0, 3.0))
        else:
            x0 = (rng.uniform(0.05, 3.0), rng.uniform(-4.0, 1.5))
        try:
            x, _, nf = _newton(params, tc, x0, chi)
        except Exception:
            failures += 1
            continue
        if not nf <= 1e-10 * (1.0 + np.abs(tc).max()):
            failures += 1
            continue
        hbar1, tau = _decode(params, x[0], x[1], chi)
        h = covector_from_hbar(params, hbar1, arg_w - tau * params.eta * hbar1, chi)
        t = 2.0 * params.I2 * tau / h.norm
        if target.abs_w == 0 or t > cut_time(params, h) * (1 + 1e-9):
            failures += 1
            continue
        sols.append((h, t))
    return sols, failures


def cluster_diameter(solutions) -> float:
    pts = np.array([[h.h1, h.h2, h.h3, t] for h, t in solutions])
    if len(pts) < 2:
        return 0.0
    d = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((d**2).sum(-1)).max())


# --- distance ---------------------------------------------------------------


def _cut_distance(params: MetricParams, c: float) -> float:
    if params.regime is Regime.SYMMETRIC:
        return 2.0 * math.pi * math.sqrt(params.I2)
    hbar1 = (math.pi - c) / (math.pi * params.eta)
    return 2.0 * math.pi * math.sqrt(params.I2) * math.sqrt(1.0 + params.eta * hbar1 * hbar1)


def lorentz_distance(params: MetricParams, target: GroupPoint) -> DistanceAnswer:
    """Lorentzian distance from the identity with its case classification."""
    v = attainable_contains(params, target)
    if not v.in_attainable:
        return DistanceAnswer(DistanceKind.UNREACHABLE)
    if params.regime is Regime.OBLATE:
        return DistanceAnswer(DistanceKind.NO_LONGEST_ARC)
    if v.on_boundary:
        return DistanceAnswer(DistanceKind.ZERO, 0.0)
    if v.infinite_distance:
        return DistanceAnswer(DistanceKind.INFINITE, math.inf)
    if cut_locus(params).contains(target, tol=1e-12):
        return DistanceAnswer(DistanceKind.FINITE, _cut_distance(params, target.c), multi_geodesic=True)
    if not v.longest_arc_exists:
        return DistanceAnswer(DistanceKind.NO_LONGEST_ARC)
    sr = inverse_exp(params, target)
    return DistanceAnswer(DistanceKind.FINITE, sr.t, shooting=sr)


# --- wavefronts -------------------------------------------------------------


def wavefront(params: MetricParams, t: float, samples: int, a_max: float = 3.0):
    """Axial section of the wavefront at time ``t``.

    Covectors are sampled as ``hbar1 = -cosh(a)`` (``chi = -1``) and
    ``hbar1 = -cosh(a)/sqrt(eta)`` (``chi = +1``, prolate only) on uniform
    grids of ``a``, with ``phi = 0``.  Each record holds ``hbar1, chi, t, c,
    abs_w`` and ``w_signed``, the radius signed by ``s(tau)`` so that
    passing through the axis shows up as a sign change.  Hyperbolic records
    with ``tau`` beyond ``TAU_OVERFLOW`` would overflow and are omitted.
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    rows = []
    branches = [-1]
    if params.regime is Regime.PROLATE:
        branches.append(1)
    for chi in branches:
        lo, hi = hbar1_range(params, chi)
        if chi < 0:
            top = math.acosh(1.0 / math.sqrt(-params.eta)) * (1 - 1e-9) if params.eta < 0 else a_max
            grid = np.linspace(0.0, top, samples)
        else:
            grid = np.linspace(a_max / samples, a_max, samples)
        for a in grid:
            hbar1 = -math.cosh(a) if chi < 0 else -math.cosh(a) / math.sqrt(params.eta)
            h = covector_from_hbar(params, hbar1, 0.0, chi)
            tau = t * h.norm / (2.0 * params.I2)
            if chi > 0 and tau > TAU_OVERFLOW:
                continue
            p = exp_map(params, h, t)
            sgn = math.sin(tau) if chi < 0 else 1.0
            rows.append({"hbar1": hbar1, "chi": chi, "t": t, "c": p.c, "abs_w": p.abs_w,
                         "w_signed": math.copysign(p.abs_w, sgn) if sgn != 0 else 0.0})
    if params.regime is Regime.PROLATE:
        p = exp_map(params, kil_zero_covector(params), t)
        rows.append({"hbar1": -math.inf, "chi": 0, "t": t, "c": p.c, "abs_w": p.abs_w, "w_signed": p.abs_w})
    return rows


def axis_crossings(rows):
    """``c`` values where consecutive time-like records of the same branch change
    the sign of ``sin tau``: two geodesics (``phi`` and ``phi + pi``) meet on
    the axis there."""
    out = []
    branch = [r for r in rows if r["chi"] == -1]
    for r0, r1 in zip(branch[:-1], branch[1:]):
        s0 = math.copysign(1.0, r0["w_signed"]) if r0["w_signed"] != 0 else 0.0
        s1 = math.copysign(1.0, r1["w_signed"]) if r1["w_signed"] != 0 else 0.0
        if s0 * s1 < 0:
            # linear interpolation of c at the zero of w_signed
            a, b = r0["w_signed"], r1["w_signed"]
            lam = a / (a - b)
            out.append(r0["c"] + lam * (r1["c"] - r0["c"]))
    return out
