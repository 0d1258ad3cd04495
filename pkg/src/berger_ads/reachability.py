"""Admissible velocities, attainable-set membership, the oblate controllability
planner and the symmetric infinite-distance witness."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import PlannerFailure, RegimeError, ValidationError
from .geodesics import light_like_boundary_c
from .lie import IDENTITY, GroupPoint, MetricParams, Regime, exp_point, group_inv, group_mult

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class AdmissibleVelocity:
    """Cone parameters of a tangent vector: the control is ``2 (xi, omega)``."""

    xi: float
    omega: complex
    interior: bool

    def control(self) -> np.ndarray:
        return 2.0 * np.array([self.xi, self.omega.real, self.omega.imag])


@dataclass(frozen=True)
class ReachVerdict:
    in_attainable: bool
    on_boundary: bool
    longest_arc_exists: bool
    infinite_distance: bool

    def to_dict(self) -> dict:
        return {
            "attainable": self.in_attainable,
            "boundary": self.on_boundary,
            "exists": self.longest_arc_exists,
            "infinite": self.infinite_distance,
        }


def cone_parameters(base: GroupPoint, v) -> tuple[float, complex]:
    """``(xi, omega)`` of the velocity ``v = (cdot, wdot)`` at ``base``: the
    left-trivialized velocity is ``2 (xi e1 + re omega e2 + im omega e3)``."""
    cdot, wdot = float(v[0]), complex(v[1])
    c0, w0 = base.c, complex(base.w)
    R = math.sqrt(1.0 + abs(w0) ** 2)
    xi = cdot * R * R - (w0 * wdot.conjugate()).imag
    omega = (wdot + 1j * w0 * xi) * cmath.exp(-1j * c0) / R
    return xi, omega


def admissible_cone_contains(params: MetricParams, base: GroupPoint, v, tol: float = BOUNDARY_TOL):
    """Whether ``v`` lies in the closed future cone at ``base``; returns
    ``(bool, AdmissibleVelocity)``."""
    xi, omega = cone_parameters(base, v)
    bound = math.sqrt(params.eta + 1.0) * abs(omega)
    scale = tol * (abs(xi) + bound)
    ok = xi > 0 and xi >= bound - scale
    return ok, AdmissibleVelocity(xi, omega, xi > bound + scale)


def cone_length(params: MetricParams, av: AdmissibleVelocity) -> float:
    """``sqrt(I1 xi^2 - I2 |omega|^2)``; the length element of the control is twice this."""
    return math.sqrt(max(params.I1 * av.xi**2 - params.I2 * abs(av.omega) ** 2, 0.0))


def control_length(params: MetricParams, u) -> float:
    """Lorentzian speed of a constant control ``u`` in algebra coordinates."""
    u1, u2, u3 = u
    return math.sqrt(max(params.I1 * u1 * u1 - params.I2 * u2 * u2 - params.I3 * u3 * u3, 0.0))


def control_admissible(params: MetricParams, u, tol: float = 1e-12) -> bool:
    u1, u2, u3 = u
    q = params.I1 * u1 * u1 - params.I2 * u2 * u2 - params.I3 * u3 * u3
    return u1 > 0 and q >= -tol * params.I1 * u1 * u1


def attainable_contains(params: MetricParams, p: GroupPoint) -> ReachVerdict:
    """Membership in the attainable set from the identity and longest-arc
    existence; depends on ``p`` only through ``(c, |w|)``."""
    reg = params.regime
    c, r = p.c, p.abs_w
    if reg is Regime.OBLATE:
        return ReachVerdict(True, False, False, False)
    tol = BOUNDARY_TOL * (1.0 + abs(c) + r)
    lower = light_like_boundary_c(params, r)
    inside = c >= lower - tol
    boundary = abs(c - lower) <= tol
    if not inside:
        return ReachVerdict(False, False, False, False)
    if reg is Regime.PROLATE:
        return ReachVerdict(True, boundary, True, False)
    upper = math.pi - math.atan(r)
    cut_point = abs(c - math.pi) <= tol and r <= tol
    exists = c < upper - tol or cut_point
    infinite = c > upper + tol
    return ReachVerdict(True, boundary, exists, infinite)


def sample_admissible_trajectory(params: MetricParams, seed: int, steps: int, step_duration: float,
                                 boundary_fraction: float = 0.3):
    """Trajectory of piecewise-constant controls drawn from the closed cone.

    Returns ``(points, controls)`` with ``points[0]`` the identity.
    """
    if steps < 0 or step_duration < 0:
        raise ValidationError("steps and step_duration must be >= 0")
    rng = np.random.default_rng(seed)
    g = IDENTITY
    points, controls = [g], []
    for _ in range(steps):
        u1 = rng.uniform(0.2, 2.0)
        rho = 1.0 if rng.random() < boundary_fraction else rng.random()
        th = rng.uniform(0.0, 2.0 * math.pi)
        a = rho * u1 * math.sqrt(params.I1 / params.I2)
        u = np.array([u1, a * math.cos(th), a * math.sin(th)])
        g = group_mult(g, exp_point(step_duration * u))
        points.append(g)
        controls.append(u)
    return points, controls


# --- oblate planner ---------------------------------------------------------


@dataclass(frozen=True)
class PlanStep:
    u: tuple
    dt: float

    def to_dict(self) -> dict:
        return {"u": list(self.u), "dt": self.dt}


def plan_endpoint(plan) -> GroupPoint:
    g = IDENTITY
    for step in plan:
        g = group_mult(g, exp_point(np.asarray(step.u) * step.dt))
    return g


class _Oblate:
    """Closed-form light-like arcs for ``eta < 0``.

    The control ``(sqrt(1+eta), cos th, sin th)/sqrt(-eta)`` has Killing value
    1, so its arc of duration ``t`` ends at
    ``(arctan(k f(s)), s e^{i th}/sqrt(-eta))`` with ``s = sinh(t/2)``,
    ``k = sqrt(1+eta)/sqrt(-eta)`` and ``f(s) = s/sqrt(1+s^2)``.
    """

    def __init__(self, params: MetricParams):
        self.eta = params.eta
        self.m = math.sqrt(-self.eta)
        self.k = math.sqrt(1.0 + self.eta) / self.m

    def control(self, theta):
        return (self.k, math.cos(theta) / self.m, math.sin(theta) / self.m)

    def arc_for_radius(self, r, theta):
        """Light-like step whose own ``|w|`` is ``r``."""
        s = r * self.m
        return PlanStep(self.control(theta), 2.0 * math.asinh(s))

    def c_of_radius(self, r):
        s = r * self.m
        return math.atan(self.k * s / math.sqrt(1.0 + s * s))


def _f(r):
    return r / math.sqrt(1.0 + r * r)


def oblate_reach_plan(params: MetricParams, target: GroupPoint, tol: float = 1e-6,
                      max_steps: int = 200000, w_cap: float = 1e4):
    """Finite sequence of constant controls steering the identity to ``target``
    for ``eta < 0``.

    Light-like arcs chosen perpendicular to ``w`` lower ``c`` once
    ``|w| > sqrt((1+eta)/(-eta))``; a final pair of arcs cancels ``w`` and
    lays down the target's ``w``, and ``e1`` arcs make up any excess in ``c``.
    """
    if params.regime is not Regime.OBLATE:
        raise RegimeError("the controllability planner needs eta < 0")
    if target.n != 1:
        raise ValidationError("the planner works with n = 1 targets")
    ob = _Oblate(params)
    c_t, w_t = target.c, complex(target.w)
    r_t = abs(w_t)

    c_last = ob.c_of_radius(r_t) if r_t > 0 else 0.0
    c_b = c_t - c_last
    plan = []
    if c_b >= 0:
        if c_b > 0:
            plan.append(PlanStep((1.0, 0.0, 0.0), 2.0 * c_b))
    else:
        plan.extend(_descend(ob, c_b, max_steps, w_cap))
    if r_t > 0:
        plan.append(ob.arc_for_radius(r_t, cmath.phase(w_t) - c_b))

    end = plan_endpoint(plan)
    err = end.distance(target)
    if err > tol:
        raise PlannerFailure("plan endpoint misses the target", error=err, steps=len(plan))
    return plan


def _descend(ob: _Oblate, c_b: float, max_steps: int, w_cap: float):
    """Arcs from the identity to ``(c_b, 0)`` with ``c_b < 0``."""
    # start beyond the threshold where perpendicular arcs lower c
    f2 = 1.0 + 0.5 * ob.eta
    r0 = math.sqrt(f2 / (1.0 - f2))
    plan = [ob.arc_for_radius(r0, 0.0)]
    g = exp_point(np.asarray(plan[0].u) * plan[0].dt)
    ss = np.geomspace(1e-3, 2.0, 60)
    for _ in range(max_steps):
        c0, w0 = g.c, complex(g.w)
        r0 = abs(w0)
        if c0 + ob.c_of_radius(r0) <= c_b:
            break
        if r0 > w_cap:
            raise PlannerFailure("|w| grew past the cap during descent", c=c0, abs_w=r0)
        # best step by decrease in c per growth of log|w|
        fr = _f(r0)
        ru = ss / ob.m
        cu = np.arctan(ob.k * ss / np.sqrt(1.0 + ss * ss))
        dc = cu - np.arctan(fr * ru / np.sqrt(1.0 + ru * ru))
        r_new = np.sqrt(ru * ru * (1.0 + r0 * r0) + r0 * r0 * (1.0 + ru * ru))
        cost = np.log(r_new / r0) + 4e-3 * ob.m * ob.m
        i = int(np.argmin(dc / cost))
        if dc[i] >= 0:
            raise PlannerFailure("no descending light-like step", c=c0, abs_w=r0)
        theta = cmath.phase(w0) - (c0 + cu[i]) + 0.5 * math.pi
        step = PlanStep(ob.control(theta), 2.0 * math.asinh(ss[i]))
        plan.append(step)
        g = group_mult(g, exp_point(np.asarray(step.u) * step.dt))
    else:
        raise PlannerFailure("descent did not finish within the step cap", c=g.c, abs_w=g.abs_w)
    # cancel w exactly: equal radius, opposite phase
    c0, w0 = g.c, complex(g.w)
    r0 = abs(w0)
    cu = ob.c_of_radius(r0)
    theta = cmath.phase(-w0) - (c0 + cu)
    step = ob.arc_for_radius(r0, theta)
    plan.append(step)
    g = group_mult(g, exp_point(np.asarray(step.u) * step.dt))
    rest = c_b - g.c
    if rest > 0:
        plan.append(PlanStep((1.0, 0.0, 0.0), 2.0 * rest))
    return plan


# --- symmetric infinite-distance witness -------------------------------------


@dataclass(frozen=True)
class FiberSegment:
    """The curve ``c -> (c, w0)`` for ``c`` in ``[c_start, c_end]``."""

    c_start: float
    c_end: float
    w0: complex

    def at(self, s: float) -> GroupPoint:
        return GroupPoint(self.c_start + s * (self.c_end - self.c_start), self.w0)

    def velocity(self):
        return (self.c_end - self.c_start, 0j)

    def length(self, params: MetricParams) -> float:
        r2 = 1.0 + abs(self.w0) ** 2
        return 2.0 * math.sqrt(params.I1 * r2) * (self.c_end - self.c_start)


@dataclass(frozen=True)
class ControlSegment:
    """Constant control ``u`` for ``dt`` starting at ``start``."""

    start: GroupPoint
    u: tuple
    dt: float

    def at(self, s: float) -> GroupPoint:
        return group_mult(self.start, exp_point(np.asarray(self.u) * (s * self.dt)))

    def length(self, params: MetricParams) -> float:
        return control_length(params, self.u) * self.dt


@dataclass(frozen=True)
class InfiniteWitness:
    segments: tuple
    length: float

    def endpoint(self) -> GroupPoint:
        return self.segments[-1].at(1.0)


def _null_control(w: complex, params: MetricParams):
    """Constant light-like control whose arc from the identity ends at
    ``(arctan|w|, w)`` (symmetric case): ``x = 2|w| (1, cos, sin)``."""
    r = abs(w)
    scale = math.sqrt(params.I1 / params.I2)
    return (1.0, scale * w.real / r, scale * w.imag / r), 2.0 * r


def infinite_distance_witness(params: MetricParams, target: GroupPoint, M: float,
                              psi_grid: int = 64):
    """Admissible curve from the identity to ``target`` of length ``> M``.

    Light-like arc to ``(arctan R, R e^{i psi})``, a time-like fiber segment
    of length ``2 sqrt(I1 (1+R^2)) (c1 - arctan R)`` and a light-like arc to
    the target.  ``c1`` is the root making the last leg null; ``R`` grows
    until the length exceeds ``M``.
    """
    if params.regime is not Regime.SYMMETRIC:
        raise RegimeError("the infinite-distance witness is for the symmetric case")
    if not attainable_contains(params, target).infinite_distance:
        raise ValidationError("target is not in the infinite-distance region")

    def gap(c1, w0):
        d = group_mult(group_inv(GroupPoint(c1, w0)), target)
        return d.c - math.atan(d.abs_w)

    R = 1.0
    for _ in range(200):
        best = None
        for psi in np.linspace(0.0, 2.0 * math.pi, psi_grid, endpoint=False):
            w0 = R * cmath.exp(1j * psi)
            lo = math.atan(R)
            if gap(lo, w0) <= 0:
                continue
            # gap decreases as c1 rises; find where the last leg becomes null
            hi = lo + 1e-3
            while gap(hi, w0) > 0 and hi < lo + 8 * math.pi:
                hi = lo + 2 * (hi - lo)
            if gap(hi, w0) > 0:
                continue
            c1 = brentq(lambda c: gap(c, w0), lo, hi, xtol=1e-15)
            seg = FiberSegment(lo, c1, w0)
            L = seg.length(params)
            if best is None or L > best[0]:
                best = (L, w0, c1)
        if best is not None and best[0] > M:
            L, w0, c1 = best
            u1, dt1 = _null_control(w0, params)
            first = ControlSegment(IDENTITY, u1, dt1)
            fiber = FiberSegment(math.atan(abs(w0)), c1, w0)
            q = GroupPoint(c1, w0)
            d = group_mult(group_inv(q), target)
            u3, dt3 = _null_control(complex(d.w), params)
            last = ControlSegment(q, u3, dt3)
            return InfiniteWitness((first, fiber, last), L)
        R *= 1.5
    raise PlannerFailure("no witness found", M=M)
