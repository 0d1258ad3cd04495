"""Conjugate, Maxwell and cut times, the cut locus and the injectivity radius."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import brentq

from .errors import RegimeError, ValidationError
from .geodesics import TrigPair, covector_from_hbar, exp_map
from .hamiltonian import CausalClass, Covector, causal_class, hamiltonian_value
from .lie import KILLING, GroupPoint, MetricParams, Regime

INF = math.inf


def _fmt(x):
    return "inf" if x == INF else x


@dataclass(frozen=True)
class OptimalityReport:
    t_conj: float
    t_max: float
    t_cut: float
    cut_point: GroupPoint | None

    def to_dict(self) -> dict:
        return {
            "t_conj": _fmt(self.t_conj),
            "t_max": _fmt(self.t_max),
            "t_cut": _fmt(self.t_cut),
            "cut_point": None if self.cut_point is None else [self.cut_point.c, 0.0],
        }


def _is_light(params, h):
    return causal_class(params, h) is CausalClass.LIGHT_LIKE


def conj_function(params: MetricParams, hbar1: float, chi: int, tau):
    """``F(tau) = tau eta (chi + hbar1^2) c(tau) + (chi - eta hbar1^2) s(tau)``;
    its first positive root is the conjugate ``tau``."""
    eta = params.eta
    tp = TrigPair(chi)
    return tau * eta * (chi + hbar1 * hbar1) * tp.c(tau) + (chi - eta * hbar1 * hbar1) * tp.s(tau)


def conjugate_tau(params: MetricParams, h: Covector) -> float:
    """First conjugate ``tau`` (``inf`` when there is none)."""
    if h.norm == 0 or h.kil >= 0:
        return INF
    if params.regime is not Regime.OBLATE:
        return math.pi
    hbar1 = h.h1 / h.norm
    f = lambda tau: conj_function(params, hbar1, -1, tau)
    lo, hi = 0.5 * math.pi, math.pi
    if f(lo) >= 0:
        # light-like covector: 1 + eta hbar1^2 = 0 and the root sits at pi/2
        return lo
    if f(hi) <= 0:
        return hi
    return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def conjugate_time(params: MetricParams, h: Covector) -> float:
    tau = conjugate_tau(params, h)
    if tau == INF:
        return INF
    if tau == math.pi:
        return 2.0 * math.pi * params.I2 / h.norm
    return 2.0 * params.I2 * tau / h.norm


def maxwell_time(params: MetricParams, h: Covector) -> tuple[float, GroupPoint | None]:
    """First Maxwell time and point for the fiber-rotation symmetry."""
    if _is_light(params, h) or h.kil >= 0:
        return INF, None
    hbar1 = h.h1 / h.norm
    t = 2.0 * math.pi * params.I2 / h.norm
    return t, GroupPoint(math.pi - math.pi * params.eta * hbar1, 0j)


def cut_time(params: MetricParams, h: Covector) -> float:
    if params.regime is Regime.OBLATE:
        raise RegimeError("cut time undefined in oblate regime: there are no longest arcs")
    if _is_light(params, h) or h.kil >= 0:
        return INF
    return 2.0 * math.pi * params.I2 / h.norm


def optimality_report(params: MetricParams, h: Covector) -> OptimalityReport:
    t_cut = cut_time(params, h)
    t_conj = conjugate_time(params, h)
    t_max, point = maxwell_time(params, h)
    return OptimalityReport(t_conj, t_max, t_cut, point if t_cut < INF else None)


@dataclass(frozen=True)
class CutLocus:
    """``{(c, 0) : c_min <= c <= c_max}``; a single point in the symmetric case."""

    c_min: float
    c_max: float

    def contains(self, p: GroupPoint, tol: float = 1e-12) -> bool:
        scale = tol * (1.0 + abs(p.c))
        return p.abs_w <= scale and self.c_min - scale <= p.c <= self.c_max + scale

    def to_dict(self) -> dict:
        kind = "point" if self.c_min == self.c_max else "ray"
        return {"kind": kind, "c_min": self.c_min, "c_max": _fmt(self.c_max), "abs_w": 0.0}


def cut_locus(params: MetricParams) -> CutLocus:
    reg = params.regime
    if reg is Regime.OBLATE:
        raise RegimeError("cut locus undefined in oblate regime")
    if reg is Regime.SYMMETRIC:
        return CutLocus(math.pi, math.pi)
    return CutLocus(math.pi * (1.0 + params.eta), INF)


@dataclass(frozen=True)
class ObserverFrame:
    """Observer momentum ``p`` with ``H(p) = -1/2``, ``p1 < 0``."""

    params: MetricParams
    p: Covector

    def __post_init__(self):
        H = hamiltonian_value(self.params, self.p)
        if abs(H + 0.5) > 1e-9 or not self.p.h1 < 0:
            raise ValidationError(f"observer momentum needs H = -1/2 and p1 < 0, got H = {H!r}")

    def dual_form(self) -> np.ndarray:
        """Matrix of ``2H``, the Lorentzian form on the dual algebra."""
        P = self.params
        return np.diag([-1.0 / P.I1, 1.0 / P.I2, 1.0 / P.I3])

    def riemannian(self) -> np.ndarray:
        """``g_R(h) = -Q(h_p) + Q(h_W)`` with ``h_p`` the Q-projection on ``p``."""
        D = self.dual_form()
        Dp = D @ self.p.as_array()
        return D + 2.0 * np.outer(Dp, Dp)

    def norm(self, h) -> float:
        h = np.asarray(h, dtype=float)
        return math.sqrt(float(h @ self.riemannian() @ h))


def sup_norm_on_ball(frame: ObserverFrame) -> float:
    """``sup |h|`` over ``g_R(h) <= 1``, ``Kil(h) < 0``: root of the negative
    generalized eigenvalue of ``(Kil, g_R)``."""
    lam = eigh(KILLING, frame.riemannian(), eigvals_only=True)
    neg = lam[lam < 0]
    if len(neg) != 1:
        raise ValidationError(f"expected exactly one negative eigenvalue, got {lam}")
    return math.sqrt(-neg[0])


def injectivity_radius(params: MetricParams, frame: ObserverFrame) -> float:
    if params.regime is Regime.OBLATE:
        return 0.0
    return 2.0 * math.pi * params.I2 / sup_norm_on_ball(frame)


def exp_coordinates(params: MetricParams, hbar1: float, phi: float, t: float, chi: int = -1) -> np.ndarray:
    return exp_map(params, covector_from_hbar(params, hbar1, phi, chi), t).as_array()


def jacobian_det(params: MetricParams, hbar1: float, phi: float, t: float, chi: int = -1,
                 step: float = 1e-6) -> float:
    """Central finite-difference determinant of ``(hbar1, phi, t) -> (c, re w, im w)``."""
    x0 = np.array([hbar1, phi, t])
    J = np.empty((3, 3))
    for k in range(3):
        d = step * max(1.0, abs(x0[k]))
        xp, xm = x0.copy(), x0.copy()
        xp[k] += d
        xm[k] -= d
        J[:, k] = (exp_coordinates(params, *xp, chi=chi) - exp_coordinates(params, *xm, chi=chi)) / (2 * d)
    return float(np.linalg.det(J))


def jacobian_sign_change(params: MetricParams, hbar1: float, phi: float, t_lo: float, t_hi: float,
                         chi: int = -1):
    """Crossing time of a strict sign change of the finite-difference Jacobian
    determinant between ``t_lo`` and ``t_hi``, or ``None`` when the end values
    share a sign (a touching zero is not a sign change)."""
    f = lambda t: jacobian_det(params, hbar1, phi, t, chi)
    a, b = f(t_lo), f(t_hi)
    if not a * b < 0:
        return None
    return brentq(f, t_lo, t_hi, xtol=1e-13 * t_hi)
