"""Closed-form Lorentzian exponential map, light-like boundary and the
fiber-rotation symmetry; reduction of the n-dimensional case to n = 1."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotAdmissible, RegimeError, ValidationError
from .hamiltonian import (
    CAUSAL_TOL,
    CausalClass,
    Covector,
    causal_class,
    hamiltonian_value,
)
from .lie import GroupPoint, MetricParams, Regime, group_exp

ADMISSIBLE_TOL = 1e-9


@dataclass(frozen=True)
class TrigPair:
    """``c(tau), s(tau)``: cos/sin for ``chi = -1``, cosh/sinh for ``chi = +1``.

    ``chi = 0`` gives the degenerate pair ``(1, tau)``.
    """

    chi: int

    def c(self, tau):
        if self.chi < 0:
            return np.cos(tau)
        if self.chi > 0:
            return np.cosh(tau)
        return np.ones_like(np.asarray(tau, dtype=float))

    def s(self, tau):
        if self.chi < 0:
            return np.sin(tau)
        if self.chi > 0:
            return np.sinh(tau)
        return np.asarray(tau, dtype=float)


def _check_admissible(params: MetricParams, h: Covector):
    if not params.axisymmetric:
        raise ValidationError("the exponential map needs I2 == I3")
    if not h.h1 < 0:
        raise NotAdmissible(f"covector must be future directed (h1 < 0), got h1 = {h.h1!r}")
    H = hamiltonian_value(params, h)
    if H > ADMISSIBLE_TOL * (1.0 + h.h1**2 / params.I1):
        raise NotAdmissible(f"covector is space-like (H = {H!r} > 0)")


def exp_map(params: MetricParams, h: Covector, t: float) -> GroupPoint:
    """Endpoint at time ``t`` of the extremal with initial covector ``h``.

    The extremal is ``exp(t/I2 (-h1, h2, h3)) exp(-t eta h1/I2 e1)``.  The
    first factor is the three-branch group exponential with its exact
    unwrapped fiber angle; the second factor only shifts ``c`` and rotates
    ``w``, so ``c`` is continuous in ``t`` with no sampling.
    """
    _check_admissible(params, h)
    if t < 0:
        raise ValidationError("t must be >= 0")
    k = t / params.I2
    _, p = group_exp(params, (-k * h.h1, k * h.h2, k * h.h3))
    half_s = -0.5 * k * params.eta * h.h1
    return GroupPoint(p.c + half_s, p.w * cmath.exp(-1j * half_s))


def exp_map_nd(params: MetricParams, h1: float, hperp, t: float) -> GroupPoint:
    """Exponential map for ``n >= 1`` with momentum ``(h1, hperp)``,
    ``hperp`` a complex n-vector.

    A unitary sending the first axis to ``hperp/|hperp|`` carries the planar
    geodesic with momentum ``(h1, |hperp|, 0)`` to this one.
    """
    hperp = np.atleast_1d(np.asarray(hperp, dtype=complex))
    r = float(np.linalg.norm(hperp))
    p = exp_map(params, Covector(h1, r, 0.0), t)
    if r == 0:
        w = np.zeros_like(hperp)
    else:
        w = p.w * hperp / r
    return GroupPoint(p.c, w if len(w) > 1 else complex(w[0]))


def covector_from_hbar(params: MetricParams, hbar1: float, phi: float = 0.0, chi: int = -1) -> Covector:
    """Time-like covector on ``H = -1/2`` with normalized first coordinate
    ``hbar1`` and ``(h2, h3)`` at angle ``phi``.

    ``chi = -1``: ``|h|^2 = I2/(1 + eta hbar1^2)``, ``hbar_perp^2 = hbar1^2 - 1``.
    ``chi = +1`` (prolate only): ``|h|^2 = I2/(eta hbar1^2 - 1)``,
    ``hbar_perp^2 = hbar1^2 + 1``.
    """
    eta = params.eta
    if chi == -1:
        den = 1.0 + eta * hbar1 * hbar1
        perp2 = hbar1 * hbar1 - 1.0
    elif chi == 1:
        den = eta * hbar1 * hbar1 - 1.0
        perp2 = hbar1 * hbar1 + 1.0
    else:
        raise ValidationError("chi must be -1 or +1")
    if not hbar1 < 0 or den <= 0 or perp2 < -1e-15:
        raise ValidationError(f"hbar1 = {hbar1!r} outside the range for chi = {chi}, eta = {eta!r}")
    norm = math.sqrt(params.I2 / den)
    perp = norm * math.sqrt(max(perp2, 0.0))
    return Covector(norm * hbar1, perp * math.cos(phi), perp * math.sin(phi))


def hbar1_range(params: MetricParams, chi: int = -1) -> tuple[float, float]:
    """Open/closed range ``(lo, hi]`` of admissible ``hbar1`` for a branch."""
    eta = params.eta
    if chi == -1:
        lo = -1.0 / math.sqrt(-eta) if eta < 0 else -math.inf
        return lo, -1.0
    if eta <= 0:
        raise RegimeError("the chi = +1 time-like branch exists only for eta > 0")
    return -math.inf, -1.0 / math.sqrt(eta)


def kil_zero_covector(params: MetricParams, phi: float = 0.0) -> Covector:
    """Time-like covector with ``Kil = 0`` (prolate only)."""
    eta = params.eta
    if eta <= 0:
        raise RegimeError("time-like covectors with Kil = 0 exist only for eta > 0")
    a = math.sqrt(params.I2 / eta)
    return Covector(-a, a * math.cos(phi), a * math.sin(phi))


def lightlike_covector(params: MetricParams, phi: float = 0.0) -> Covector:
    """Null covector (``H = 0``) normalized by ``|h1| = 1``."""
    r = math.sqrt(params.I2 / params.I1)
    return Covector(-1.0, r * math.cos(phi), r * math.sin(phi))


def axis_covector(params: MetricParams) -> Covector:
    return Covector(-math.sqrt(params.I1), 0.0, 0.0)


def tau_of(params: MetricParams, h: Covector, t):
    return np.asarray(t) * h.norm / (2.0 * params.I2)


def light_like_boundary_c(params: MetricParams, wmag: float) -> float:
    """Fiber coordinate of the light-like boundary of the attainable set over
    ``|w| = wmag`` (``eta >= 0``)."""
    if wmag < 0:
        raise ValidationError("wmag must be >= 0")
    reg = params.regime
    if reg is Regime.OBLATE:
        raise RegimeError("the attainable set has no boundary for eta < 0")
    if reg is Regime.SYMMETRIC:
        return math.atan(wmag)
    eta = params.eta
    tau = math.asinh(wmag * math.sqrt(eta) / math.sqrt(eta + 1.0))
    return tau * math.sqrt(eta) + math.atan(math.tanh(tau) / math.sqrt(eta))


def maxwell_partner(params: MetricParams, h: Covector, phi: float) -> Covector:
    """Rotation of ``(h2, h3)`` by ``phi``; its geodesic is the fiber rotation
    of the geodesic of ``h``."""
    ca, sa = math.cos(phi), math.sin(phi)
    return Covector(h.h1, ca * h.h2 - sa * h.h3, sa * h.h2 + ca * h.h3)


@dataclass(frozen=True)
class GeodesicArc:
    params: MetricParams
    h: Covector
    t1: float

    def __post_init__(self):
        _check_admissible(self.params, self.h)
        if not self.t1 > 0:
            raise ValidationError("t1 must be positive")

    @property
    def causal(self) -> CausalClass:
        return causal_class(self.params, self.h)

    @property
    def length(self) -> float:
        if self.causal is CausalClass.LIGHT_LIKE:
            return 0.0
        return self.t1

    def tau(self, t):
        return tau_of(self.params, self.h, t)

    def at(self, t: float) -> GroupPoint:
        if t < 0 or t > self.t1 * (1 + 1e-15):
            raise ValidationError(f"t = {t!r} outside [0, {self.t1!r}]")
        return exp_map(self.params, self.h, t)

    def endpoint(self) -> GroupPoint:
        return exp_map(self.params, self.h, self.t1)


def geodesic_samples(params: MetricParams, h: Covector, t_max: float, samples: int, hperp=None):
    """Rows ``{t, tau, c, re_w, im_w}`` on a uniform grid of ``[0, t_max]``.

    With ``hperp`` (complex n-vector) the n-dimensional map is used and
    ``re_w``/``im_w`` are lists.
    """
    if samples < 1:
        raise ValidationError("samples must be >= 1")
    ts = np.linspace(0.0, t_max, samples) if samples > 1 else np.array([t_max])
    rows = []
    for t in ts:
        if hperp is None:
            p = exp_map(params, h, float(t))
        else:
            p = exp_map_nd(params, h.h1, hperp, float(t))
        w = p.wvec()
        rows.append({
            "t": float(t),
            "tau": float(tau_of(params, h if hperp is None else
                                Covector(h.h1, float(np.linalg.norm(hperp)), 0.0), t)),
            "c": p.c,
            "re_w": [float(z.real) for z in w],
            "im_w": [float(z.imag) for z in w],
        })
    return rows


def is_null(h: Covector) -> bool:
    return abs(h.kil) <= CAUSAL_TOL * (1.0 + h.h1**2 + h.h2**2 + h.h3**2)
