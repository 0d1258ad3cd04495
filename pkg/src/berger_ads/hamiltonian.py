"""Covectors, the maximized Hamiltonian, the vertical subsystem and the
numerical oracle integrator of the full Hamiltonian system."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .errors import NotTimeLike, ValidationError
from .lie import GroupPoint, MetricParams

CAUSAL_TOL = 1e-10


class CausalClass(str, Enum):
    TIME_LIKE = "time-like"
    LIGHT_LIKE = "light-like"
    SPACE_LIKE_MOMENTUM = "space-like-momentum"


@dataclass(frozen=True)
class Covector:
    h1: float
    h2: float
    h3: float = 0.0

    def __post_init__(self):
        for name in ("h1", "h2", "h3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite")
            object.__setattr__(self, name, v)

    @property
    def kil(self) -> float:
        return -self.h1 * self.h1 + self.h2 * self.h2 + self.h3 * self.h3

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.kil))

    @property
    def chi(self) -> int:
        """Sign of the Killing form, 0 within the classification tolerance."""
        k = self.kil
        if abs(k) <= CAUSAL_TOL * (1.0 + self.h1**2 + self.h2**2 + self.h3**2):
            return 0
        return 1 if k > 0 else -1

    @property
    def hbar(self) -> np.ndarray:
        n = self.norm
        if n == 0:
            raise ValidationError("normalized coordinates undefined for |h| = 0")
        return self.as_array() / n

    @property
    def hperp(self) -> float:
        return math.hypot(self.h2, self.h3)

    def as_array(self) -> np.ndarray:
        return np.array([self.h1, self.h2, self.h3])

    def scaled(self, k: float) -> "Covector":
        return Covector(k * self.h1, k * self.h2, k * self.h3)

    def to_dict(self) -> dict:
        return {"h1": self.h1, "h2": self.h2, "h3": self.h3}

    @classmethod
    def from_dict(cls, d: dict) -> "Covector":
        return cls(d["h1"], d["h2"], d.get("h3", 0.0))


@dataclass(frozen=True)
class HamiltonianState:
    point: GroupPoint
    momentum: Covector


def hamiltonian_value(params: MetricParams, h: Covector) -> float:
    return -0.5 * (h.h1**2 / params.I1 - h.h2**2 / params.I2 - h.h3**2 / params.I3)


def causal_class(params: MetricParams, h: Covector, tol: float = CAUSAL_TOL) -> CausalClass:
    """Causal class of a normalized covector (``H = -1/2`` or ``H = 0``)."""
    H = hamiltonian_value(params, h)
    scale = 1.0 + h.h1**2 / params.I1
    if abs(H) <= tol * scale:
        return CausalClass.LIGHT_LIKE
    if H > 0:
        raise NotTimeLike("covector has H > 0 (space-like geodesic)")
    return CausalClass.SPACE_LIKE_MOMENTUM if h.chi > 0 else CausalClass.TIME_LIKE


def normalize_timelike(params: MetricParams, direction: Covector) -> Covector:
    """Positive multiple of ``direction`` on the level ``H = -1/2``."""
    H = hamiltonian_value(params, direction)
    if not H < 0 or not direction.h1 < 0:
        raise NotTimeLike(f"need H < 0 and h1 < 0, got H = {H!r}, h1 = {direction.h1!r}")
    return direction.scaled(1.0 / math.sqrt(-2.0 * H))


def normalize_lightlike(params: MetricParams, direction: Covector, tol: float = 1e-8) -> Covector:
    """Scale a null covector so that ``|h1| = 1``."""
    H = hamiltonian_value(params, direction)
    if abs(H) > tol * (1.0 + direction.h1**2 / params.I1) or not direction.h1 < 0:
        raise NotTimeLike(f"need H = 0 and h1 < 0, got H = {H!r}, h1 = {direction.h1!r}")
    return direction.scaled(1.0 / abs(direction.h1))


def vertical_rate(params: MetricParams, h: Covector) -> float:
    """Angular velocity of ``(h2, h3)`` under the vertical flow (axisymmetric)."""
    return params.eta * h.h1 / params.I2


def vertical_flow(params: MetricParams, h: Covector, t: float) -> Covector:
    """Closed-form solution of the vertical subsystem for ``I2 = I3``.

    ``h1`` is constant and ``(h2, h3)`` rotates by ``t eta h1 / I2``, which is
    ``2 tau eta hbar1`` when ``|h| > 0`` and needs no normalization at all.
    """
    if not params.axisymmetric:
        raise ValidationError("closed-form vertical flow requires I2 == I3")
    ang = t * vertical_rate(params, h)
    ca, sa = math.cos(ang), math.sin(ang)
    return Covector(h.h1, ca * h.h2 - sa * h.h3, sa * h.h2 + ca * h.h3)


def vertical_rhs(params: MetricParams, h) -> np.ndarray:
    h1, h2, h3 = h
    a1, a2, a3 = 1.0 / params.I1, 1.0 / params.I2, 1.0 / params.I3
    return np.array([-(a2 - a3) * h2 * h3, -(a1 - a3) * h1 * h3, (a1 - a2) * h1 * h2])


def control_of(params: MetricParams, h) -> np.ndarray:
    """``d_h H``: the extremal control in algebra coordinates."""
    h1, h2, h3 = h
    return np.array([-h1 / params.I1, h2 / params.I2, h3 / params.I3])


def integrate_batch(params: MetricParams, H0, T, steps: int, nsave: int = 1):
    """Oracle integration of many trajectories at once.

    Returns ``(h, g)`` of shapes ``(N, nsave+1, 3)``; ``g`` holds
    ``(c, re w, im w)`` at times ``k T / nsave``.
    """
    if steps < 1 or nsave < 1 or steps % nsave:
        raise ValidationError("steps and nsave must be positive with nsave dividing steps")
    H0 = np.atleast_2d(np.asarray(H0, dtype=float))
    T = np.broadcast_to(np.asarray(T, dtype=float), (H0.shape[0],))
    return kernels.rkmk4(params.I1, params.I2, params.I3, H0, T, int(steps), int(nsave))


def integrate_hamiltonian(params: MetricParams, h0: Covector, t: float, steps: int) -> HamiltonianState:
    """Fixed-step Runge-Kutta-Munthe-Kaas integration from the identity.

    The momentum is advanced by classical RK4 and the point by group
    increments ``g <- g exp(Theta)``, so the state never leaves the group.
    """
    if steps < 1:
        raise ValidationError("steps must be >= 1")
    h, g = integrate_batch(params, h0.as_array(), [t], steps)
    c, a, b = g[0, -1]
    return HamiltonianState(GroupPoint(c, complex(a, b)), Covector(*h[0, -1]))
