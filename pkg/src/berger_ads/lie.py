"""Lie algebra su(1,1), group coordinates on the universal cover and the
left-invariant Lorentzian form.

Algebra coordinates ``x = (x1, x2, x3)`` refer to the basis

    e1 = 1/2 [[i, 0], [0, -i]],  e2 = 1/2 [[0, 1], [1, 0]],  e3 = 1/2 [[0, i], [-i, 0]]

with ``[e1, e2] = e3``, ``[e1, e3] = -e2``, ``[e2, e3] = -e1``.  A group point
is ``(c, w)``: ``c`` is the fiber angle on the universal cover (never reduced
mod 2 pi) and ``w`` is the off-diagonal entry of the SU(1,1) matrix.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegeneratePlane, FinslerViolation, SignatureError, ValidationError

ETA_TOL = 1e-12
NULL_TOL = 1e-12

KILLING = np.diag([-1.0, 1.0, 1.0])


class Regime(str, Enum):
    OBLATE = "oblate"
    SYMMETRIC = "symmetric"
    PROLATE = "prolate"


@dataclass(frozen=True)
class MetricParams:
    """Eigenvalues ``(-I1, I2, I3)`` of the Lorentzian form and the ambient
    complex dimension ``n``.  ``I3`` defaults to ``I2`` (axisymmetric case)."""

    I1: float
    I2: float
    I3: float | None = None
    n: int = 1
    eta_tol: float = field(default=ETA_TOL, compare=False)

    def __post_init__(self):
        if self.I3 is None:
            object.__setattr__(self, "I3", self.I2)
        for name in ("I1", "I2", "I3"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be a positive finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def from_eta(cls, eta: float, I1: float = 1.0, n: int = 1) -> "MetricParams":
        if not eta > -1:
            raise ValidationError(f"eta must exceed -1, got {eta!r}")
        return cls(I1=I1, I2=I1 * (1.0 + eta), n=n)

    @property
    def eta(self) -> float:
        return self.I2 / self.I1 - 1.0

    @property
    def regime(self) -> Regime:
        eta = self.eta
        if abs(eta) <= self.eta_tol:
            return Regime.SYMMETRIC
        return Regime.OBLATE if eta < 0 else Regime.PROLATE

    @property
    def axisymmetric(self) -> bool:
        return self.I2 == self.I3

    def matrix(self) -> np.ndarray:
        return np.diag([-self.I1, self.I2, self.I3])

    def to_dict(self) -> dict:
        return {"I1": self.I1, "I2": self.I2, "I3": self.I3, "n": self.n}

    @classmethod
    def from_dict(cls, d: dict) -> "MetricParams":
        return cls(I1=d["I1"], I2=d["I2"], I3=d.get("I3"), n=d.get("n", 1))


@dataclass(frozen=True, eq=False)
class GroupPoint:
    """Point of the universal cover.  ``w`` is a complex scalar for n = 1 and a
    complex vector otherwise."""

    c: float
    w: complex | np.ndarray = 0j

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))
        w = self.w
        if isinstance(w, np.ndarray) and w.ndim > 0:
            w = np.asarray(w, dtype=complex).copy()
            w.setflags(write=False)
            if w.size == 1:
                w = complex(w[0])
        else:
            w = complex(w)
        object.__setattr__(self, "w", w)

    def __eq__(self, other):
        if not isinstance(other, GroupPoint):
            return NotImplemented
        return self.c == other.c and np.array_equal(self.wvec(), other.wvec())

    def __hash__(self):
        return hash((self.c, tuple(self.wvec().tolist())))

    @property
    def n(self) -> int:
        return 1 if isinstance(self.w, complex) else len(self.w)

    @property
    def abs_w(self) -> float:
        if isinstance(self.w, complex):
            return abs(self.w)
        return float(np.linalg.norm(self.w))

    def wvec(self) -> np.ndarray:
        return np.atleast_1d(np.asarray(self.w, dtype=complex))

    def as_array(self) -> np.ndarray:
        """Real coordinates ``(c, re w_1, im w_1, ...)``."""
        w = self.wvec()
        out = np.empty(1 + 2 * len(w))
        out[0] = self.c
        out[1::2] = w.real
        out[2::2] = w.imag
        return out

    def distance(self, other: "GroupPoint") -> float:
        """Euclidean distance in ``(c, re w, im w)``."""
        return float(np.linalg.norm(self.as_array() - other.as_array()))

    def project(self) -> tuple[complex, complex | np.ndarray]:
        """The projection to H^{1,n}: ``(sqrt(1+|w|^2) e^{ic}, w)``."""
        return math.sqrt(1.0 + self.abs_w**2) * cmath.exp(1j * self.c), self.w

    def to_dict(self) -> dict:
        return {"c": self.c, "w": [[z.real, z.imag] for z in self.wvec()]}

    @classmethod
    def from_dict(cls, d: dict) -> "GroupPoint":
        w = [complex(re, im) for re, im in d["w"]]
        return cls(d["c"], w[0] if len(w) == 1 else np.array(w))

    def __repr__(self):
        return f"GroupPoint(c={self.c!r}, w={self.w!r})"


IDENTITY = GroupPoint(0.0, 0j)


@dataclass(frozen=True)
class SuMatrix:
    q0: float
    q1: float
    q2: float
    q3: float

    @property
    def det(self) -> float:
        return self.q0**2 + self.q1**2 - self.q2**2 - self.q3**2

    def matrix(self) -> np.ndarray:
        a = complex(self.q0, self.q1)
        b = complex(self.q2, self.q3)
        return np.array([[a, b], [b.conjugate(), a.conjugate()]])


# --- quadratic forms --------------------------------------------------------


def killing(x) -> float:
    x1, x2, x3 = x
    return -x1 * x1 + x2 * x2 + x3 * x3


def lorentz_form(params: MetricParams, x) -> float:
    x1, x2, x3 = x
    return -params.I1 * x1 * x1 + params.I2 * x2 * x2 + params.I3 * x3 * x3


def lorentz_bilinear(params: MetricParams, x, y) -> float:
    return float(np.asarray(x, float) @ params.matrix() @ np.asarray(y, float))


def bracket(x, y) -> np.ndarray:
    x1, x2, x3 = x
    y1, y2, y3 = y
    return np.array([-(x2 * y3 - x3 * y2), -(x1 * y3 - x3 * y1), x1 * y2 - x2 * y1])


def algebra_matrix(x) -> np.ndarray:
    """The 2x2 complex matrix of ``x1 e1 + x2 e2 + x3 e3``."""
    x1, x2, x3 = x
    return 0.5 * np.array([[1j * x1, x2 + 1j * x3], [x2 - 1j * x3, -1j * x1]])


# --- group law --------------------------------------------------------------


def _wrap(angle: float) -> float:
    return math.remainder(angle, 2.0 * math.pi)


def group_mult(a: GroupPoint, b: GroupPoint) -> GroupPoint:
    """Product on the universal cover of SU(1,1) (n = 1)."""
    c1, w1 = a.c, complex(a.w)
    c2, w2 = b.c, complex(b.w)
    r1 = math.sqrt(1.0 + (w1.real * w1.real + w1.imag * w1.imag))
    r2 = math.sqrt(1.0 + (w2.real * w2.real + w2.imag * w2.imag))
    z = w1 * w2.conjugate() * cmath.exp(-1j * (c1 + c2))
    # r1 r2 > |w1||w2| >= |z|, so the denominator is positive and atan2 is the continuous lift
    c = c1 + c2 + math.atan2(z.imag, r1 * r2 + z.real)
    w = w2 * r1 * cmath.exp(1j * c1) + w1 * r2 * cmath.exp(-1j * c2)
    return GroupPoint(c, w)


def group_inv(a: GroupPoint) -> GroupPoint:
    return GroupPoint(-a.c, -a.w)


def to_su_matrix(p: GroupPoint) -> np.ndarray:
    a, w = p.project()
    w = complex(w)
    return np.array([[a, w], [w.conjugate(), a.conjugate()]])


def from_su_matrix(m: np.ndarray, c_ref: float = 0.0) -> GroupPoint:
    """Lift an SU(1,1) matrix to the cover, choosing the sheet nearest ``c_ref``."""
    a = complex(m[0, 0])
    c = cmath.phase(a)
    c += 2.0 * math.pi * round((c_ref - c) / (2.0 * math.pi))
    return GroupPoint(c, complex(m[0, 1]))


def rotate_fiber(phi: float, p: GroupPoint) -> GroupPoint:
    """Rotation by ``phi`` around the c-axis; a group automorphism."""
    rot = cmath.exp(1j * phi)
    if isinstance(p.w, complex):
        return GroupPoint(p.c, rot * p.w)
    return GroupPoint(p.c, rot * p.wvec())


# --- exponential map --------------------------------------------------------


def _exp_coeffs(k: float, x_sq: float) -> tuple[float, float]:
    """``C, S`` with ``exp(X) = C + S X`` where ``X^2 = k``, ``k = Kil(x)/4``."""
    if abs(k) < NULL_TOL * (1.0 + x_sq) / 4.0:
        return (1.0 + k / 2.0 + k * k / 24.0 + k**3 / 720.0,
                1.0 + k / 6.0 + k * k / 120.0 + k**3 / 5040.0)
    if k > 0:
        r = math.sqrt(k)
        return math.cosh(r), math.sinh(r) / r
    r = math.sqrt(-k)
    return math.cos(r), math.sin(r) / r


def ellipse_arg(theta: float, a: float) -> float:
    """Continuous argument of ``cos(s) + i a sin(s)`` at ``s = theta`` for
    ``|a| >= 1`` (starting from 0 at ``s = 0``).

    The curve crosses the axes exactly where ``s`` is a multiple of pi/2, so
    the argument never strays more than pi/2 from ``sign(a) * s``.
    """
    ref = math.copysign(theta, a)
    raw = math.atan2(a * math.sin(theta), math.cos(theta))
    return ref + _wrap(raw - ref)


def _exact_square(a: float) -> tuple[float, float]:
    """``a*a`` as an unevaluated sum ``p + e`` (Dekker splitting)."""
    p = a * a
    t = 134217729.0 * a
    hi = t - (t - a)
    lo = a - hi
    return p, ((hi * hi - p) + 2.0 * hi * lo) + lo * lo


def _killing_accurate(x1: float, x2: float, x3: float) -> float:
    """Killing value without cancellation error near the null cone."""
    p1, e1 = _exact_square(x1)
    p2, e2 = _exact_square(x2)
    p3, e3 = _exact_square(x3)
    return math.fsum((-p1, -e1, p2, e2, p3, e3))


def group_exp(params: MetricParams | None, x) -> tuple[SuMatrix, GroupPoint]:
    """Exponential of ``x`` in SU(1,1) and its lift to the universal cover.

    ``params`` is accepted for interface symmetry; the group exponential does
    not depend on the metric.
    """
    x1, x2, x3 = (float(v) for v in x)
    x_sq = x1 * x1 + x2 * x2 + x3 * x3
    k = 0.25 * _killing_accurate(x1, x2, x3)
    C, S = _exp_coeffs(k, x_sq)
    q0, q1, q2, q3 = C, 0.5 * S * x1, 0.5 * S * x2, 0.5 * S * x3
    if k < 0 and C != 1.0 and abs(k) >= NULL_TOL * (1.0 + x_sq) / 4.0:
        theta = math.sqrt(-k)
        c = ellipse_arg(theta, x1 / (2.0 * theta))
    else:
        c = math.atan2(q1, q0)
    return SuMatrix(q0, q1, q2, q3), GroupPoint(c, complex(q2, q3))


def exp_point(x) -> GroupPoint:
    return group_exp(None, x)[1]


# --- canonical form ---------------------------------------------------------


def _min_eig(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(m)[0])


def _finsler_lambda(K: np.ndarray, Q: np.ndarray) -> float:
    """A ``lam`` maximising the smallest eigenvalue of ``K + lam Q`` (concave in lam)."""
    lo, hi = -1.0, 1.0
    f = lambda lam: _min_eig(K + lam * Q)
    # expand until the maximiser is bracketed
    for _ in range(200):
        if f(lo) < f(lo / 2) and f(hi) < f(hi / 2):
            break
        lo, hi = 2 * lo, 2 * hi
    for _ in range(200):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if f(m1) < f(m2):
            lo = m1
        else:
            hi = m2
        if hi - lo < 1e-14 * (1 + abs(lo)):
            break
    return 0.5 * (lo + hi)


def null_cone_samples(Q: np.ndarray, count: int = 512) -> np.ndarray:
    """Unit-ish directions on the null cone of a (1,2)-signature form."""
    evals, evecs = np.linalg.eigh(Q)
    neg = evecs[:, 0] / math.sqrt(-evals[0])
    p1 = evecs[:, 1] / math.sqrt(evals[1])
    p2 = evecs[:, 2] / math.sqrt(evals[2])
    ang = 2.0 * math.pi * (np.arange(count) + 0.5) / count
    return neg[None, :] + np.cos(ang)[:, None] * p1 + np.sin(ang)[:, None] * p2


def canonicalize_form(Q, samples: int = 512, tol: float = 1e-10):
    """Bring a (1,2)-signature form to ``diag(-I1, I2, I3)`` by a basis change
    preserving the Killing form.

    Returns ``(params, B)``: the columns of ``B`` are the new basis vectors in
    old coordinates, ``B.T @ Q @ B`` is diagonal and ``B.T @ KILLING @ B`` equals
    ``KILLING``.  The two space eigenvalues are ordered ``I2 <= I3``.
    """
    Q = np.asarray(Q, dtype=float)
    if Q.shape != (3, 3) or not np.allclose(Q, Q.T, atol=tol * (1 + np.abs(Q).max())):
        raise SignatureError("Q must be a symmetric 3x3 matrix")
    Q = 0.5 * (Q + Q.T)
    evals = np.linalg.eigvalsh(Q)
    scale = np.abs(evals).max()
    if np.any(np.abs(evals) <= tol * scale) or (evals < 0).sum() != 1:
        raise SignatureError(f"Q must be nondegenerate of signature (1,2); eigenvalues {evals}")

    # Q proportional to the Killing form: every basis is canonical, no pencil needed
    mu = Q[1, 1]
    if mu > 0 and np.allclose(Q, mu * KILLING, atol=tol * scale):
        return MetricParams(I1=mu, I2=mu, I3=mu), np.eye(3)

    cone = null_cone_samples(Q, samples)
    kil = np.einsum("ij,jk,ik->i", cone, KILLING, cone)
    kscale = np.einsum("ij,ij->i", cone, cone)
    if (kil > tol * kscale).any() and (kil < -tol * kscale).any():
        raise FinslerViolation("Killing form changes sign on the null cone of Q")
    sign = 1.0 if kil.mean() > 0 else -1.0

    lam = _finsler_lambda(sign * KILLING, Q)
    S = sign * KILLING + lam * Q
    if _min_eig(S) <= 0:
        raise FinslerViolation("no positive definite combination of the Killing form and Q")

    # S = L L^T; diagonalise Q in the S-orthonormal frame
    L = np.linalg.cholesky(S)
    Linv = np.linalg.inv(L)
    a, V = np.linalg.eigh(Linv @ Q @ Linv.T)
    F = Linv.T @ V
    kdiag = sign * (1.0 - lam * a)
    F = F / np.sqrt(np.abs(kdiag))[None, :]
    kdiag = np.sign(kdiag)
    qdiag = np.einsum("ij,jk,ki->i", F.T, Q, F)
    if (kdiag < 0).sum() != 1 or np.any(np.sign(qdiag) != kdiag):
        raise FinslerViolation("Q and the Killing form have mismatched diagonal signs")

    time = int(np.argmin(kdiag))
    space = [i for i in range(3) if i != time]
    space.sort(key=lambda i: qdiag[i])
    order = [time] + space
    B = F[:, order]
    for j in range(3):
        col = B[:, j]
        if col[np.argmax(np.abs(col))] < 0:
            B[:, j] = -col
    if np.linalg.det(B) < 0:
        B[:, 2] = -B[:, 2]
    q = qdiag[order]
    params = MetricParams(I1=-q[0], I2=q[1], I3=q[2])
    return params, B


# --- curvature --------------------------------------------------------------


def sectional_curvature(params: MetricParams, w, tol: float = 1e-12) -> float:
    """Sectional curvature of the plane ``Ker Q(w, .)`` (axisymmetric case)."""
    w = np.asarray(w, dtype=float)
    qww = lorentz_form(params, w)
    if abs(qww) <= tol * params.I1 * float(w @ w):
        raise DegeneratePlane("Q(w, w) vanishes; the plane Ker Q(w, .) is degenerate")
    eta = params.eta
    qwe1 = -params.I1 * w[0]
    return -(1.0 - 4.0 * eta * qwe1 * qwe1 / (params.I1 * qww)) / (4.0 * params.I1 * (eta + 1.0) ** 2)
