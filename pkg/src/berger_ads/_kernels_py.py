"""Pure numpy implementation of the oracle integrator kernel.

Vectorized over trajectories, looped over steps.  Mirrors ``_kernels.pyx``
operation for operation so that both back ends agree to rounding.
"""
import numpy as np

NULL_TOL = 1e-12
TWO_PI = 2.0 * np.pi
BLOCK = 256


def exp_cw(x1, x2, x3):
    """Group exponential in ``(c, re w, im w)`` coordinates, elementwise."""
    x_sq = x1 * x1 + x2 * x2 + x3 * x3
    k = 0.25 * (-x1 * x1 + x2 * x2 + x3 * x3)
    null = np.abs(k) < NULL_TOL * (1.0 + x_sq) / 4.0
    r = np.sqrt(np.abs(k))
    safe_r = np.where(r > 0, r, 1.0)
    C = np.where(k > 0, np.cosh(r), np.cos(r))
    S = np.where(k > 0, np.sinh(r) / safe_r, np.sin(r) / safe_r)
    C = np.where(null, 1.0 + k / 2.0 + k * k / 24.0 + k**3 / 720.0, C)
    S = np.where(null, 1.0 + k / 6.0 + k * k / 120.0 + k**3 / 5040.0, S)
    q1 = 0.5 * S * x1
    c = np.arctan2(q1, C)
    # elliptic branch: unwrap around sign(a) * theta
    ell = (k < 0) & ~null
    a = x1 / (2.0 * safe_r)
    ref = np.copysign(r, a)
    raw = np.arctan2(a * np.sin(r), np.cos(r))
    d = raw - ref
    d = d - TWO_PI * np.round(d / TWO_PI)
    c = np.where(ell, ref + d, c)
    return c, 0.5 * S * x2, 0.5 * S * x3


def mult_cw(c1, a1, b1, c2, a2, b2):
    """Group product of ``(c1, a1 + i b1)`` and ``(c2, a2 + i b2)``."""
    r1 = np.sqrt(1.0 + a1 * a1 + b1 * b1)
    r2 = np.sqrt(1.0 + a2 * a2 + b2 * b2)
    w1 = a1 + 1j * b1
    w2 = a2 + 1j * b2
    z = w1 * np.conj(w2) * np.exp(-1j * (c1 + c2))
    c = c1 + c2 + np.arctan2(z.imag, r1 * r2 + z.real)
    w = w2 * r1 * np.exp(1j * c1) + w1 * r2 * np.exp(-1j * c2)
    return c, w.real, w.imag


def _rhs(d, h1, h2, h3):
    a1, a2, a3 = d
    return (-(a2 - a3) * h2 * h3, -(a1 - a3) * h1 * h3, (a1 - a2) * h1 * h2)


def _control(d, h1, h2, h3):
    a1, a2, a3 = d
    return (-h1 * a1, h2 * a2, h3 * a3)


def _bracket(x, y):
    return (-(x[1] * y[2] - x[2] * y[1]), -(x[0] * y[2] - x[2] * y[0]),
            x[0] * y[1] - x[1] * y[0])


def _dexpinv(theta, a):
    b = _bracket(theta, a)
    bb = _bracket(theta, b)
    return tuple(a[i] + 0.5 * b[i] + bb[i] / 12.0 for i in range(3))


def rkmk4(I1, I2, I3, h0, T, steps, nsave):
    """Integrate ``hdot = vertical(h)``, ``gdot = g u(h)`` from the identity.

    ``h0`` is ``(N, 3)``, ``T`` is ``(N,)`` final times.  Returns arrays of
    shape ``(N, nsave + 1, 3)`` for ``h`` and ``(N, nsave + 1, 3)`` for
    ``(c, re w, im w)`` sampled at ``k * T / nsave``.
    """
    h0 = np.ascontiguousarray(h0, dtype=float)
    T = np.ascontiguousarray(T, dtype=float)
    n = h0.shape[0]
    d = (1.0 / I1, 1.0 / I2, 1.0 / I3)
    dt = T / steps
    h1, h2, h3 = h0[:, 0].copy(), h0[:, 1].copy(), h0[:, 2].copy()
    c = np.zeros(n)
    wa = np.zeros(n)
    wb = np.zeros(n)
    # local accumulator flushed every BLOCK steps (see _kernels.pyx)
    lc, la, lb = np.zeros(n), np.zeros(n), np.zeros(n)
    block = 0
    H = np.empty((n, nsave + 1, 3))
    G = np.empty((n, nsave + 1, 3))
    save_at = np.round(np.arange(nsave + 1) * steps / nsave).astype(int)
    j = 0
    for step in range(steps + 1):
        while j <= nsave and save_at[j] == step:
            H[:, j] = np.stack([h1, h2, h3], axis=1)
            G[:, j] = np.stack(mult_cw(c, wa, wb, lc, la, lb), axis=1)
            j += 1
        if step == steps:
            break
        f1 = _rhs(d, h1, h2, h3)
        u1 = _control(d, h1, h2, h3)
        k1 = tuple(dt * v for v in u1)

        s2 = (h1 + 0.5 * dt * f1[0], h2 + 0.5 * dt * f1[1], h3 + 0.5 * dt * f1[2])
        f2 = _rhs(d, *s2)
        th = tuple(0.5 * v for v in k1)
        k2 = tuple(dt * v for v in _dexpinv(th, _control(d, *s2)))

        s3 = (h1 + 0.5 * dt * f2[0], h2 + 0.5 * dt * f2[1], h3 + 0.5 * dt * f2[2])
        f3 = _rhs(d, *s3)
        th = tuple(0.5 * v for v in k2)
        k3 = tuple(dt * v for v in _dexpinv(th, _control(d, *s3)))

        s4 = (h1 + dt * f3[0], h2 + dt * f3[1], h3 + dt * f3[2])
        f4 = _rhs(d, *s4)
        k4 = tuple(dt * v for v in _dexpinv(k3, _control(d, *s4)))

        theta = tuple((k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0 for i in range(3))
        e = exp_cw(*theta)
        lc, la, lb = mult_cw(lc, la, lb, *e)
        block += 1
        if block == BLOCK:
            c, wa, wb = mult_cw(c, wa, wb, lc, la, lb)
            lc, la, lb = np.zeros(n), np.zeros(n), np.zeros(n)
            block = 0
        h1 = h1 + dt / 6.0 * (f1[0] + 2.0 * f2[0] + 2.0 * f3[0] + f4[0])
        h2 = h2 + dt / 6.0 * (f1[1] + 2.0 * f2[1] + 2.0 * f3[1] + f4[1])
        h3 = h3 + dt / 6.0 * (f1[2] + 2.0 * f2[2] + 2.0 * f3[2] + f4[2])
    return H, G
