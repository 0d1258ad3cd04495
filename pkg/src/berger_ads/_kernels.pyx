# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled oracle integrator kernel (scalar loops over trajectories)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, cos, sin, cosh, sinh, atan2, copysign, round, M_PI

cdef double NULL_TOL = 1e-12
cdef double TWO_PI = 2.0 * M_PI
# increments are first multiplied into a local element near the identity and
# flushed into the trajectory every BLOCK steps, which keeps rounding relative
# to small numbers when |w| is large
cdef long BLOCK = 256


cdef inline void exp_cw(double x1, double x2, double x3, double* out) noexcept nogil:
    cdef double x_sq = x1 * x1 + x2 * x2 + x3 * x3
    cdef double k = 0.25 * (-x1 * x1 + x2 * x2 + x3 * x3)
    cdef double C, S, r, a, ref, raw, d
    if fabs(k) < NULL_TOL * (1.0 + x_sq) / 4.0:
        C = 1.0 + k / 2.0 + k * k / 24.0 + k * k * k / 720.0
        S = 1.0 + k / 6.0 + k * k / 120.0 + k * k * k / 5040.0
        out[0] = atan2(0.5 * S * x1, C)
    elif k > 0:
        r = sqrt(k)
        C = cosh(r)
        S = sinh(r) / r
        out[0] = atan2(0.5 * S * x1, C)
    else:
        r = sqrt(-k)
        C = cos(r)
        S = sin(r) / r
        a = x1 / (2.0 * r)
        ref = copysign(r, a)
        raw = atan2(a * sin(r), cos(r))
        d = raw - ref
        d = d - TWO_PI * round(d / TWO_PI)
        out[0] = ref + d
    out[1] = 0.5 * S * x2
    out[2] = 0.5 * S * x3


cdef inline void mult_cw(double c1, double a1, double b1, double c2, double a2, double b2,
                         double* out) noexcept nogil:
    cdef double r1 = sqrt(1.0 + a1 * a1 + b1 * b1)
    cdef double r2 = sqrt(1.0 + a2 * a2 + b2 * b2)
    cdef double e = c1 + c2
    cdef double ce = cos(e), se = sin(e)
    # z = w1 conj(w2) e^{-i(c1+c2)}
    cdef double pr = a1 * a2 + b1 * b2
    cdef double pi_ = b1 * a2 - a1 * b2
    cdef double zr = pr * ce + pi_ * se
    cdef double zi = pi_ * ce - pr * se
    cdef double cc1 = cos(c1), sc1 = sin(c1), cc2 = cos(c2), sc2 = sin(c2)
    out[0] = e + atan2(zi, r1 * r2 + zr)
    out[1] = r1 * (a2 * cc1 - b2 * sc1) + r2 * (a1 * cc2 + b1 * sc2)
    out[2] = r1 * (a2 * sc1 + b2 * cc1) + r2 * (b1 * cc2 - a1 * sc2)


cdef inline void rhs(double a1, double a2, double a3, double* h, double* f) noexcept nogil:
    f[0] = -(a2 - a3) * h[1] * h[2]
    f[1] = -(a1 - a3) * h[0] * h[2]
    f[2] = (a1 - a2) * h[0] * h[1]


cdef inline void dexpinv_u(double a1, double a2, double a3, double* th, double* h,
                           double dt, double* k) noexcept nogil:
    cdef double u0 = -h[0] * a1, u1 = h[1] * a2, u2 = h[2] * a3
    cdef double b0 = -(th[1] * u2 - th[2] * u1)
    cdef double b1 = -(th[0] * u2 - th[2] * u0)
    cdef double b2 = th[0] * u1 - th[1] * u0
    cdef double bb0 = -(th[1] * b2 - th[2] * b1)
    cdef double bb1 = -(th[0] * b2 - th[2] * b0)
    cdef double bb2 = th[0] * b1 - th[1] * b0
    k[0] = dt * (u0 + 0.5 * b0 + bb0 / 12.0)
    k[1] = dt * (u1 + 0.5 * b1 + bb1 / 12.0)
    k[2] = dt * (u2 + 0.5 * b2 + bb2 / 12.0)


def rkmk4(double I1, double I2, double I3, h0, T, long steps, long nsave):
    """Same contract as ``_kernels_py.rkmk4``."""
    cdef cnp.ndarray[cnp.double_t, ndim=2] hh = np.ascontiguousarray(h0, dtype=np.float64)
    cdef cnp.ndarray[cnp.double_t, ndim=1] tt = np.ascontiguousarray(T, dtype=np.float64)
    cdef long n = hh.shape[0]
    cdef cnp.ndarray[cnp.double_t, ndim=3] H = np.empty((n, nsave + 1, 3))
    cdef cnp.ndarray[cnp.double_t, ndim=3] G = np.empty((n, nsave + 1, 3))
    cdef cnp.ndarray[cnp.int64_t, ndim=1] save_at = np.round(
        np.arange(nsave + 1) * steps / nsave).astype(np.int64)
    cdef double a1 = 1.0 / I1, a2 = 1.0 / I2, a3 = 1.0 / I3
    cdef double h[3]
    cdef double s[3]
    cdef double f1[3]
    cdef double f2[3]
    cdef double f3[3]
    cdef double f4[3]
    cdef double k1[3]
    cdef double k2[3]
    cdef double k3[3]
    cdef double k4[3]
    cdef double th[3]
    cdef double e[3]
    cdef double g[3]
    cdef double l[3]
    cdef double tmp[3]
    cdef double zero[3]
    cdef long block
    cdef double dt
    cdef long i, step, j, m
    zero[0] = 0.0
    zero[1] = 0.0
    zero[2] = 0.0
    with nogil:
        for i in range(n):
            dt = tt[i] / steps
            for m in range(3):
                h[m] = hh[i, m]
                g[m] = 0.0
                l[m] = 0.0
            block = 0
            j = 0
            for step in range(steps + 1):
                while j <= nsave and save_at[j] == step:
                    mult_cw(g[0], g[1], g[2], l[0], l[1], l[2], tmp)
                    for m in range(3):
                        H[i, j, m] = h[m]
                        G[i, j, m] = tmp[m]
                    j += 1
                if step == steps:
                    break
                rhs(a1, a2, a3, h, f1)
                dexpinv_u(a1, a2, a3, zero, h, dt, k1)

                for m in range(3):
                    s[m] = h[m] + 0.5 * dt * f1[m]
                    th[m] = 0.5 * k1[m]
                rhs(a1, a2, a3, s, f2)
                dexpinv_u(a1, a2, a3, th, s, dt, k2)

                for m in range(3):
                    s[m] = h[m] + 0.5 * dt * f2[m]
                    th[m] = 0.5 * k2[m]
                rhs(a1, a2, a3, s, f3)
                dexpinv_u(a1, a2, a3, th, s, dt, k3)

                for m in range(3):
                    s[m] = h[m] + dt * f3[m]
                rhs(a1, a2, a3, s, f4)
                dexpinv_u(a1, a2, a3, k3, s, dt, k4)

                for m in range(3):
                    th[m] = (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]) / 6.0
                exp_cw(th[0], th[1], th[2], e)
                mult_cw(l[0], l[1], l[2], e[0], e[1], e[2], l)
                block += 1
                if block == BLOCK:
                    mult_cw(g[0], g[1], g[2], l[0], l[1], l[2], g)
                    l[0] = 0.0
                    l[1] = 0.0
                    l[2] = 0.0
                    block = 0
                for m in range(3):
                    h[m] = h[m] + dt / 6.0 * (f1[m] + 2.0 * f2[m] + 2.0 * f3[m] + f4[m])
    return H, G
