import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from berger_ads.errors import DegeneratePlane, FinslerViolation, SignatureError, ValidationError
from berger_ads.lie import (
    KILLING,
    GroupPoint,
    MetricParams,
    Regime,
    algebra_matrix,
    bracket,
    canonicalize_form,
    from_su_matrix,
    group_exp,
    group_inv,
    group_mult,
    killing,
    lorentz_form,
    rotate_fiber,
    sectional_curvature,
    to_su_matrix,
)

coord = st.floats(-6, 6, allow_nan=False)
wcoord = st.floats(-3, 3, allow_nan=False)
points = st.builds(lambda c, a, b: GroupPoint(c, complex(a, b)), coord, wcoord, wcoord)
vectors = st.tuples(coord, coord, coord)


def boost(a, axis=1):
    m = np.eye(3)
    m[0, 0] = m[axis, axis] = math.cosh(a)
    m[0, axis] = m[axis, 0] = math.sinh(a)
    return m


def rot(a):
    return np.array([[1, 0, 0], [0, math.cos(a), -math.sin(a)], [0, math.sin(a), math.cos(a)]])


def test_basis_commutators():
    e1, e2, e3 = (algebra_matrix(v) for v in np.eye(3))
    assert np.allclose(e1 @ e2 - e2 @ e1, e3)
    assert np.allclose(e1 @ e3 - e3 @ e1, -e2)
    assert np.allclose(e2 @ e3 - e3 @ e2, -e1)


@given(vectors, vectors)
def test_bracket_matches_matrices(x, y):
    X, Y = algebra_matrix(x), algebra_matrix(y)
    assert np.allclose(algebra_matrix(bracket(x, y)), X @ Y - Y @ X, atol=1e-9)


def test_killing_examples():
    assert killing((1, 0, 0)) == -1
    assert killing((1, 1, 0)) == 0
    assert killing((0.6, 0.8, 0.0)) == pytest.approx(0.28)


def test_lorentz_form_examples():
    assert lorentz_form(MetricParams(1, 1, 1), (1, 0, 0)) == -1
    assert lorentz_form(MetricParams(1, 2, 2), (1, 1, 0)) == 1
    p = MetricParams(2.5, 2.5)
    rng = np.random.default_rng(0)
    for x in rng.normal(size=(50, 3)):
        assert lorentz_form(p, x) == pytest.approx(2.5 * killing(x))


def test_metric_params_validation_and_regime():
    with pytest.raises(ValidationError):
        MetricParams(-1, 1)
    with pytest.raises(ValidationError):
        MetricParams(1, 1, n=0)
    with pytest.raises(ValidationError):
        MetricParams.from_eta(-1.0)
    assert MetricParams(1, 0.5).regime is Regime.OBLATE
    assert MetricParams(1, 1).regime is Regime.SYMMETRIC
    assert MetricParams(1, 1.1).regime is Regime.PROLATE
    assert MetricParams(2, 3).eta == 3 / 2 - 1
    assert MetricParams(1, 1 + 1e-14).regime is Regime.SYMMETRIC
    assert MetricParams(1, 1 + 1e-14, eta_tol=0).regime is Regime.PROLATE


def test_json_round_trips():
    p = MetricParams(1.5, 2.0, n=3)
    assert MetricParams.from_dict(p.to_dict()) == p
    g = GroupPoint(7.25, np.array([1 + 2j, -0.5j, 3.0]))
    g2 = GroupPoint.from_dict(g.to_dict())
    assert g2.c == g.c and np.array_equal(g2.wvec(), g.wvec())
    g = GroupPoint(-1.0, 0.1 - 0.2j)
    assert GroupPoint.from_dict(g.to_dict()).w == g.w


@given(points)
def test_projection_on_quadric(p):
    z, w = p.project()
    assert -abs(z) ** 2 + abs(w) ** 2 == pytest.approx(-1.0, rel=1e-12)


def test_group_mult_examples():
    p = GroupPoint(0.7, 1 - 2j)
    e = GroupPoint(0, 0)
    assert group_mult(e, p).distance(p) == 0
    assert group_mult(p, e).distance(p) == 0
    q = group_mult(GroupPoint(1.25, 0), GroupPoint(-3.5, 0))
    assert q.c == -2.25 and q.w == 0


@given(points, points)
def test_group_mult_matches_matrix_product(a, b):
    m = to_su_matrix(a) @ to_su_matrix(b)
    assert np.allclose(to_su_matrix(group_mult(a, b)), m, atol=1e-9 * (1 + np.abs(m).max()))


@given(points, points, points)
def test_group_mult_associative(a, b, c):
    left = group_mult(group_mult(a, b), c)
    right = group_mult(a, group_mult(b, c))
    scale = 1 + left.abs_w
    assert abs(left.c - right.c) <= 1e-10 * scale
    assert abs(left.w - right.w) <= 1e-10 * scale**2


@given(points)
def test_inverse(p):
    assert group_mult(p, group_inv(p)).distance(GroupPoint(0, 0)) < 1e-10 * (1 + p.abs_w**2)


def test_group_mult_continuous_winding():
    # walking around the fiber many times keeps c on the cover
    g = GroupPoint(0, 0)
    step = group_exp(None, (0.3, 0.2, -0.1))[1]
    prev = 0.0
    for _ in range(400):
        g = group_mult(g, step)
        assert abs(g.c - prev) < 1.0
        prev = g.c
    assert g.c > 20


def test_group_exp_examples():
    a = 2.3
    m, p = group_exp(None, (a, 0, 0))
    assert complex(m.q0, m.q1) == pytest.approx(np.exp(0.5j * a))
    assert p.c == pytest.approx(a / 2) and p.w == 0
    m, p = group_exp(None, (a, a, 0))
    assert (m.q0, m.q1) == pytest.approx((1.0, a / 2))
    assert p.w == pytest.approx(a / 2)
    b = 1.7
    m, p = group_exp(None, (0, b, 0))
    assert m.q0 == pytest.approx(math.cosh(b / 2))
    assert p.w == pytest.approx(math.sinh(b / 2))


def test_group_exp_winding_along_e1():
    for a in (7.0, 13.0, -9.5, 40.0):
        assert group_exp(None, (a, 0, 0))[1].c == pytest.approx(a / 2)


@given(vectors)
def test_group_exp_matches_expm(x):
    m, p = group_exp(None, x)
    ref = expm(algebra_matrix(x))
    assert np.allclose(m.matrix(), ref, atol=1e-9 * (1 + np.abs(ref).max()))
    assert m.det == pytest.approx(1.0, rel=1e-9)
    assert np.allclose(to_su_matrix(p), ref, atol=1e-9 * (1 + np.abs(ref).max()))


def test_group_exp_winding_is_continuous_in_scale():
    # c(s) for exp(s x) must be continuous; compare against a fine unwrap
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.normal(size=3)
        x[0] = abs(x[0]) + 1.5 * np.linalg.norm(x[1:])
        ss = np.linspace(0, 40, 4001)
        cs = np.array([group_exp(None, s * x)[1].c for s in ss])
        mats = [group_exp(None, s * x)[0] for s in ss]
        raw = np.unwrap([math.atan2(m.q1, m.q0) for m in mats])
        assert np.allclose(cs, raw, atol=1e-9)


def test_group_exp_branch_continuity_across_null_cone():
    rng = np.random.default_rng(4)
    for _ in range(200):
        d = rng.normal(size=2)
        d /= np.linalg.norm(d)
        a = rng.uniform(0.1, 5)
        x = np.array([a, a * d[0], a * d[1]])
        xp = x * np.array([1 + 1e-7, 1, 1])
        p, q = group_exp(None, x)[1], group_exp(None, xp)[1]
        assert abs(killing(xp)) <= 1e-6 * 25
        assert p.distance(q) <= 10 * np.linalg.norm(x - xp)


def test_group_exp_series_branch_agrees():
    # just inside and outside the series threshold
    for eps in (1e-13, 1e-11, -1e-11, -1e-13):
        x = (1.0, math.sqrt(1.0 + eps), 0.0)
        m = group_exp(None, x)[0]
        assert np.allclose(m.matrix(), expm(algebra_matrix(x)), atol=1e-12)


def test_from_su_matrix_sheet():
    p = GroupPoint(12.0, 0.3 + 0.1j)
    q = from_su_matrix(to_su_matrix(p), c_ref=11.0)
    assert q.distance(p) < 1e-12


def test_rotate_fiber_examples():
    p = GroupPoint(2.0, 1 + 1j)
    assert rotate_fiber(0.0, p).distance(p) == 0
    assert rotate_fiber(math.pi, p).distance(GroupPoint(2.0, -1 - 1j)) < 1e-15


@given(points, points, st.floats(-7, 7))
def test_rotate_fiber_is_automorphism(a, b, phi):
    lhs = rotate_fiber(phi, group_mult(a, b))
    rhs = group_mult(rotate_fiber(phi, a), rotate_fiber(phi, b))
    assert lhs.distance(rhs) <= 1e-12 * (1 + lhs.abs_w)


def _pushforward_form(params, base, v, h=1e-6):
    # left-trivialized velocity of the curve base + s v, via group_inv
    p = GroupPoint(base.c + h * v[0], complex(base.w) + h * v[1])
    m = GroupPoint(base.c - h * v[0], complex(base.w) - h * v[1])
    d = group_mult(group_inv(m), p)
    # d = exp(2h X) to first order; X from the matrix logarithm of d
    X = (to_su_matrix(d) - np.eye(2)) / (2 * h)
    x1 = (X[0, 0] / 0.5j).real
    x2 = (X[0, 1] + X[1, 0]).real
    x3 = ((X[0, 1] - X[1, 0]) / 1j).real
    return lorentz_form(params, (x1, x2, x3))


def test_rotate_fiber_preserves_lorentz_form():
    params = MetricParams(1.0, 1.7)
    rng = np.random.default_rng(5)
    for _ in range(30):
        base = GroupPoint(rng.normal(), complex(*rng.normal(size=2)))
        v = (rng.normal(), complex(*rng.normal(size=2)))
        phi = rng.uniform(0, 2 * math.pi)
        rb = rotate_fiber(phi, base)
        rv = (v[0], v[1] * np.exp(1j * phi))
        assert _pushforward_form(params, rb, rv) == pytest.approx(_pushforward_form(params, base, v), rel=1e-6, abs=1e-8)


def test_canonicalize_trivial():
    p, B = canonicalize_form(np.diag([-1.0, 1, 1]))
    assert (p.I1, p.I2, p.I3) == (1, 1, 1) and np.allclose(B, np.eye(3))
    p, B = canonicalize_form(np.diag([-2.0, 3, 3]))
    assert (p.I1, p.I2, p.I3) == pytest.approx((2, 3, 3))
    assert np.allclose(B, np.eye(3))


def test_canonicalize_recovers_conjugated_form():
    rng = np.random.default_rng(6)
    for _ in range(20):
        R = boost(rng.normal(), 1) @ rot(rng.uniform(0, 6)) @ boost(rng.normal(), 2)
        assert np.allclose(R.T @ KILLING @ R, KILLING)
        Q = R.T @ np.diag([-1.0, 5.0, 2.0]) @ R
        p, B = canonicalize_form(Q)
        assert (p.I1, p.I2, p.I3) == pytest.approx((1, 2, 5), rel=1e-8)
        assert np.allclose(B.T @ KILLING @ B, KILLING, atol=1e-8)
        assert np.linalg.det(B) == pytest.approx(1.0)
        assert np.allclose(B.T @ Q @ B, np.diag([-1.0, 2, 5]), atol=1e-7)
        # the new basis still satisfies the commutators
        E = [sum(B[i, j] * algebra_matrix(np.eye(3)[i]) for i in range(3)) for j in range(3)]
        assert np.allclose(E[0] @ E[1] - E[1] @ E[0], E[2], atol=1e-8)


def test_canonicalize_errors():
    with pytest.raises(SignatureError):
        canonicalize_form(np.diag([1.0, 1, 1]))
    with pytest.raises(SignatureError):
        canonicalize_form(np.diag([-1.0, -1, 1]))
    with pytest.raises(FinslerViolation):
        canonicalize_form(np.diag([-1.0, 0.2, 3]))


def test_sectional_curvature_examples():
    p0 = MetricParams(2.0, 2.0)
    rng = np.random.default_rng(7)
    for w in rng.normal(size=(20, 3)):
        assert sectional_curvature(p0, w) == pytest.approx(-1 / 8)
    p = MetricParams.from_eta(0.4, I1=1.5)
    eta = p.eta
    assert sectional_curvature(p, (1, 0, 0)) == pytest.approx(-(1 + 4 * eta) / (4 * 1.5 * (1 + eta) ** 2))
    assert sectional_curvature(p, (0, 1, 0)) == pytest.approx(-1 / (4 * 1.5 * (1 + eta) ** 2))
    with pytest.raises(DegeneratePlane):
        sectional_curvature(MetricParams(1, 1), (1, 1, 0))


def _koszul_curvature(params, w):
    """Sectional curvature of Ker Q(w, .) from the Levi-Civita connection of
    the left-invariant metric."""
    Q = params.matrix()
    C = np.zeros((3, 3, 3))  # [e_i, e_j] = C[i, j, :]
    for i in range(3):
        for j in range(3):
            C[i, j] = bracket(np.eye(3)[i], np.eye(3)[j])

    def br(x, y):
        return np.einsum("i,j,ijk->k", x, y, C)

    def q(x, y):
        return x @ Q @ y

    def nabla(x, y):
        # 2 Q(nabla_x y, z) = Q([x,y],z) - Q([y,z],x) + Q([z,x],y)
        rhs = np.array([q(br(x, y), z) - q(br(y, z), x) + q(br(z, x), y) for z in np.eye(3)])
        return np.linalg.solve(Q, rhs) / 2

    def R(x, y, z):
        return nabla(x, nabla(y, z)) - nabla(y, nabla(x, z)) - nabla(br(x, y), z)

    # basis of the plane Q(w, .) = 0
    n = Q @ np.asarray(w, float)
    u, s, vt = np.linalg.svd(n[None, :])
    a, b = vt[1], vt[2]
    num = q(R(a, b, b), a)
    den = q(a, a) * q(b, b) - q(a, b) ** 2
    return num / den


def test_sectional_curvature_matches_connection():
    rng = np.random.default_rng(8)
    for eta in (-0.4, 0.0, 0.3, 1.5):
        p = MetricParams.from_eta(eta, I1=1.3)
        for w in rng.normal(size=(10, 3)):
            assert sectional_curvature(p, w) == pytest.approx(_koszul_curvature(p, w), rel=1e-8)


@settings(max_examples=50)
@given(st.floats(0.1, 3), st.floats(-0.9, 2), st.floats(0, 2 * math.pi), vectors)
def test_sectional_curvature_axisymmetric(I1, eta, phi, w):
    p = MetricParams.from_eta(eta, I1=I1)
    if abs(lorentz_form(p, w)) < 1e-6 * (1 + np.dot(w, w)):
        return
    wr = (w[0], math.cos(phi) * w[1] - math.sin(phi) * w[2], math.sin(phi) * w[1] + math.cos(phi) * w[2])
    assert sectional_curvature(p, wr) == pytest.approx(sectional_curvature(p, w), rel=1e-12, abs=1e-12)


def test_group_exp_near_null_large_argument():
    # reference: exact Killing value through rationals; S = 1 + k/6 + O(k^2)
    from fractions import Fraction

    rng = np.random.default_rng(9)
    for _ in range(50):
        a = rng.uniform(100, 3000)
        th = rng.uniform(0, 2 * math.pi)
        x = (a, a * math.cos(th), a * math.sin(th))
        k = float((-Fraction(x[0]) ** 2 + Fraction(x[1]) ** 2 + Fraction(x[2]) ** 2) / 4)
        S = 1.0 + k / 6.0
        w = group_exp(None, x)[1].w
        assert abs(w - 0.5 * S * complex(x[1], x[2])) <= 4 * np.finfo(float).eps * abs(w)
