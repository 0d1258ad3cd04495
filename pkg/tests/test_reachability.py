import cmath
import math

import numpy as np
import pytest

from berger_ads.errors import RegimeError, ValidationError
from berger_ads.geodesics import light_like_boundary_c
from berger_ads.lie import IDENTITY, GroupPoint, MetricParams, exp_point, group_mult
from berger_ads.reachability import (
    admissible_cone_contains,
    attainable_contains,
    cone_length,
    cone_parameters,
    control_admissible,
    infinite_distance_witness,
    oblate_reach_plan,
    plan_endpoint,
    sample_admissible_trajectory,
)


def fd_velocity(g, u, d=1e-6):
    """``(cdot, wdot)`` of ``s -> g exp(s u)`` at ``s = 0``."""
    a = group_mult(g, exp_point(np.asarray(u) * d))
    b = group_mult(g, exp_point(np.asarray(u) * -d))
    return (a.c - b.c) / (2 * d), (complex(a.w) - complex(b.w)) / (2 * d)


def test_cone_examples():
    p = MetricParams(1, 1)
    ok, av = admissible_cone_contains(p, IDENTITY, (1.0, 0j))
    assert ok and av.interior and av.xi == 1.0 and av.omega == 0
    assert not admissible_cone_contains(p, IDENTITY, (0.0, 0j))[0]
    assert not admissible_cone_contains(p, IDENTITY, (-1.0, 0j))[0]
    for w0 in (0.5, 2.0 + 1j, -3j):
        base = GroupPoint(0.7, w0)
        ok, av = admissible_cone_contains(p, base, (1.0, 0j))
        r2 = 1 + abs(w0) ** 2
        assert ok
        assert av.xi == pytest.approx(r2)
        assert abs(av.omega) == pytest.approx(abs(w0) * math.sqrt(r2))
        assert cone_length(p, av) == pytest.approx(math.sqrt(r2))


def test_cone_parameters_invert_pushforward():
    rng = np.random.default_rng(51)
    for _ in range(30):
        g = GroupPoint(rng.normal(), complex(*rng.normal(size=2)))
        u = rng.normal(size=3)
        xi, om = cone_parameters(g, fd_velocity(g, u))
        assert np.allclose([2 * xi, 2 * om.real, 2 * om.imag], u, atol=1e-7)


def test_left_translation_keeps_interior():
    rng = np.random.default_rng(52)
    for eta in (0.0, 0.5):
        p = MetricParams.from_eta(eta)
        for _ in range(30):
            g = GroupPoint(rng.normal(), complex(*rng.normal(size=2)))
            th = rng.uniform(0, 6)
            u = (1.0, 0.7 * math.cos(th), 0.7 * math.sin(th))
            ok, av = admissible_cone_contains(p, g, fd_velocity(g, u))
            assert ok and av.interior


def test_control_admissible():
    p = MetricParams(1.0, 2.0)
    assert control_admissible(p, (1, 0, 0))
    assert control_admissible(p, (1, 1 / math.sqrt(2), 0))
    assert not control_admissible(p, (1, 0.8, 0))
    assert not control_admissible(p, (-1, 0, 0))


def test_attainable_examples():
    s = MetricParams(1, 1)
    v = attainable_contains(s, GroupPoint(math.pi / 2, 0j))
    assert v.in_attainable and v.longest_arc_exists
    v = attainable_contains(s, GroupPoint(math.pi, 0j))
    assert v.in_attainable and v.longest_arc_exists and not v.infinite_distance
    v = attainable_contains(s, GroupPoint(math.pi + 0.1, 0j))
    assert v.infinite_distance and not v.longest_arc_exists
    q = MetricParams.from_eta(0.1)
    c = light_like_boundary_c(q, 1.0)
    assert not attainable_contains(q, GroupPoint(c - 1e-6, 1.0)).in_attainable
    v = attainable_contains(q, GroupPoint(c, 1.0))
    assert v.in_attainable and v.on_boundary
    assert attainable_contains(q, GroupPoint(50.0, 1.0)).longest_arc_exists
    v = attainable_contains(MetricParams.from_eta(-0.5), GroupPoint(-5.0, 0j))
    assert v.in_attainable and not v.longest_arc_exists
    assert set(v.to_dict()) == {"attainable", "boundary", "exists", "infinite"}


def test_sampled_trajectories():
    p = MetricParams.from_eta(0.3)
    pts, ctl = sample_admissible_trajectory(p, 0, 0, 0.5)
    assert pts == [IDENTITY] and ctl == []
    for seed in range(50):
        pts, ctl = sample_admissible_trajectory(p, seed, 20, 0.3)
        assert all(control_admissible(p, u) for u in ctl)
        assert np.all(np.diff([q.c for q in pts]) > 0)
        assert all(attainable_contains(p, q).in_attainable for q in pts)
    a, _ = sample_admissible_trajectory(p, 7, 10, 0.3)
    b, _ = sample_admissible_trajectory(p, 7, 10, 0.3)
    assert a == b


def test_planner_examples():
    p = MetricParams.from_eta(-0.5)
    plan = oblate_reach_plan(p, GroupPoint(1.0, 0j))
    assert len(plan) == 1 and plan[0].u == (1.0, 0.0, 0.0) and plan[0].dt == pytest.approx(2.0)
    m = math.sqrt(0.5)
    top = math.atan(math.sqrt(0.5) / m)
    plan = oblate_reach_plan(p, GroupPoint(top + 0.1, 0j))
    assert plan_endpoint(plan).distance(GroupPoint(top + 0.1, 0j)) <= 1e-6
    target = GroupPoint(-1.0, 0j)
    plan = oblate_reach_plan(p, target)
    assert plan_endpoint(plan).distance(target) <= 1e-6
    assert all(control_admissible(p, s.u) for s in plan)
    assert plan[0].to_dict()["dt"] == plan[0].dt


@pytest.mark.parametrize("eta", [-0.8, -0.3, -0.1])
def test_planner_window(eta):
    p = MetricParams.from_eta(eta)
    rng = np.random.default_rng(53)
    for _ in range(10):
        t = GroupPoint(rng.uniform(-3, 3), 2 * math.sqrt(rng.uniform()) * cmath.exp(1j * rng.uniform(0, 6)))
        assert plan_endpoint(oblate_reach_plan(p, t)).distance(t) <= 1e-6


def test_planner_regime_gate():
    with pytest.raises(RegimeError):
        oblate_reach_plan(MetricParams(1, 1), GroupPoint(1.0, 0j))
    with pytest.raises(ValidationError):
        oblate_reach_plan(MetricParams.from_eta(-0.5, n=2), GroupPoint(1.0, np.zeros(2, complex)))


def test_witness_validation():
    s = MetricParams(1, 1)
    with pytest.raises(RegimeError):
        infinite_distance_witness(MetricParams.from_eta(0.2), GroupPoint(5.0, 0.5), 10)
    with pytest.raises(ValidationError):
        infinite_distance_witness(s, GroupPoint(1.0, 0.5), 10)


def test_witness_small_target():
    s = MetricParams(1, 1)
    target = GroupPoint(math.pi - math.atan(2.0) + 0.3, 2.0)
    wit = infinite_distance_witness(s, target, 5.0)
    assert wit.length > 5.0
    assert wit.endpoint().distance(target) <= 1e-9
