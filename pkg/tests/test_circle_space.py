import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from circsep.circle_space import (
    CurveOnCone,
    DegenerateCurve,
    HyperbolaCurve,
    LiftingHalfplane,
    LineCurve,
    ParabolaCurve,
    curve_from_sites,
    inside_intervals,
    intersect_curve_cone,
    lift_circle,
    unlift,
)
from circsep.geom import Circle, OrientedLine, Point2

P = Point2
coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
param = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


def test_lift_round_trip():
    c = Circle(P(1.5, -2.0), 3.0)
    assert unlift(lift_circle(c)) == c
    with pytest.raises(ValueError):
        lift_circle(Circle(P(0, 0), -1))


def test_curve_kinds():
    ln = OrientedLine.through((0, 0), (1, 0))
    ln2 = OrientedLine.through((0, 0), (0, 1))
    assert isinstance(curve_from_sites(P(0, 0), P(1, 0)), HyperbolaCurve)
    assert isinstance(curve_from_sites(P(0, 1), LiftingHalfplane(ln, "left")), ParabolaCurve)
    assert isinstance(curve_from_sites(LiftingHalfplane(ln, "left"), LiftingHalfplane(ln2, "right")), LineCurve)


def test_degenerate_curves():
    with pytest.raises(DegenerateCurve):
        curve_from_sites(P(1, 1), P(1, 1))
    ln = OrientedLine.through((0, 0), (1, 0))
    with pytest.raises(DegenerateCurve):
        curve_from_sites(P(0, -1), LiftingHalfplane(ln, "left"))


@given(coord, coord, coord, coord, param)
def test_hyperbola_points_pass_through_both(ax, ay, bx, by, t):
    if math.hypot(ax - bx, ay - by) < 1e-3:
        return
    c = curve_from_sites(P(ax, ay), P(bx, by))
    p = c.at(t)
    assert math.dist(p.xy, (ax, ay)) == pytest.approx(p.z, rel=1e-9, abs=1e-9)
    assert math.dist(p.xy, (bx, by)) == pytest.approx(p.z, rel=1e-9, abs=1e-9)
    assert c.param_of(p.xy) == pytest.approx(t, rel=1e-9, abs=1e-9)


@given(coord, coord, st.floats(0.1, 10), param)
def test_parabola_points_touch_point_and_line(px, py, h, t):
    ln = OrientedLine.through((px - 1, py - h), (px + 3, py - h))
    c = curve_from_sites(P(px, py), LiftingHalfplane(ln, "left"))
    p = c.at(t)
    assert math.dist(p.xy, (px, py)) == pytest.approx(p.z, rel=1e-9, abs=1e-9)
    assert ln.signed_distance(p.xy) == pytest.approx(p.z, rel=1e-9, abs=1e-9)


def test_line_curve_bisects_angle():
    l1 = OrientedLine.through((0, 0), (1, 0))
    l2 = OrientedLine.through((0, 0), (0, 1))
    c = curve_from_sites(LiftingHalfplane(l1, "left"), LiftingHalfplane(l2, "right"))
    lo, hi = c.domain
    t = 1.0 if hi > 1.0 else 0.5 * (lo + hi)
    p = c.at(t)
    assert l1.signed_distance(p.xy) == pytest.approx(p.z)
    assert -l2.signed_distance(p.xy) == pytest.approx(p.z)


def test_intersect_with_cone():
    c = curve_from_sites(P(-1, 0), P(1, 0))  # centers on the y axis
    hits = intersect_curve_cone(c, P(0, 2))
    # (0, y) equidistant from (1, 0) and (0, 2): 1 + y^2 = (2 - y)^2 -> y = 3/4
    assert len(hits) == 1
    assert hits[0].point.y == pytest.approx(0.75)
    with pytest.raises(CurveOnCone):
        intersect_curve_cone(c, P(1, 0))


def test_inside_intervals_match_sampling():
    c = curve_from_sites(P(-1, 0), P(1, 0))
    apex = P(0.3, 1.7)
    ivs = inside_intervals(c, apex)
    for t in [x / 7 for x in range(-70, 71)]:
        p = c.at(t)
        inside = math.dist(p.xy, apex) < p.z - 1e-9
        outside = math.dist(p.xy, apex) > p.z + 1e-9
        covered = any(lo <= t <= hi for lo, hi, _, _ in ivs)
        if inside:
            assert covered
        if outside:
            assert not covered
