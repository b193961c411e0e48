import math

import pytest

from circsep.geom import Point2, Segment, interiors_disjoint
from circsep.oracle import (
    TooLarge,
    OracleContact,
    classify_by_angles,
    default_grid,
    gen_equispaced,
    gen_maxgap,
    gen_random,
    oracle_enumerate,
    oracle_local_maxima,
)

P = Point2


def pt(x, y):
    return Segment(P(x, y), P(x, y))


def unit_triangle():
    return [pt(math.cos(a), math.sin(a)) for a in (math.pi / 2, 7 * math.pi / 6, 11 * math.pi / 6)]


def tangency_radius(gap, width):
    """Circle through two points `gap` apart on y=0 and tangent to y=width, by bisection on the center height."""
    lo, hi = -width, width
    for _ in range(200):
        y = 0.5 * (lo + hi)
        if math.hypot(gap / 2, y) > width - y:
            hi = y
        else:
            lo = y
    return width - 0.5 * (lo + hi)


def test_grid_oracle_maxgap():
    P_, Q_ = gen_maxgap([0, 1, 4, 5])
    g = default_grid(P_, Q_)
    found = oracle_local_maxima(P_, Q_, g)
    r_exact = tangency_radius(3.0, 5.0)
    assert r_exact == pytest.approx(2.725, abs=1e-12)
    best = max(found, key=lambda cr: cr[1])
    assert math.dist(best[0], (2.5, 2.275)) < 1e-6
    assert best[1] == pytest.approx(r_exact, abs=1e-6)


def test_grid_oracle_triangle():
    found = oracle_local_maxima([pt(0, 0)], unit_triangle())
    assert any(math.dist(c, (0, 0)) < 1e-6 and abs(r - 1) < 1e-6 for c, r in found)


def test_grid_oracle_infeasible():
    assert oracle_local_maxima([pt(10, 0)], [pt(10, 0)]) == []


def test_enumerate_fixtures():
    got = oracle_enumerate([pt(0, 0)], unit_triangle())
    assert any(math.dist(o.circle.center, (0, 0)) < 1e-9 and o.condition == "C1" for o in got)
    P_, Q_ = gen_maxgap([0, 1, 4, 5])
    got = oracle_enumerate(P_, Q_)
    assert sorted((round(o.circle.center.x, 6), round(o.circle.radius, 6)) for o in got) == [
        (0.5, 2.525),
        (2.5, 2.725),
        (4.5, 2.525),
    ]
    Q = [Segment(P(-2, 1), P(2, 1)), Segment(P(-2, -1), P(2, -1))]
    got = oracle_enumerate([pt(1, 0)], Q)
    assert [(round(o.circle.center.x, 9), o.condition) for o in got] == [(0.0, "C2p"), (2.0, "C2p")]


def test_enumerate_cap():
    P_, Q_ = gen_random(60, 0)
    with pytest.raises(TooLarge):
        oracle_enumerate(P_, Q_)


@pytest.mark.parametrize("seed", range(6))
def test_enumerated_circles_are_grid_maxima(seed):
    P_, Q_ = gen_random(8, seed)
    g = default_grid(P_, Q_)
    enum = oracle_enumerate(P_, Q_)
    for inside in "PQ":
        grid = oracle_local_maxima(P_, Q_, g, inside)
        for e in (e for e in enum if e.inside == inside):
            near = min(max(math.dist(c, e.circle.center), abs(r - e.circle.radius)) for c, r in grid)
            assert near <= 10 * g.step


def test_classify_by_angles():
    on = lambda a: P(math.cos(math.radians(a)), math.sin(math.radians(a)))
    tri = [OracleContact("Q", on(a), "through", "outside") for a in (90, 210, 330)]
    assert classify_by_angles(P(0, 0), 1.0, tri) == "C1"
    clustered = [OracleContact("Q", on(a), "through", "outside") for a in (0, 20, 40)]
    assert classify_by_angles(P(0, 0), 1.0, clustered) is None


def test_generators():
    assert gen_random(10, 7) == gen_random(10, 7)
    P_, Q_ = gen_random(300, 1)
    assert len(P_) + len(Q_) == 300
    assert interiors_disjoint(P_ + Q_)[0]
    assert all(math.hypot(*p) <= 1 + 1e-12 for s in P_ for p in s)
    assert all(1.5 - 1e-12 <= math.hypot(*p) <= 3 + 1e-12 for s in Q_ for p in s)
    P_, Q_ = gen_maxgap([0, 1])
    assert P_ == [pt(0.5, 0.5)] and Q_[-1] == Segment(P(0, 1), P(1, 1))
    P_, Q_ = gen_equispaced(20)
    assert [s.a.x for s in Q_[:-1]] == list(range(20))
    with pytest.raises(ValueError):
        gen_maxgap([3, 3])
