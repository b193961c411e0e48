import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circsep.circle_space import DegenerateCurve, LiftingHalfplane, curve_from_sites
from circsep.geom import OrientedLine, Point2
from circsep.hierarchy import (
    QueryStats,
    build_hierarchy,
    naive_query_curve,
    query_curve,
    query_vertical,
)


def near_ellipse(n, rng):
    a, b = rng.uniform(0.5, 2), rng.uniform(0.5, 2)
    out = []
    for _ in range(n):
        t = rng.uniform(0, 2 * math.pi)
        out.append((a * math.cos(t) * (1 + 0.05 * rng.random()), b * math.sin(t) * (1 + 0.05 * rng.random())))
    return out


def random_curve(rng, kind):
    u = lambda: (rng.uniform(-3, 3), rng.uniform(-3, 3))
    side = lambda: rng.choice(["left", "right"])
    if kind == 0:
        return curve_from_sites(Point2(*u()), Point2(*u()))
    if kind == 1:
        return curve_from_sites(Point2(*u()), LiftingHalfplane(OrientedLine.through(u(), u()), side()))
    return curve_from_sites(
        LiftingHalfplane(OrientedLine.through(u(), u()), side()),
        LiftingHalfplane(OrientedLine.through(u(), u()), side()),
    )


@pytest.mark.parametrize("n", [1, 2, 3, 5, 16, 100])
def test_vertical_query_finds_farthest_point(n):
    rng = random.Random(n)
    h = build_hierarchy(near_ellipse(n, rng))
    for _ in range(50):
        q = (rng.uniform(-4, 4), rng.uniform(-4, 4))
        hit = query_vertical(h, q)
        far = max(math.dist(q, p) for p in h.hull)
        assert hit.point.z == pytest.approx(far, rel=1e-12)
        assert all(math.dist(q, h.hull[o]) == pytest.approx(far, rel=1e-9) for o in hit.owners)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([3, 8, 40, 128]), st.integers(0, 2))
def test_curve_query_matches_naive_scan(seed, n, kind):
    rng = random.Random(seed)
    h = build_hierarchy(near_ellipse(n, rng))
    try:
        curve = random_curve(rng, kind)
    except DegenerateCurve:
        return
    got = query_curve(h, curve)
    want = naive_query_curve(h.hull, curve)
    assert len(got) <= 2
    assert len(got) == len(want)
    for a, (t, p) in zip(got, want):
        assert math.dist(a.point.xy, p.xy) <= 1e-7 * max(1.0, abs(t))


@pytest.mark.parametrize("exp", [4, 8, 11])
def test_shape_bounds(exp):
    n = 2**exp
    rng = random.Random(exp)
    th = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
    h = build_hierarchy([(math.cos(t), math.sin(t)) for t in th])
    assert h.depth <= 3 * math.log2(n) + 4
    assert h.size() <= 5 * n
    for _ in range(100):
        st_ = QueryStats()
        query_vertical(h, (rng.uniform(-3, 3), rng.uniform(-3, 3)), st_)
        assert st_.visited <= 40 * math.log2(n)
