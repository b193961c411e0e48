import math
import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circsep.geom import Circle, InvalidInput, Point2, Segment
from circsep.oracle import gen_maxgap, gen_random, verify_circle
from circsep.separator import (
    Contact,
    InsufficientSites,
    check_edge_candidate,
    check_vertex_candidate,
    classify_contacts,
    find_all_largest,
    find_all_largest_with_info,
    prepare,
)

P = Point2


def pt(x, y):
    return Segment(P(x, y), P(x, y))


def unit_triangle():
    return [pt(math.cos(a), math.sin(a)) for a in (math.pi / 2, 7 * math.pi / 6, 11 * math.pi / 6)]


def quiet(fn, *a, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InsufficientSites)
        return fn(*a, **kw)


def find(records, x, y, r, tol=1e-9):
    return [s for s in records if math.dist(s.circle.center, (x, y)) < tol and abs(s.circle.radius - r) < tol]


def test_maxgap_fixture():
    P_, Q_ = gen_maxgap([0, 1, 4, 5])
    recs = quiet(find_all_largest, P_, Q_)
    hit = find(recs, 2.5, 2.275, 2.725)
    assert len(hit) == 1
    rec = hit[0]
    assert rec.condition == "C1"
    pts = sorted((round(k.point.x, 9), round(k.point.y, 9)) for k in rec.contacts)
    assert pts == [(1.0, 0.0), (2.5, 5.0), (4.0, 0.0)]
    top = [k for k in rec.contacts if k.point.y == pytest.approx(5.0)][0]
    assert top.kind == "tangent"
    assert max(recs, key=lambda s: s.circle.radius) is rec


def test_three_points_unit_circle():
    recs = quiet(find_all_largest, [pt(0, 0)], unit_triangle())
    hit = find(recs, 0, 0, 1)
    assert len(hit) == 1 and hit[0].condition == "C1" and hit[0].source[0] == "vertex"


def test_parallel_segments_give_two_extremes():
    Q = [Segment(P(-2, 1), P(2, 1)), Segment(P(-2, -1), P(2, -1))]
    recs = quiet(find_all_largest, [pt(1, 0)], Q)
    assert len(recs) == 2
    assert {(round(s.circle.center.x, 9), round(s.circle.center.y, 9)) for s in recs} == {(0.0, 0.0), (2.0, 0.0)}
    assert all(s.condition == "C2p" and s.circle.radius == pytest.approx(1) for s in recs)
    assert all(s.source[0] == "edge" for s in recs)


def test_square_double_diametral():
    recs = quiet(find_all_largest, [pt(0, 0)], [pt(x, y) for x in (-1, 1) for y in (-1, 1)])
    hit = find(recs, 0, 0, math.sqrt(2))
    assert len(hit) == 1 and hit[0].condition == "C1pp"


def test_far_point_gives_nothing():
    assert quiet(find_all_largest, [pt(0, 2)], unit_triangle()) == []


def test_vertex_candidate_api():
    run = prepare([pt(0, 0)], unit_triangle())
    got = [check_vertex_candidate(run, v) for v in range(len(run.vor.vertices))]
    assert [g.condition for g in got if g is not None] == ["C1"]
    far = prepare([pt(0, 2)], unit_triangle())
    assert all(check_vertex_candidate(far, v) is None for v in range(len(far.vor.vertices)))


def test_edge_candidate_api():
    Q = [Segment(P(-2, 1), P(2, 1)), Segment(P(-2, -1), P(2, -1))]
    run = prepare([pt(1, 0)], Q)
    hits = [h for e in range(len(run.vor.edges)) for h in check_edge_candidate(run, e)]
    # (2, 0) is a degree-four vertex, so two edges report it before deduplication
    assert {(round(h.circle.center.x, 9), round(h.circle.center.y, 9)) for h in hits} == {(0.0, 0.0), (2.0, 0.0)}
    assert all(len(check_edge_candidate(run, e)) <= 2 for e in range(len(run.vor.edges)))


def contact(x, y, role="outside", kind="through", s="Q"):
    return Contact(s, None, P(x, y), kind, 0, role)


def test_classify_examples():
    c = Circle(P(2.5, 2.275), 2.725)
    assert classify_contacts(c, [contact(1, 0), contact(4, 0), contact(2.5, 5, kind="tangent")]) == "C1"
    c = Circle(P(0, 0), 1.0)
    ks = [contact(0, 1, kind="tangent"), contact(0, -1, kind="tangent"), contact(1, 0, "inside", s="P")]
    assert classify_contacts(c, ks) == "C2p"
    clustered = [contact(math.cos(math.radians(a)), math.sin(math.radians(a))) for a in (0, 20, 40)]
    assert classify_contacts(c, clustered) is None


def test_invalid_inputs():
    with pytest.raises(InvalidInput, match="P must be nonempty"):
        find_all_largest([], [pt(0, 0)])
    with pytest.raises(InvalidInput, match=r"P\[0\] and Q\[0\]"):
        find_all_largest([Segment(P(0, 0), P(2, 2))], [Segment(P(0, 2), P(2, 0))])


def test_warns_when_outside_set_is_tiny():
    with pytest.warns(InsufficientSites):
        find_all_largest([pt(0, 0)], unit_triangle())


def test_threads_do_not_change_output():
    P_, Q_ = gen_random(60, 3)
    a = quiet(find_all_largest, P_, Q_, threads=1)
    b = quiet(find_all_largest, P_, Q_, threads=4)
    assert a == b


def test_output_count_bounded_by_voronoi_size():
    for seed in range(5):
        P_, Q_ = gen_random(40, seed)
        recs, infos = quiet(find_all_largest_with_info, P_, Q_)
        for info in infos:
            assert info.outputs <= info.voronoi_vertices + 2 * info.voronoi_edges


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(4, 40))
def test_outputs_separate_and_are_local_maxima(seed, n):
    P_, Q_ = gen_random(n, seed)
    for rec in quiet(find_all_largest, P_, Q_):
        sep, local = verify_circle(P_, Q_, rec.inside, rec.circle.center, rec.circle.radius)
        assert sep and local
        assert len(rec.contacts) >= 3
