"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``CRITERION k: PASS|FAIL ...`` line (also repeated in
the pytest terminal summary) before asserting.  The full module takes roughly
half an hour on one core; the bulk is the 1000-instance property sweep and the
benchmark at n = 32768.
"""

import math
import random
import time
import warnings

import pytest

from circsep.circle_space import DegenerateCurve, LiftingHalfplane, curve_from_sites
from circsep.cli import bench_rows, compare_with_oracle, doubling_ratios
from circsep.geom import OrientedLine, Point2, Segment
from circsep.hierarchy import QueryStats, build_hierarchy, naive_query_curve, query_curve, query_vertical
from circsep.oracle import gen_equispaced, gen_maxgap, gen_random, oracle_enumerate, verify_circle
from circsep.separator import InsufficientSites, find_all_largest, find_all_largest_with_info

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.slow


def report(k, ok, detail):
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def solve(P, Q):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InsufficientSites)
        return find_all_largest_with_info(P, Q)


@pytest.fixture(scope="module")
def oracle_runs():
    """200 small random instances with the main output, the oracle output and timings."""
    runs = []
    t0 = time.perf_counter()
    for k in range(200):
        n = 4 + (7 * k) % 27
        P, Q = gen_random(n, 500 + k)
        recs, infos = solve(P, Q)
        expected = oracle_enumerate(P, Q)
        runs.append((n, P, Q, recs, infos, expected))
    return runs, time.perf_counter() - t0


def test_criterion_1_oracle_equivalence(oracle_runs):
    runs, seconds = oracle_runs
    misses = extras = 0
    for n, P, Q, recs, infos, expected in runs:
        missing, extra = compare_with_oracle(recs, expected)
        misses += len(missing)
        extras += len(extra)
    total = sum(len(r[5]) for r in runs)
    sizes = sorted({r[0] for r in runs})
    ok = misses == 0 and extras == 0 and seconds < 300
    report(1, ok, f"200 instances n={sizes[0]}..{sizes[-1]}, {total} oracle circles, misses={misses} extras={extras}, {seconds:.1f}s")


def tangency_radius(gap, width):
    lo, hi = -width, width
    for _ in range(200):
        y = 0.5 * (lo + hi)
        if math.hypot(gap / 2, y) > width - y:
            hi = y
        else:
            lo = y
    return width - 0.5 * (lo + hi)


def test_criterion_2_maxgap():
    bad, worst = 0, 0.0
    for k in range(50):
        rng = random.Random(1000 + k)
        X = sorted(rng.uniform(-50, 50) for _ in range(100))
        recs, _ = solve(*gen_maxgap(X))
        top = max(recs, key=lambda s: s.circle.radius)
        lowest = sorted((c.point.x, c.point.y) for c in sorted(top.contacts, key=lambda c: c.point.y)[:2])
        i = max(range(99), key=lambda j: X[j + 1] - X[j])
        r = tangency_radius(X[i + 1] - X[i], X[-1] - X[0])
        err = abs(r - top.circle.radius)
        worst = max(worst, err)
        pts_ok = all(math.dist(a, b) <= 1e-9 for a, b in zip(lowest, [(X[i], 0.0), (X[i + 1], 0.0)]))
        if not (pts_ok and err <= 1e-9):
            bad += 1
    report(2, bad == 0, f"50 sets |X|=100, wrong={bad}, worst radius error {worst:.2e}")


def _curve(rng, kind):
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


def test_criterion_3_curve_queries():
    rng = random.Random(3)
    checks = too_many = disagree = 0
    worst = 0.0
    while checks < 10_000:
        n = rng.randint(1, 256)
        a, b = rng.uniform(0.5, 2), rng.uniform(0.5, 2)
        pts = []
        for _ in range(n):
            t = rng.uniform(0, 2 * math.pi)
            pts.append((a * math.cos(t) * (1 + 0.05 * rng.random()), b * math.sin(t) * (1 + 0.05 * rng.random())))
        h = build_hierarchy(pts)
        for j in range(50):
            try:
                curve = _curve(rng, j % 3)
            except DegenerateCurve:
                continue
            got = query_curve(h, curve)
            want = naive_query_curve(h.hull, curve)
            checks += 1
            too_many += len(got) > 2
            if len(got) != len(want):
                disagree += 1
                continue
            for g, (t, p) in zip(got, want):
                d = math.dist(g.point.xy, p.xy)
                worst = max(worst, d)
                if d > 1e-7:
                    disagree += 1
    ok = too_many == 0 and disagree == 0
    report(3, ok, f"{checks} curves, >2 hits: {too_many}, disagreements: {disagree}, worst offset {worst:.1e}")


def test_criterion_4_hierarchy_shape():
    rng = random.Random(4)
    worst = []
    ok = True
    for e in range(4, 17):
        n = 2**e
        th = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
        h = build_hierarchy([(math.cos(t), math.sin(t)) for t in th])
        visited = 0
        for _ in range(200):
            st = QueryStats()
            query_vertical(h, (rng.uniform(-3, 3), rng.uniform(-3, 3)), st)
            visited = max(visited, st.visited)
        ok &= h.depth <= 3 * e + 4 and h.size() <= 5 * n and visited <= 40 * e
        worst.append((n, h.depth, h.size() / n, visited / e))
    depth_ratio = max(d / (3 * math.log2(n) + 4) for n, d, _, _ in worst)
    size_ratio = max(s for _, _, s, _ in worst)
    visit_ratio = max(v for _, _, _, v in worst)
    report(4, ok, f"n=2^4..2^16, max depth/(3log2n+4)={depth_ratio:.2f}, max size/n={size_ratio:.2f}, max visited/log2n={visit_ratio:.1f}")


def test_criterion_5_output_count(oracle_runs):
    runs, _ = oracle_runs
    over = 0
    for *_, recs, infos, _exp in runs:
        over += sum(i.outputs > i.voronoi_vertices + 2 * i.voronoi_edges for i in infos)
    recs, infos = solve(*gen_equispaced(20))
    for i in infos:
        over += i.outputs > i.voronoi_vertices + 2 * i.voronoi_edges
    ok = over == 0 and len(recs) >= 18
    report(5, ok, f"bound violations {over} over 201 instances, equispaced n=20 outputs {len(recs)} (need >= 18)")


def _similarity(p, th, s, t):
    c, si = math.cos(th), math.sin(th)
    return Point2(s * (c * p[0] - si * p[1]) + t[0], s * (si * p[0] + c * p[1]) + t[1])


def test_criterion_6_separation_local_max_equivariance():
    bad_sep = bad_probe = bad_map = circles = 0
    worst = 0.0
    for k in range(1000):
        rng = random.Random(60_000 + k)
        P, Q = gen_random(rng.randint(4, 200), 70_000 + k)
        recs, _ = solve(P, Q)
        circles += len(recs)
        for r in recs:
            sep, local = verify_circle(P, Q, r.inside, r.circle.center, r.circle.radius, tol=1e-6)
            bad_sep += not sep
            bad_probe += not local
        th, s = rng.uniform(0, 2 * math.pi), rng.uniform(0.5, 2.0)
        t = (rng.uniform(-10, 10), rng.uniform(-10, 10))
        move = lambda S: [Segment(_similarity(x.a, th, s, t), _similarity(x.b, th, s, t)) for x in S]
        moved, _ = solve(move(P), move(Q))
        if len(moved) != len(recs):
            bad_map += 1
            continue
        for r in recs:
            c = _similarity(r.circle.center, th, s, t)
            err = min(
                (max(math.dist(c, m.circle.center), abs(s * r.circle.radius - m.circle.radius))
                 for m in moved if m.inside == r.inside and m.condition == r.condition),
                default=math.inf,
            )
            worst = max(worst, err)
            bad_map += err > 1e-7
    ok = bad_sep == 0 and bad_probe == 0 and bad_map == 0
    report(6, ok, f"1000 instances, {circles} circles, separation fails {bad_sep}, probe fails {bad_probe}, "
                  f"similarity mismatches {bad_map}, worst mapped error {worst:.1e}")


def test_criterion_7_performance_trend():
    rows = bench_rows([4096, 8192, 16384, 32768], seed=1)
    ratios = [r for _, _, r in doubling_ratios(rows)]
    per_n = [(row["voronoi_vertices"] + row["voronoi_edges"]) / row["n"] for row in rows]
    ok = max(ratios) <= 2.6
    times = ", ".join(f"{row['n']}:{row['total_s']:.1f}s" for row in rows)
    report(7, ok, f"doubling ratios {' '.join(f'{r:.2f}' for r in ratios)} (times {times}; "
                  f"Voronoi features per segment {min(per_n):.2f}..{max(per_n):.2f})")
