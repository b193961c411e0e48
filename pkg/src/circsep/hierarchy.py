"""Level hierarchy over the farthest-point Voronoi diagram of a convex polygon.

The envelope max_v |q - v| over the hull vertices is stored as a sequence of
vertex subsets S_1 ⊂ S_2 ⊂ ... ⊂ S_k, where each step removes a set of pairwise
nonadjacent, low-degree cells.  Every cell is split into angular sectors as
seen from its own site (a farthest-point cell is star-shaped outward from its
site), and each sector points to the few removed sites whose cells can claim
part of it one level down.  That gives constant work per level for

* ``query_vertical``: the farthest site from a query point, and
* ``query_curve``: the points where a circle family leaves or enters the set of
  circles enclosing every hull vertex.
"""

import bisect
import math
from typing import NamedTuple, Optional

from .circle_space import (
    CirclePoint,
    ParabolaCurve,
    end_gap_sign,
    inside_intervals,
    intersect_intervals,
)
from .fvor import convex_hull, furthest_voronoi
from .geom import Point2

TWO_PI = 2.0 * math.pi
BASE_SIZE = 4
MAX_REMOVED_DEGREE = 9
MIN_REMOVED_FRACTION = 1.0 / 20.0


class EnvelopeHit(NamedTuple):
    point: CirclePoint
    owners: tuple  # hull indices at distance z from (x, y): 1 = face, 2 = edge, 3+ = vertex
    t: Optional[float] = None

    @property
    def feature(self) -> str:
        return {1: "face", 2: "edge"}.get(len(self.owners), "vertex")


class Cell(NamedTuple):
    ref: float  # reference angle; sector angles are relative to it
    los: list  # sorted sector start angles
    sectors: list  # (neighbor, lo, hi)


class Level(NamedTuple):
    sites: list  # hull indices in CCW order
    prev: dict
    next: dict
    cells: dict  # hull index -> Cell
    removed: frozenset  # sites absent from the previous level
    links: dict  # (site of previous level, sector index) -> removed sites of this level


class QueryStats:
    def __init__(self):
        self.visited = 0


class Hierarchy(NamedTuple):
    hull: list
    levels: list

    @property
    def depth(self) -> int:
        return len(self.levels)

    def size(self) -> int:
        return sum(len(lv.sites) for lv in self.levels)

    def max_fanout(self) -> int:
        return max((len(v) for lv in self.levels for v in lv.links.values()), default=0)


def _wrap(a: float) -> float:
    a = math.fmod(a + math.pi, TWO_PI)
    if a < 0:
        a += TWO_PI
    return a - math.pi


def _angle(dx: float, dy: float) -> float:
    return math.atan2(dy, dx)


def _cells(pts: list, d) -> list:
    """Angular sector decomposition of each cell of the diagram ``d``."""
    m = len(pts)
    if m == 1:
        return [Cell(0.0, [], [])]
    if m == 2:
        out = []
        for v in range(2):
            o = pts[1 - v]
            ref = _angle(o.x - pts[v].x, o.y - pts[v].y)
            out.append(Cell(ref, [-0.5 * math.pi], [(1 - v, -0.5 * math.pi, 0.5 * math.pi)]))
        return out
    out = []
    for v in range(m):
        p = pts[v]
        fan = d.fans[v]
        nx, pv = pts[(v + 1) % m], pts[(v - 1) % m]
        # unbounded edges leave along the inward normals of the two hull edges at v
        d_next = (-(nx.y - p.y), nx.x - p.x)
        d_prev = (-(p.y - pv.y), p.x - pv.x)
        ln, lp = math.hypot(*d_next), math.hypot(*d_prev)
        rx, ry = d_next[0] / ln + d_prev[0] / lp, d_next[1] / ln + d_prev[1] / lp
        ref = _angle(rx, ry)
        raw = []
        for u, left, right in fan:
            if left is None:
                a0 = _angle(*d_next)
            else:
                c = d.vertices[d.tri_vertex[left]].center
                a0 = _angle(c.x - p.x, c.y - p.y)
            if right is None:
                a1 = _angle(*d_prev)
            else:
                c = d.vertices[d.tri_vertex[right]].center
                a1 = _angle(c.x - p.x, c.y - p.y)
            a0, a1 = _wrap(a0 - ref), _wrap(a1 - ref)
            raw.append((min(a0, a1), max(a0, a1), u))
        raw.sort()
        sectors = [(u, lo, hi) for lo, hi, u in raw]
        out.append(Cell(ref, [s[1] for s in sectors], sectors))
    return out


def _independent_set(d, m: int) -> set:
    deg = [len(d.fans[v]) for v in range(m)]
    order = sorted((v for v in range(m) if deg[v] <= MAX_REMOVED_DEGREE), key=lambda v: (deg[v], v))
    blocked = [False] * m
    chosen = set()
    for v in order:
        if blocked[v]:
            continue
        chosen.add(v)
        blocked[v] = True
        for u, _, _ in d.fans[v]:
            blocked[u] = True
    if len(chosen) < MIN_REMOVED_FRACTION * m:
        chosen = {min(range(m), key=lambda v: (deg[v], v))}
    return chosen


def _overlap(a0, a1, b0, b1, tol=1e-9) -> bool:
    return a0 <= b1 + tol and b0 <= a1 + tol


def build_hierarchy(points) -> Hierarchy:
    """Build the level structure for the convex hull of ``points``."""
    hull = convex_hull(points)
    n = len(hull)
    sets = [list(range(n))]
    while len(sets[-1]) > BASE_SIZE:
        S = sets[-1]
        d = furthest_voronoi([hull[g] for g in S])
        R = _independent_set(d, len(S))
        sets.append([g for i, g in enumerate(S) if i not in R])
    sets.reverse()

    levels = []
    prev_cells = None
    for li, S in enumerate(sets):
        pts = [hull[g] for g in S]
        d = furthest_voronoi(pts)
        local = _cells(pts, d)
        cells = {}
        for i, g in enumerate(S):
            c = local[i]
            cells[g] = Cell(c.ref, c.los, [(S[u], lo, hi) for u, lo, hi in c.sectors])
        m = len(S)
        prv = {S[i]: S[(i - 1) % m] for i in range(m)}
        nxt = {S[i]: S[(i + 1) % m] for i in range(m)}
        removed = frozenset(S) - frozenset(sets[li - 1]) if li > 0 else frozenset()
        links = {}
        if li > 0:
            for v in sets[li - 1]:
                old, new = prev_cells[v], cells[v]
                shift = _wrap(new.ref - old.ref)
                last = len(new.sectors) - 1
                for k, (u, lo, hi) in enumerate(new.sectors):
                    if u not in removed:
                        continue
                    lo, hi = lo + shift, hi + shift
                    # an unbounded edge to a removed hull neighbour: the rays beyond
                    # it also change owner, so the claim extends to the cell's end
                    if k == 0 and u in (prv[v], nxt[v]):
                        lo = -math.inf
                    if k == last and u in (prv[v], nxt[v]):
                        hi = math.inf
                    for si, (_, olo, ohi) in enumerate(old.sectors):
                        if _overlap(lo, hi, olo, ohi) or _overlap(lo - TWO_PI, hi - TWO_PI, olo, ohi) \
                                or _overlap(lo + TWO_PI, hi + TWO_PI, olo, ohi):
                            links.setdefault((v, si), []).append(u)
            links = {k: tuple(sorted(set(v))) for k, v in links.items()}
        levels.append(Level(list(S), prv, nxt, cells, removed, links))
        prev_cells = cells
    return Hierarchy(hull, levels)


# -- point location -------------------------------------------------------------

def _locate_sector(h: Hierarchy, level: Level, f: int, x) -> int:
    cell = level.cells[f]
    if not cell.sectors:
        return 0
    p = h.hull[f]
    dx, dy = x[0] - p.x, x[1] - p.y
    if dx == 0.0 and dy == 0.0:
        return 0
    a = _wrap(_angle(dx, dy) - cell.ref)
    i = bisect.bisect_right(cell.los, a) - 1
    return min(max(i, 0), len(cell.sectors) - 1)


def _dist(h: Hierarchy, g: int, x) -> float:
    p = h.hull[g]
    return math.hypot(x[0] - p.x, x[1] - p.y)


def _locate_base(h: Hierarchy, x, stats: QueryStats):
    lv = h.levels[0]
    best = max(lv.sites, key=lambda g: (_dist(h, g, x), -g))
    stats.visited += len(lv.sites)
    return best, _locate_sector(h, lv, best, x)


def _step(h: Hierarchy, li: int, f: int, sec: int, x, stats: QueryStats):
    """Refine a location at level li-1 to level li."""
    lv = h.levels[li]
    cands = lv.links.get((f, sec), ())
    stats.visited += 1 + len(cands)
    best, bd = f, _dist(h, f, x)
    for u in cands:
        du = _dist(h, u, x)
        if du > bd:
            best, bd = u, du
    return best, _locate_sector(h, lv, best, x)


def _owners(h: Hierarchy, f: int, sec: int, x, z: float, extra=()) -> tuple:
    lv = h.levels[-1]
    tol = 1e-9 * max(1.0, z)
    cand = {f, *extra}
    sectors = lv.cells[f].sectors
    for si in (sec - 1, sec, sec + 1):
        if 0 <= si < len(sectors):
            cand.add(sectors[si][0])
    for g in list(cand):
        for u, _, _ in lv.cells[g].sectors:
            cand.add(u)
    return tuple(sorted(g for g in cand if abs(_dist(h, g, x) - z) <= tol))


def query_vertical(h: Hierarchy, q, stats: Optional[QueryStats] = None) -> EnvelopeHit:
    """The envelope point above q: the farthest hull vertex and its distance."""
    stats = stats if stats is not None else QueryStats()
    f, sec = _locate_base(h, q, stats)
    for li in range(1, len(h.levels)):
        f, sec = _step(h, li, f, sec, q, stats)
    z = _dist(h, f, q)
    return EnvelopeHit(CirclePoint(float(q[0]), float(q[1]), z), _owners(h, f, sec, q, z))


# -- curve queries --------------------------------------------------------------

def _whole(curve) -> list:
    lo, hi = curve.domain
    return [(lo, hi, None, None)]


def _restrict(curve, ivs: list, g: int, hull) -> list:
    return intersect_intervals(ivs, inside_intervals(curve, hull[g], g))


def _endpoints(ivs: list) -> list:
    """Finite interval ends as (t, owner) pairs, in order, without repeats."""
    out = []
    for lo, hi, lo_own, hi_own in ivs:
        for t, o in ((lo, lo_own), (hi, hi_own)):
            if math.isfinite(t) and not (out and out[-1][0] == t):
                out.append((t, o))
    return out


def _hits(h: Hierarchy, curve, ivs: list, locs: dict) -> list:
    hits = []
    for t, o in _endpoints(ivs):
        p = curve.at(t)
        f, sec = locs[(t, o)]
        extra = (o,) if o is not None else ()
        hits.append(EnvelopeHit(p, _owners(h, f, sec, p.xy, p.z, extra), t))
    return hits


def query_curve(h: Hierarchy, curve, stats: Optional[QueryStats] = None) -> list:
    """Points where ``curve`` meets the envelope, found by descending the levels.

    The set of parameters whose circle encloses every vertex of the current
    level is kept as at most two intervals.  Going one level down, only the
    removed site farthest from a current interval end, or the extreme removed
    site in the direction that decides an infinite end, can shrink it.
    """
    stats = stats if stats is not None else QueryStats()
    hull = h.hull
    base = h.levels[0]
    ivs = _whole(curve)
    for g in base.sites:
        ivs = _restrict(curve, ivs, g, hull)
    stats.visited += len(base.sites)
    locs = {}
    for t, o in _endpoints(ivs):
        p = curve.at(t)
        locs[(t, o)] = _locate_base(h, p.xy, stats)
    ext = {}
    for end in (1, -1):
        w = curve.end_direction(end)
        if w is not None:
            ext[end] = (w, max(base.sites, key=lambda g: (hull[g].x * w.x + hull[g].y * w.y, -g)))

    is_parabola = isinstance(curve, ParabolaCurve)
    for li in range(1, len(h.levels)):
        if not ivs:
            return []
        lv = h.levels[li]
        cut = set()
        moved = {}
        for (t, o), (f, sec) in locs.items():
            p = curve.at(t)
            nf, nsec = _step(h, li, f, sec, p.xy, stats)
            moved[(t, o)] = (nf, nsec)
            if nf in lv.removed and _dist(h, nf, p.xy) > p.z * (1.0 + 1e-13) + 1e-300:
                cut.add(nf)
        for end, (w, e) in list(ext.items()):
            cands = [u for u in (lv.prev[e], lv.next[e]) if u in lv.removed]
            stats.visited += 1 + len(cands)
            contains_end = (ivs[-1][1] == math.inf) if end > 0 else (ivs[0][0] == -math.inf)
            if contains_end:
                for u in cands:
                    if end_gap_sign(curve, hull[u], end) < 0:
                        cut.add(u)
            best = max([e] + cands, key=lambda g: (hull[g].x * w.x + hull[g].y * w.y, -g))
            ext[end] = (w, best)
        if is_parabola and len(ivs) == 1 and ivs[0][0] == -math.inf and ivs[0][1] == math.inf:
            # the family is entirely above this level's envelope; a removed site
            # may still punch a bounded hole, which no end or crossing reveals
            cut.update(lv.removed)
            stats.visited += len(lv.removed)
        for u in sorted(cut):
            ivs = _restrict(curve, ivs, u, hull)
        new_locs = {}
        for t, o in _endpoints(ivs):
            if (t, o) in moved:
                new_locs[(t, o)] = moved[(t, o)]
            else:
                p = curve.at(t)
                new_locs[(t, o)] = (o, _locate_sector(h, lv, o, p.xy))
        locs = new_locs
    return _hits(h, curve, ivs, locs)


def naive_query_curve(points, curve) -> list:
    """Reference answer: intersect the curve's parameter domain with every cone's inside set."""
    ivs = _whole(curve)
    for i, p in enumerate(points):
        ivs = intersect_intervals(ivs, inside_intervals(curve, p, i))
        if not ivs:
            return []
    return [(t, curve.at(t)) for t, _ in _endpoints(ivs)]
