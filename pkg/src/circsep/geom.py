"""Planar primitives and predicates shared by every other module.

Everything works in double precision with a two-epsilon policy: ``eps_predicate``
decides signs, ``eps_merge`` decides when two computed objects are the same.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union


class GeometryError(Exception):
    pass


class NoSolution(GeometryError):
    pass


class InvalidInput(GeometryError):
    pass


class Point2(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    a: Point2
    b: Point2

    @property
    def is_point(self) -> bool:
        return self.a == self.b

    def canonical(self) -> "Segment":
        return self if self.a <= self.b else Segment(self.b, self.a)

    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)


class OrientedLine(NamedTuple):
    anchor: Point2
    direction: Point2

    @classmethod
    def through(cls, a, b) -> "OrientedLine":
        dx, dy = b[0] - a[0], b[1] - a[1]
        n = math.hypot(dx, dy)
        if n == 0.0:
            raise InvalidInput("line through two equal points")
        return cls(Point2(float(a[0]), float(a[1])), Point2(dx / n, dy / n))

    def left_normal(self) -> Point2:
        return Point2(-self.direction.y, self.direction.x)

    def signed_distance(self, p) -> float:
        """Positive on the left of the line."""
        d = self.direction
        return d.x * (p[1] - self.anchor.y) - d.y * (p[0] - self.anchor.x)

    def param(self, p) -> float:
        d = self.direction
        return d.x * (p[0] - self.anchor.x) + d.y * (p[1] - self.anchor.y)

    def at(self, t: float) -> Point2:
        return Point2(self.anchor.x + t * self.direction.x, self.anchor.y + t * self.direction.y)


class Circle(NamedTuple):
    center: Point2
    radius: float


class EndpointSite(NamedTuple):
    """A point site: a segment endpoint or a degenerate (zero length) segment."""

    point: Point2
    source: int = -1


class InteriorSite(NamedTuple):
    """The open relative interior of a non-degenerate segment."""

    segment: Segment
    source: int = -1

    @property
    def line(self) -> OrientedLine:
        return OrientedLine.through(self.segment.a, self.segment.b)


Site = Union[EndpointSite, InteriorSite, OrientedLine, Point2]


@dataclass(frozen=True)
class Tolerance:
    eps_predicate: float = 1e-9
    eps_merge: float = 1e-6

    def __post_init__(self):
        if not (0.0 < self.eps_predicate <= self.eps_merge):
            raise ValueError("need 0 < eps_predicate <= eps_merge")


DEFAULT_TOL = Tolerance()


def as_point(p) -> Point2:
    return p if isinstance(p, Point2) else Point2(float(p[0]), float(p[1]))


def dist(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def orientation(a, b, c, eps: float = DEFAULT_TOL.eps_predicate) -> int:
    """Sign of the turn a -> b -> c; 0 when the sine of the turn is below eps."""
    cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    # symmetric scale so that permuting the arguments cannot flip a zero
    scale = max(
        (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2,
        (c[0] - a[0]) ** 2 + (c[1] - a[1]) ** 2,
        (c[0] - b[0]) ** 2 + (c[1] - b[1]) ** 2,
    )
    if abs(cross) <= eps * scale:
        return 0
    return 1 if cross > 0 else -1


def closest_point_on_segment(p, s: Segment) -> Point2:
    ax, ay = s.a
    dx, dy = s.b[0] - ax, s.b[1] - ay
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return s.a
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2
    if t <= 0.0:
        return s.a
    if t >= 1.0:
        return s.b
    return Point2(ax + t * dx, ay + t * dy)


def dist_point_segment(p, s: Segment) -> float:
    q = closest_point_on_segment(p, s)
    return math.hypot(p[0] - q[0], p[1] - q[1])


def site_distance(p, site) -> float:
    """Distance from p to an elementary site (interior sites use the closed segment)."""
    if isinstance(site, InteriorSite):
        return dist_point_segment(p, site.segment)
    if isinstance(site, EndpointSite):
        return dist(p, site.point)
    if isinstance(site, OrientedLine):
        return abs(site.signed_distance(p))
    return dist(p, site)


def contact_point(site, center) -> Point2:
    """Point of the site realising its distance to ``center``."""
    if isinstance(site, InteriorSite):
        return closest_point_on_segment(center, site.segment)
    if isinstance(site, EndpointSite):
        return site.point
    if isinstance(site, OrientedLine):
        return site.at(site.param(center))
    return as_point(site)


def quadratic_roots(a: float, b: float, c: float, eps: float = 1e-12) -> list:
    """Real roots of a t^2 + b t + c, ascending; a double root is returned once."""
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0:
        return []
    a, b, c = a / scale, b / scale, c / scale
    if abs(a) <= eps:
        if abs(b) <= eps:
            return []
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        if disc < -eps * max(1.0, b * b):
            return []
        return [-b / (2.0 * a)]
    sq = math.sqrt(disc)
    if sq <= eps * max(1.0, abs(b)):
        return [-b / (2.0 * a)]
    # citardauq form keeps the small root accurate
    q = -0.5 * (b + math.copysign(sq, b))
    r1, r2 = q / a, c / q
    return sorted((r1, r2))


# -- equidistant centers ------------------------------------------------------

def _as_constraint(site):
    """('p', x, y) for point-like sites, ('l', nx, ny, k, seg) for line-like ones.

    A line constraint reads nx*cx + ny*cy - k = s*r for a side sign s.
    """
    if isinstance(site, EndpointSite):
        return ("p", site.point[0], site.point[1])
    if isinstance(site, InteriorSite):
        seg = site.segment
        if seg.is_point:
            raise InvalidInput("interior site of a degenerate segment")
        ln = site.line
        nx, ny = ln.left_normal()
        return ("l", nx, ny, nx * ln.anchor.x + ny * ln.anchor.y, seg)
    if isinstance(site, OrientedLine):
        nx, ny = site.left_normal()
        return ("l", nx, ny, nx * site.anchor.x + ny * site.anchor.y, None)
    return ("p", float(site[0]), float(site[1]))


def _null_vector(r1, r2):
    # cross product of two rows of a 2x3 system
    return (
        r1[1] * r2[2] - r1[2] * r2[1],
        r1[2] * r2[0] - r1[0] * r2[2],
        r1[0] * r2[1] - r1[1] * r2[0],
    )


def _solve2(r1, b1, r2, b2):
    """Particular solution of the 2x3 system r.x = b with the given null vector."""
    nv = _null_vector(r1, r2)
    nn = nv[0] ** 2 + nv[1] ** 2 + nv[2] ** 2
    if nn <= 1e-24:
        return None, None
    # x0 = (b1 * (r2 x nv) + b2 * (nv x r1)) / |nv|^2 solves both rows
    c1 = (r2[1] * nv[2] - r2[2] * nv[1], r2[2] * nv[0] - r2[0] * nv[2], r2[0] * nv[1] - r2[1] * nv[0])
    c2 = (nv[1] * r1[2] - nv[2] * r1[1], nv[2] * r1[0] - nv[0] * r1[2], nv[0] * r1[1] - nv[1] * r1[0])
    x0 = tuple((b1 * c1[i] + b2 * c2[i]) / nn for i in range(3))
    return x0, nv


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _raw_candidates(cons):
    """All (cx, cy, r) solving the tangency system, before filtering.

    Returns None when every sign case is algebraically degenerate.
    """
    pts = [c for c in cons if c[0] == "p"]
    lines = [c for c in cons if c[0] == "l"]
    out = []
    solvable = False
    nsign = len(lines)
    for mask in range(1 << nsign):
        signs = [1.0 if (mask >> i) & 1 else -1.0 for i in range(nsign)]
        rows, rhs = [], []
        for s, ln in zip(signs, lines):
            rows.append((ln[1], ln[2], -s))
            rhs.append(ln[3])
        if pts:
            x0, y0 = pts[0][1], pts[0][2]
            for p in pts[1:]:
                rows.append((2.0 * (p[1] - x0), 2.0 * (p[2] - y0), 0.0))
                rhs.append(p[1] ** 2 + p[2] ** 2 - x0 * x0 - y0 * y0)
        if len(rows) == 3:
            d = _det3(rows)
            if abs(d) <= 1e-14:
                continue
            solvable = True
            sol = []
            for j in range(3):
                m = [list(r) for r in rows]
                for i in range(3):
                    m[i][j] = rhs[i]
                sol.append(_det3(m) / d)
            out.append(tuple(sol))
            continue
        # two linear rows: a line of solutions, intersect with the first point's cone
        x0v, nv = _solve2(rows[0], rhs[0], rows[1], rhs[1])
        if x0v is None:
            continue
        px, py = pts[0][1], pts[0][2]
        if len(pts) == 3:
            # three points: r is free in the rows, fixed by the cone
            if abs(nv[0]) > 1e-12 * (abs(nv[2]) + 1) or abs(nv[1]) > 1e-12 * (abs(nv[2]) + 1):
                continue
            cx, cy = x0v[0], x0v[1]
            solvable = True
            out.append((cx, cy, math.hypot(cx - px, cy - py)))
            continue
        # (x0 + t nv - p)^2 = (r0 + t nr)^2
        ex, ey, er = x0v[0] - px, x0v[1] - py, x0v[2]
        a = nv[0] ** 2 + nv[1] ** 2 - nv[2] ** 2
        b = 2.0 * (ex * nv[0] + ey * nv[1] - er * nv[2])
        c = ex * ex + ey * ey - er * er
        solvable = True
        for t in quadratic_roots(a, b, c):
            out.append((x0v[0] + t * nv[0], x0v[1] + t * nv[1], x0v[2] + t * nv[2]))
    return out if solvable else None


def solve_equidistant(s1, s2, s3, tol: Tolerance = DEFAULT_TOL) -> list:
    """Centers equidistant from three sites, with that distance as radius.

    Point-like sites: Point2 / EndpointSite.  Line-like sites: OrientedLine (a full
    line) or InteriorSite (tangency foot must fall on the closed segment).
    Raises NoSolution when the system is inconsistent in every sign case.
    """
    sites = (s1, s2, s3)
    cons = [_as_constraint(s) for s in sites]
    raw = _raw_candidates(cons)
    if raw is None:
        raise NoSolution("tangency system has no solution")
    res = []
    for cx, cy, r in raw:
        if not (math.isfinite(cx) and math.isfinite(cy) and math.isfinite(r)):
            continue
        if r < -tol.eps_predicate:
            continue
        r = max(r, 0.0)
        ok = True
        for s in sites:
            if isinstance(s, InteriorSite):
                seg = s.segment
                dx, dy = seg.b.x - seg.a.x, seg.b.y - seg.a.y
                L2 = dx * dx + dy * dy
                t = ((cx - seg.a.x) * dx + (cy - seg.a.y) * dy) / L2
                slack = tol.eps_predicate * max(1.0, r) / math.sqrt(L2)
                if t < -slack or t > 1.0 + slack:
                    ok = False
                    break
            if abs(site_distance((cx, cy), s) - r) > 1e-8 * max(1.0, r):
                ok = False
                break
        if not ok:
            continue
        if any(abs(cx - q[0].x) <= tol.eps_merge and abs(cy - q[0].y) <= tol.eps_merge for q in res):
            continue
        res.append((Point2(cx, cy), r))
    return res


# -- segment set validity ------------------------------------------------------

def _on_segment(p, s: Segment, eps: float) -> bool:
    return dist_point_segment(p, s) <= eps * max(1.0, s.length())


def segments_conflict(s: Segment, t: Segment, eps: float = DEFAULT_TOL.eps_predicate) -> bool:
    """True when s and t meet anywhere other than at a common endpoint."""
    ends_s = {s.a, s.b}
    ends_t = {t.a, t.b}
    shared = ends_s & ends_t
    if s.is_point and t.is_point:
        return False  # equal points are merged into one site
    if s.is_point or t.is_point:
        p, seg = (s.a, t) if s.is_point else (t.a, s)
        return p not in {seg.a, seg.b} and _on_segment(p, seg, eps)
    # bounding boxes
    if (max(s.a.x, s.b.x) < min(t.a.x, t.b.x) - eps or max(t.a.x, t.b.x) < min(s.a.x, s.b.x) - eps
            or max(s.a.y, s.b.y) < min(t.a.y, t.b.y) - eps or max(t.a.y, t.b.y) < min(s.a.y, s.b.y) - eps):
        return False
    o1 = orientation(s.a, s.b, t.a, eps)
    o2 = orientation(s.a, s.b, t.b, eps)
    o3 = orientation(t.a, t.b, s.a, eps)
    o4 = orientation(t.a, t.b, s.b, eps)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and o2 == 0:
        # collinear: conflict iff the overlap has positive length
        d = (s.b.x - s.a.x, s.b.y - s.a.y)
        proj = lambda p: (p[0] - s.a.x) * d[0] + (p[1] - s.a.y) * d[1]
        lo1, hi1 = sorted((proj(s.a), proj(s.b)))
        lo2, hi2 = sorted((proj(t.a), proj(t.b)))
        L2 = d[0] ** 2 + d[1] ** 2
        return min(hi1, hi2) - max(lo1, lo2) > eps * L2
    # an endpoint of one lying on the other, other than a shared endpoint
    for p, seg in ((t.a, s), (t.b, s), (s.a, t), (s.b, t)):
        if p in shared:
            continue
        if _on_segment(p, seg, eps):
            return True
    return False


def interiors_disjoint(S, eps: float = DEFAULT_TOL.eps_predicate):
    """(True, None) when segments only meet at common endpoints, else (False, (i, j)).

    Uses a uniform grid as broad phase, so large inputs stay near linear.
    """
    S = [s if isinstance(s, Segment) else Segment(as_point(s[0]), as_point(s[1])) for s in S]
    n = len(S)
    if n < 2:
        return True, None
    if n <= 64:
        for i in range(n):
            for j in range(i + 1, n):
                if segments_conflict(S[i], S[j], eps):
                    return False, (i, j)
        return True, None
    xs = [c for s in S for c in (s.a.x, s.b.x)]
    ys = [c for s in S for c in (s.a.y, s.b.y)]
    x0, y0 = min(xs), min(ys)
    span = max(max(xs) - x0, max(ys) - y0, 1e-12)
    cells = max(1, int(math.sqrt(n)))
    h = span / cells * (1 + 1e-9)
    grid = {}
    found = None
    for i, s in enumerate(S):
        i0 = int((min(s.a.x, s.b.x) - x0) / h)
        i1 = int((max(s.a.x, s.b.x) - x0) / h)
        j0 = int((min(s.a.y, s.b.y) - y0) / h)
        j1 = int((max(s.a.y, s.b.y) - y0) / h)
        seen = set()
        for ci in range(i0, i1 + 1):
            for cj in range(j0, j1 + 1):
                for k in grid.get((ci, cj), ()):
                    if k in seen:
                        continue
                    seen.add(k)
                    if segments_conflict(S[k], s, eps):
                        pair = (k, i)
                        if found is None or pair < found:
                            found = pair
                grid.setdefault((ci, cj), []).append(i)
    if found is not None:
        return False, found
    return True, None
