"""Circles as points of 3-space and the one-parameter circle families used for queries.

A circle with center (x, y) and radius r is the point (x, y, r).  The circles
through a fixed point p form the cone z = |(x, y) - p|; the circles tangent to an
oriented line on one side form a 45 degree halfplane.  Intersecting two such
surfaces gives a curve, which is one of three kinds:

* ``HyperbolaCurve``: circles through two points,
* ``ParabolaCurve``: circles through a point and tangent to a line,
* ``LineCurve``: circles tangent to two lines.

Every curve exposes the same small interface: a parameter domain, ``at(t)``,
``param_of(center)`` and ``gap_poly(a)``.  The last one returns coefficients of a
polynomial of degree at most two whose sign equals the sign of
``z(t) - |xy(t) - a|``, i.e. positive when the circle at ``t`` strictly encloses
``a``.  Working with that polynomial turns all curve/cone questions into
quadratic root finding.
"""

import math
from typing import NamedTuple, Optional

from .geom import (
    Circle,
    EndpointSite,
    GeometryError,
    OrientedLine,
    Point2,
    as_point,
    quadratic_roots,
)

INF = math.inf


class DegenerateCurve(GeometryError):
    pass


class CurveOnCone(GeometryError):
    pass


class CirclePoint(NamedTuple):
    x: float
    y: float
    z: float

    @property
    def xy(self) -> Point2:
        return Point2(self.x, self.y)


class LiftingCone(NamedTuple):
    apex: Point2


class LiftingHalfplane(NamedTuple):
    """Images of circles tangent to ``line`` whose centers lie on ``side``.

    ``side`` is ``"left"`` or ``"right"`` of the oriented line.
    """

    line: OrientedLine
    side: str = "left"

    @property
    def sign(self) -> int:
        return 1 if self.side == "left" else -1


class CurveCrossing(NamedTuple):
    t: float
    point: CirclePoint
    kind: str  # "enter", "leave" or "tangent"


def lift_circle(c: Circle) -> CirclePoint:
    if c.radius < 0:
        raise ValueError("negative radius")
    return CirclePoint(float(c.center[0]), float(c.center[1]), float(c.radius))


def unlift(p: CirclePoint) -> Circle:
    return Circle(Point2(p.x, p.y), p.z)


def cone_height(cone, q) -> float:
    a = cone.apex if isinstance(cone, LiftingCone) else cone
    return math.hypot(q[0] - a[0], q[1] - a[1])


def _poly_eval(poly, t: float) -> float:
    A, B, C = poly
    return (A * t + B) * t + C


class HyperbolaCurve(NamedTuple):
    """Circles through ``s1`` and ``s2``; ``t`` runs along the bisector from the midpoint."""

    s1: Point2
    s2: Point2

    @property
    def mid(self) -> Point2:
        return Point2(0.5 * (self.s1.x + self.s2.x), 0.5 * (self.s1.y + self.s2.y))

    @property
    def half(self) -> float:
        return 0.5 * math.hypot(self.s2.x - self.s1.x, self.s2.y - self.s1.y)

    @property
    def e(self) -> Point2:
        dx, dy = self.s2.x - self.s1.x, self.s2.y - self.s1.y
        n = math.hypot(dx, dy)
        return Point2(-dy / n, dx / n)

    @property
    def domain(self):
        return (-INF, INF)

    def at(self, t: float) -> CirclePoint:
        m, e = self.mid, self.e
        return CirclePoint(m.x + t * e.x, m.y + t * e.y, math.hypot(self.half, t))

    def param_of(self, p) -> float:
        m, e = self.mid, self.e
        return (p[0] - m.x) * e.x + (p[1] - m.y) * e.y

    def gap_poly(self, a):
        m, e, c = self.mid, self.e, self.half
        wx, wy = m.x - a[0], m.y - a[1]
        w = e.x * wx + e.y * wy
        return (0.0, -2.0 * w, c * c - (wx * wx + wy * wy))

    def end_direction(self, end: int) -> Optional[Point2]:
        e = self.e
        return Point2(-e.x, -e.y) if end > 0 else e

    def defining_points(self):
        return (self.s1, self.s2)

    def scale(self) -> float:
        return max(1.0, abs(self.mid.x), abs(self.mid.y), self.half)


class ParabolaCurve(NamedTuple):
    """Circles through ``focus`` tangent to ``line`` with centers on ``side`` (+1 left, -1 right).

    ``t`` is the abscissa of the tangency point along the line.
    """

    focus: Point2
    line: OrientedLine
    side: int

    @property
    def normal(self) -> Point2:
        n = self.line.left_normal()
        return Point2(self.side * n.x, self.side * n.y)

    @property
    def height(self) -> float:
        return self.side * self.line.signed_distance(self.focus)

    @property
    def domain(self):
        return (-INF, INF)

    def radius_at(self, f: float) -> float:
        h = self.height
        fp = self.line.param(self.focus)
        return ((f - fp) ** 2 + h * h) / (2.0 * h)

    def at(self, f: float) -> CirclePoint:
        r = self.radius_at(f)
        foot = self.line.at(f)
        n = self.normal
        return CirclePoint(foot.x + r * n.x, foot.y + r * n.y, r)

    def param_of(self, p) -> float:
        return self.line.param(p)

    def gap_poly(self, a):
        hp = self.height
        fp = self.line.param(self.focus)
        ha = self.side * self.line.signed_distance(a)
        fa = self.line.param(a)
        k = ha / hp
        return (k - 1.0, 2.0 * (fa - k * fp), k * (fp * fp + hp * hp) - fa * fa - ha * ha)

    def end_direction(self, end: int) -> Optional[Point2]:
        n = self.normal
        return Point2(-n.x, -n.y)

    def defining_points(self):
        return (self.focus,)

    def scale(self) -> float:
        return max(1.0, abs(self.focus.x), abs(self.focus.y), abs(self.line.anchor.x), abs(self.line.anchor.y))


class LineCurve(NamedTuple):
    """Circles tangent to two lines: center ``origin + t*velocity``, radius ``z0 + slope*t``."""

    origin: Point2
    velocity: Point2
    z0: float
    slope: float
    lo: float
    hi: float

    @property
    def domain(self):
        return (self.lo, self.hi)

    def at(self, t: float) -> CirclePoint:
        o, v = self.origin, self.velocity
        return CirclePoint(o.x + t * v.x, o.y + t * v.y, self.z0 + self.slope * t)

    def param_of(self, p) -> float:
        o, v = self.origin, self.velocity
        return ((p[0] - o.x) * v.x + (p[1] - o.y) * v.y) / (v.x * v.x + v.y * v.y)

    def gap_poly(self, a):
        o, v = self.origin, self.velocity
        dx, dy = o.x - a[0], o.y - a[1]
        return (
            self.slope ** 2 - (v.x * v.x + v.y * v.y),
            2.0 * (self.z0 * self.slope - (dx * v.x + dy * v.y)),
            self.z0 ** 2 - (dx * dx + dy * dy),
        )

    def end_direction(self, end: int) -> Optional[Point2]:
        return None  # every cone excludes both ends

    def defining_points(self):
        return ()

    def scale(self) -> float:
        return max(1.0, abs(self.origin.x), abs(self.origin.y), abs(self.z0))


def _as_surface(s):
    if isinstance(s, LiftingHalfplane):
        return s
    if isinstance(s, OrientedLine):
        return LiftingHalfplane(s, "left")
    if isinstance(s, LiftingCone):
        return as_point(s.apex)
    if isinstance(s, EndpointSite):
        return as_point(s.point)
    return as_point(s)


def _line_curve(h1: LiftingHalfplane, h2: LiftingHalfplane, eps: float) -> LineCurve:
    l1, l2 = h1.line, h2.line
    n1, n2 = l1.left_normal(), l2.left_normal()
    k1 = n1.x * l1.anchor.x + n1.y * l1.anchor.y
    k2 = n2.x * l2.anchor.x + n2.y * l2.anchor.y
    s1, s2 = h1.sign, h2.sign
    det = n1.x * n2.y - n1.y * n2.x
    if abs(det) > eps:
        # n1.X = k1 + s1 r, n2.X = k2 + s2 r
        def solve(b1, b2):
            return Point2((b1 * n2.y - b2 * n1.y) / det, (n1.x * b2 - n2.x * b1) / det)

        return LineCurve(solve(k1, k2), solve(s1, s2), 0.0, 1.0, 0.0, INF)
    s = 1.0 if n1.x * n2.x + n1.y * n2.y > 0 else -1.0
    gap = s * k2 - k1
    denom = s1 - s * s2
    if denom == 0:
        if abs(gap) <= eps * max(1.0, abs(k1)):
            raise DegenerateCurve("the two lines are identical")
        raise DegenerateCurve("parallel lines with tangency on the same side")
    r = gap / denom
    if r <= eps * max(1.0, abs(k1)):
        raise DegenerateCurve("parallel lines with incompatible tangency sides")
    off = k1 + s1 * r
    origin = Point2(l1.anchor.x + (off - k1) * n1.x, l1.anchor.y + (off - k1) * n1.y)
    return LineCurve(origin, l1.direction, r, 0.0, -INF, INF)


def curve_from_sites(s1, s2, eps: float = 1e-9):
    """The family of circles through or tangent to both sites, as a curve.

    Point-like inputs (Point2, EndpointSite, LiftingCone) contribute "passes
    through"; LiftingHalfplane inputs contribute "tangent on that side".  A bare
    OrientedLine means its left side.
    """
    a, b = _as_surface(s1), _as_surface(s2)
    a_pt = not isinstance(a, LiftingHalfplane)
    b_pt = not isinstance(b, LiftingHalfplane)
    if a_pt and b_pt:
        if math.hypot(a.x - b.x, a.y - b.y) <= eps * max(1.0, abs(a.x), abs(a.y)):
            raise DegenerateCurve("coincident points")
        return HyperbolaCurve(a, b)
    if a_pt or b_pt:
        p, h = (a, b) if a_pt else (b, a)
        curve = ParabolaCurve(p, h.line, h.sign)
        if curve.height <= eps * max(1.0, abs(p.x), abs(p.y)):
            raise DegenerateCurve("point is not strictly on the tangency side of the line")
        return curve
    return _line_curve(a, b, eps)


def _root_kind(poly, t: float) -> str:
    A, B, _ = poly
    d = 2.0 * A * t + B
    scale = max(abs(A) * max(1.0, abs(t)), abs(B), 1e-300)
    if abs(d) <= 1e-9 * scale:
        return "tangent"
    return "enter" if d > 0 else "leave"


def _in_domain(curve, t: float, slack: float = 0.0) -> bool:
    lo, hi = curve.domain
    return lo - slack <= t <= hi + slack


def intersect_curve_cone(curve, cone, eps: float = 1e-9) -> list:
    """Parameters where the curve meets the cone, tagged by the sign change.

    "enter": the circle starts to enclose the apex as t increases; "leave": the
    reverse; "tangent": a double root (the circle touches the apex and keeps it
    on the same side).
    """
    a = as_point(cone.apex if isinstance(cone, LiftingCone) else cone)
    for d in curve.defining_points():
        if math.hypot(d.x - a.x, d.y - a.y) <= eps * max(1.0, abs(a.x), abs(a.y)):
            raise CurveOnCone("the cone is one of the curve's defining surfaces")
    poly = curve.gap_poly(a)
    if max(abs(c) for c in poly) <= eps * eps * curve.scale() ** 2:
        raise CurveOnCone("the curve lies on the cone")
    out = []
    lo, hi = curve.domain
    for t in quadratic_roots(*poly):
        if lo == t or hi == t or _in_domain(curve, t):
            t = min(max(t, lo), hi)
            out.append(CurveCrossing(t, curve.at(t), _root_kind(poly, t)))
    return out


def _sample_between(lo: float, hi: float) -> float:
    if lo == -INF and hi == INF:
        return 0.0
    if lo == -INF:
        return hi - 1.0 - abs(hi)
    if hi == INF:
        return lo + 1.0 + abs(lo)
    return 0.5 * (lo + hi)


def inside_intervals(curve, apex, owner=None) -> list:
    """Closed parameter intervals where the circle encloses ``apex`` (boundary included).

    Each interval is ``(lo, hi, lo_owner, hi_owner)``; an owner is ``owner`` when
    that end is a crossing with this cone and ``None`` when it is a domain end.
    """
    poly = curve.gap_poly(apex)
    lo, hi = curve.domain
    roots = [t for t in quadratic_roots(*poly) if lo < t < hi]
    cuts = [lo] + roots + [hi]
    ivs = []
    for i in range(len(cuts) - 1):
        a, b = cuts[i], cuts[i + 1]
        if _poly_eval(poly, _sample_between(a, b)) >= 0.0:
            la = None if i == 0 else owner
            hb = None if i == len(cuts) - 2 else owner
            if ivs and ivs[-1][1] == a:
                ivs[-1] = (ivs[-1][0], b, ivs[-1][2], hb)
            else:
                ivs.append((a, b, la, hb))
    # isolated touching roots and closed finite domain ends
    for t in roots:
        if not any(iv[0] <= t <= iv[1] for iv in ivs):
            ivs.append((t, t, owner, owner))
    for t in (lo, hi):
        if math.isfinite(t) and not any(iv[0] <= t <= iv[1] for iv in ivs):
            if _poly_eval(poly, t) >= -1e-12 * max(1.0, abs(poly[2])):
                ivs.append((t, t, owner, owner))
    ivs.sort()
    return ivs


def intersect_intervals(xs: list, ys: list) -> list:
    """Intersection of two sorted lists of closed owner-annotated intervals."""
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        a, b = xs[i], ys[j]
        if a[0] > b[0] or (a[0] == b[0] and a[2] is not None):
            lo, lo_own = a[0], a[2]
        else:
            lo, lo_own = b[0], b[2]
        if a[1] < b[1] or (a[1] == b[1] and a[3] is not None):
            hi, hi_own = a[1], a[3]
        else:
            hi, hi_own = b[1], b[3]
        if lo <= hi:
            out.append((lo, hi, lo_own, hi_own))
        if a[1] < b[1]:
            i += 1
        else:
            j += 1
    return out


def end_gap_sign(curve, apex, end: int) -> int:
    """Sign of the gap polynomial as t tends to the given infinite end (+1 or -1)."""
    A, B, C = curve.gap_poly(apex)
    for c, power in ((A, 2), (B, 1), (C, 0)):
        if c != 0.0:
            s = 1 if c > 0 else -1
            if power == 1 and end < 0:
                s = -s
            return s
    return 0
