"""Brute-force reference answers and instance generators.

Nothing here depends on the Voronoi, envelope or separator code; only the
basic geometry kernel is shared.  The enumeration oracle tries every triple of
sites, the grid oracle maximizes the clearance numerically, and the
classification below works with contact angles instead of orientation tests.
"""

import math
import random
from typing import NamedTuple, Optional

import numpy as np

from .geom import (
    Circle,
    EndpointSite,
    InteriorSite,
    NoSolution,
    Point2,
    Segment,
    as_point,
    closest_point_on_segment,
    segments_conflict,
    solve_equidistant,
)

MAX_ENUMERATE = 40
PROBE_RADII = (1e-4, 1e-3)
PROBE_DIRECTIONS = 16
PROBE_SLACK = 1e-7


class TooLarge(Exception):
    """The instance exceeds what the cubic enumeration oracle accepts."""


class GridSpec(NamedTuple):
    xmin: float
    ymin: float
    xmax: float
    ymax: float
    step: float
    iterations: int = 40


class OracleContact(NamedTuple):
    set: str
    point: Point2
    kind: str  # "tangent" or "through"
    role: str  # "outside" or "inside"


class OracleCircle(NamedTuple):
    circle: Circle
    inside: str
    contacts: tuple
    condition: str


def _segs(S):
    return [s if isinstance(s, Segment) else Segment(as_point(s[0]), as_point(s[1])) for s in S]


def _scale(P, Q):
    return max(1.0, max(abs(c) for s in P + Q for c in (s.a.x, s.a.y, s.b.x, s.b.y)))


# -- vectorized distances ---------------------------------------------------------

class _Field:
    """d(c, outside) and max distance to the inside points, for many centers at once."""

    def __init__(self, outside, inside):
        self.a = np.array([[s.a.x, s.a.y] for s in outside])
        self.b = np.array([[s.b.x, s.b.y] for s in outside])
        self.d = self.b - self.a
        self.L2 = np.einsum("ij,ij->i", self.d, self.d)
        self.pts = np.array(sorted({p for s in inside for p in (s.a, s.b)}))

    def clearance(self, c):
        c = np.atleast_2d(c)
        rel = c[:, None, :] - self.a[None, :, :]
        with np.errstate(invalid="ignore", divide="ignore"):
            t = np.einsum("kij,ij->ki", rel, self.d) / self.L2
        t = np.where(self.L2 > 0, np.clip(t, 0.0, 1.0), 0.0)
        foot = self.a[None, :, :] + t[:, :, None] * self.d[None, :, :]
        return np.sqrt(((c[:, None, :] - foot) ** 2).sum(-1)).min(1)

    def enclosing(self, c):
        c = np.atleast_2d(c)
        return np.sqrt(((c[:, None, :] - self.pts[None, :, :]) ** 2).sum(-1)).max(1)


# -- classification by contact angles ---------------------------------------------

def _gap(a, b):
    """Counter-clockwise angle from a to b in [0, 2pi)."""
    return (b - a) % (2 * math.pi)


def _all_arcs_small(angles, eps):
    a, b, c = sorted(angles)
    arcs = (b - a, c - b, 2 * math.pi - (c - a))
    return max(arcs) < math.pi - eps and min(arcs) > eps


def _opposite(a, b, eps):
    return abs(_gap(a, b) - math.pi) <= eps


def classify_by_angles(center, radius, contacts) -> Optional[str]:
    """Condition tag from the angular positions of the contacts, or None."""
    eps = 1e-9
    deps = 1e-7
    ang = lambda p: math.atan2(p.y - center.y, p.x - center.x)
    outs = [(ang(k.point), k.kind) for k in contacts if k.role == "outside"]
    ins = [ang(k.point) for k in contacts if k.role == "inside"]
    n = len(outs)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if _all_arcs_small((outs[i][0], outs[j][0], outs[k][0]), eps):
                    return "C1"
    opp = [(i, j) for i in range(n) for j in range(i + 1, n) if _opposite(outs[i][0], outs[j][0], deps)]
    tangent_opp = [(i, j) for i, j in opp if outs[i][1] == outs[j][1] == "tangent"]
    if tangent_opp and n >= 3:
        return "C1p"
    if len({x for pair in opp for x in pair}) >= 4 and len(opp) >= 2:
        seen = set()
        for i, j in opp:
            if i not in seen and j not in seen:
                seen |= {i, j}
        if len(seen) >= 4:
            return "C1pp"
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            arc = _gap(outs[i][0], outs[j][0])
            if arc >= math.pi - eps:
                continue
            for p in ins:
                g = _gap(outs[i][0], p)
                if eps < g < arc - eps:
                    return "C2"
    if tangent_opp and ins:
        return "C2p"
    for i, j in opp:
        left = any(eps < _gap(outs[i][0], p) < math.pi - eps for p in ins)
        right = any(math.pi + eps < _gap(outs[i][0], p) < 2 * math.pi - eps for p in ins)
        if left and right:
            return "C2pp"
    return None


# -- enumeration oracle -----------------------------------------------------------

def _sites(S):
    pts = sorted({p for s in S for p in (s.a, s.b)})
    out = [EndpointSite(p, -1) for p in pts]
    out += [InteriorSite(s, k) for k, s in enumerate(S) if not s.is_point]
    return out


def _contacts(center, r, inside_name, inside_pts, outside_name, outside, tol):
    found = {}
    for s in outside:
        if s.is_point:
            cands = [(s.a, "through")]
        else:
            cands = [(s.a, "through"), (s.b, "through")]
            dx, dy = s.b.x - s.a.x, s.b.y - s.a.y
            L = math.hypot(dx, dy)
            u = ((center.x - s.a.x) * dx + (center.y - s.a.y) * dy) / (L * L)
            if -tol / L <= u <= 1 + tol / L:
                foot = Point2(s.a.x + u * dx, s.a.y + u * dy)
                cands.append((foot, "tangent"))
        for p, kind in cands:
            if abs(math.hypot(p.x - center.x, p.y - center.y) - r) <= tol:
                key = (round(p.x / (10 * tol)), round(p.y / (10 * tol)))
                if key not in found or kind == "tangent":
                    found[key] = OracleContact(outside_name, p, kind, "outside")
    out = sorted(found.values(), key=lambda k: (k.point, k.kind))
    for p in inside_pts:
        if abs(math.hypot(p.x - center.x, p.y - center.y) - r) <= tol:
            out.append(OracleContact(inside_name, p, "through", "inside"))
    return tuple(out)


def probe_local_max(field: _Field, center, r) -> bool:
    """No feasible center on small rings around ``center`` has clearance above r."""
    cs = []
    for delta in PROBE_RADII:
        for k in range(PROBE_DIRECTIONS):
            a = 2 * math.pi * k / PROBE_DIRECTIONS
            cs.append((center[0] + delta * math.cos(a), center[1] + delta * math.sin(a)))
    cs = np.array(cs)
    d = field.clearance(cs)
    h = field.enclosing(cs)
    return not bool(np.any((d >= h) & (d > r + PROBE_SLACK)))


def separates(field: _Field, center, r, tol) -> bool:
    c = np.array([center[0], center[1]])
    return bool(field.clearance(c)[0] >= r - tol and field.enclosing(c)[0] <= r + tol)


def verify_circle(P, Q, inside, center, r, tol=1e-6):
    """(separates, locally_maximal) for one reported circle, checked by brute force."""
    P, Q = _segs(P), _segs(Q)
    ins, outs = (P, Q) if inside == "P" else (Q, P)
    field = _Field(outs, ins)
    c = (float(center[0]), float(center[1]))
    return separates(field, c, r, tol), probe_local_max(field, c, r)


def _enumerate_one(inside_name, inside, outside_name, outside, scale):
    sites = _sites(outside)
    if len(sites) < 2:
        return []
    inside_pts = sorted({p for s in inside for p in (s.a, s.b)})
    field = _Field(outside, inside)
    extra = [as_point(p) for p in inside_pts]
    cands = []
    m = len(sites)
    triples = []
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                triples.append((sites[i], sites[j], sites[k]))
            for p in extra:
                triples.append((sites[i], sites[j], p))
    for tr in triples:
        try:
            sols = solve_equidistant(*tr)
        except NoSolution:
            continue
        cands.extend(sols)
    if not cands:
        return []
    cs = np.array([[c.x, c.y] for c, _ in cands])
    rs = np.array([r for _, r in cands])
    d = field.clearance(cs)
    h = field.enclosing(cs)
    tol = 1e-9 * np.maximum(np.maximum(1.0, rs), scale)
    ok = (d >= rs - tol) & (h <= rs + tol) & (rs > 1e-6 * scale)
    out = []
    for idx in np.nonzero(ok)[0]:
        c, r = cands[idx]
        if any(abs(c.x - o.circle.center.x) <= 1e-6 * max(1.0, abs(c.x))
               and abs(c.y - o.circle.center.y) <= 1e-6 * max(1.0, abs(c.y))
               and abs(r - o.circle.radius) <= 1e-6 * max(1.0, r) for o in out):
            continue
        t = 1e-9 * max(1.0, r, scale)
        contacts = _contacts(c, r, inside_name, inside_pts, outside_name, outside, t)
        tag = classify_by_angles(c, r, contacts)
        if tag is None or not probe_local_max(field, (c.x, c.y), r):
            continue
        out.append(OracleCircle(Circle(c, r), inside_name, contacts, tag))
    return out


def oracle_enumerate(P, Q, cap: int = MAX_ENUMERATE) -> list:
    """All separating circles with at least three contacts, by trying every triple.

    Triples are drawn from the outside set's sites plus the inside set's
    points, with at least two outside members.  Survivors must separate,
    carry a condition tag and pass the local-maximality probe.
    """
    P, Q = _segs(P), _segs(Q)
    if len(P) + len(Q) > cap:
        raise TooLarge(f"{len(P) + len(Q)} segments exceed the cap of {cap}")
    scale = _scale(P, Q)
    out = _enumerate_one("P", P, "Q", Q, scale) + _enumerate_one("Q", Q, "P", P, scale)
    return sorted(out, key=lambda o: (o.circle.center.x, o.circle.center.y, o.circle.radius, o.inside))


# -- grid oracle ------------------------------------------------------------------

def default_grid(P, Q, divisions: int = 400, iterations: int = 40) -> GridSpec:
    """Input bounding box inflated three times, step = its original diameter / divisions."""
    P, Q = _segs(P), _segs(Q)
    xs = [c for s in P + Q for c in (s.a.x, s.b.x)]
    ys = [c for s in P + Q for c in (s.a.y, s.b.y)]
    cx, cy = (min(xs) + max(xs)) / 2, (min(ys) + max(ys)) / 2
    w, h = max(xs) - min(xs), max(ys) - min(ys)
    diam = max(math.hypot(w, h), 1e-9)
    hw, hh = 1.5 * max(w, diam / 10), 1.5 * max(h, diam / 10)
    return GridSpec(cx - hw, cy - hh, cx + hw, cy + hh, diam / divisions, iterations)


def oracle_local_maxima(P, Q, g: Optional[GridSpec] = None, inside: str = "P") -> list:
    """Local maxima of the clearance to the outside set over feasible centers.

    Grid nodes that dominate their feasible 8-neighbourhood are grouped into
    connected plateaus, one start per plateau, and refined by a compass search.
    """
    P, Q = _segs(P), _segs(Q)
    if g is None:
        g = default_grid(P, Q)
    ins, outs = (P, Q) if inside == "P" else (Q, P)
    field = _Field(outs, ins)
    xs = np.arange(g.xmin, g.xmax + g.step / 2, g.step)
    ys = np.arange(g.ymin, g.ymax + g.step / 2, g.step)
    X, Y = np.meshgrid(xs, ys)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    d = np.empty(len(pts))
    h = np.empty(len(pts))
    for k in range(0, len(pts), 20000):
        d[k:k + 20000] = field.clearance(pts[k:k + 20000])
        h[k:k + 20000] = field.enclosing(pts[k:k + 20000])
    D = d.reshape(X.shape)
    feas = (d >= h).reshape(X.shape)
    F = np.where(feas, D, -np.inf)
    ny, nx = F.shape
    pad = np.full((ny + 2, nx + 2), -np.inf)
    pad[1:-1, 1:-1] = F
    is_max = feas.copy()
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            is_max &= F >= pad[1 + dy:ny + 1 + dy, 1 + dx:nx + 1 + dx]
    is_max &= D > 0
    # connected plateaus of maxima
    seen = np.zeros_like(is_max)
    starts = []
    for iy, ix in zip(*np.nonzero(is_max)):
        if seen[iy, ix]:
            continue
        stack = [(iy, ix)]
        seen[iy, ix] = True
        best = (F[iy, ix], iy, ix)
        while stack:
            y, x = stack.pop()
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    yy, xx = y + dy, x + dx
                    if 0 <= yy < ny and 0 <= xx < nx and is_max[yy, xx] and not seen[yy, xx]:
                        seen[yy, xx] = True
                        stack.append((yy, xx))
                        best = max(best, (F[yy, xx], yy, xx))
        starts.append((X[best[1], best[2]], Y[best[1], best[2]]))
    out = []
    zero = 1e-9 * _scale(P, Q)
    for sx, sy in starts:
        c, r = _compass(field, (sx, sy), g.step, g.iterations)
        if r <= zero:
            continue
        if any(math.hypot(c[0] - o[0].x, c[1] - o[0].y) <= 10 * g.step and abs(r - o[1]) <= 10 * g.step for o in out):
            continue
        out.append((Point2(c[0], c[1]), r))
    return out


def _compass(field, start, step, iterations):
    c = np.array(start, dtype=float)
    f = field.clearance(c)[0]
    dirs = np.array([[math.cos(a), math.sin(a)] for a in np.linspace(0, 2 * math.pi, 8, endpoint=False)])
    s = step
    for _ in range(iterations):
        trial = c[None, :] + s * dirs
        d = field.clearance(trial)
        h = field.enclosing(trial)
        d = np.where(d >= h, d, -np.inf)
        k = int(np.argmax(d))
        if d[k] > f:
            c, f = trial[k], d[k]
        else:
            s *= 0.5
    return (float(c[0]), float(c[1])), float(f)


# -- generators -------------------------------------------------------------------

def gen_maxgap(X):
    """Stubs (x, -1)-(x, 0) for every x, a top segment at height max-min, one inside point."""
    X = sorted(float(x) for x in X)
    if len(X) < 2 or X[0] >= X[-1]:
        raise ValueError("need at least two distinct values")
    lo, hi = X[0], X[-1]
    w = hi - lo
    Q = [Segment(Point2(x, -1.0), Point2(x, 0.0)) for x in X]
    Q.append(Segment(Point2(lo, w), Point2(hi, w)))
    c = Point2((lo + hi) / 2, w / 2)
    return [Segment(c, c)], Q


def gen_equispaced(n: int):
    """The max-gap family with n equally spaced stubs at 0, 1, ..., n-1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return gen_maxgap(range(n))


class _Buckets:
    def __init__(self, cell):
        self.cell = cell
        self.grid = {}

    def _keys(self, s):
        c = self.cell
        x0, x1 = sorted((s.a.x, s.b.x))
        y0, y1 = sorted((s.a.y, s.b.y))
        for i in range(math.floor(x0 / c), math.floor(x1 / c) + 1):
            for j in range(math.floor(y0 / c), math.floor(y1 / c) + 1):
                yield (i, j)

    def clashes(self, s):
        for k in self._keys(s):
            for t in self.grid.get(k, ()):
                if segments_conflict(s, t) or {s.a, s.b} & {t.a, t.b}:
                    return True
        return False

    def add(self, s):
        for k in self._keys(s):
            self.grid.setdefault(k, []).append(s)


def gen_random(n: int, seed: int, point_fraction: float = 0.25):
    """n segments split between P (inside the unit disk) and Q (annulus 1.5 <= r <= 3).

    Segment lengths shrink with the density so that rejection sampling stays
    cheap; about a quarter of the segments are single points.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = random.Random(seed)
    n_p = n // 2
    n_q = n - n_p
    buckets = _Buckets(max(0.02, 2.0 / math.sqrt(n)))
    out = {"P": [], "Q": []}
    plan = (("P", n_p, 0.0, 1.0), ("Q", n_q, 1.5, 3.0))
    for name, count, r0, r1 in plan:
        area = math.pi * (r1 * r1 - r0 * r0)
        L = 0.5 * math.sqrt(area / count)
        while len(out[name]) < count:
            rad = math.sqrt(rng.uniform(r0 * r0, r1 * r1))
            ang = rng.uniform(0.0, 2 * math.pi)
            a = Point2(rad * math.cos(ang), rad * math.sin(ang))
            if rng.random() < point_fraction:
                b = a
            else:
                t = rng.uniform(0.0, 2 * math.pi)
                ln = rng.uniform(0.2, 1.0) * L
                b = Point2(a.x + ln * math.cos(t), a.y + ln * math.sin(t))
                if not (r0 <= math.hypot(b.x, b.y) <= r1):
                    continue
            s = Segment(a, b)
            if buckets.clashes(s):
                continue
            buckets.add(s)
            out[name].append(s)
    return out["P"], out["Q"]
