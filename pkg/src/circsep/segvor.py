"""Closest-site Voronoi diagram of interior-disjoint segments.

Segments are split into elementary sites: every distinct endpoint (including
zero-length segments) is a point site, and the open interior of every proper
segment is an interior site.  The distance to an interior site is the distance
to its supporting line when the foot of the perpendicular falls strictly inside
the segment, and infinity otherwise.

Each cell is computed on its own as a lower envelope:

* a point site p is swept by rays p + rho*u(theta); a competitor bounds rho by a
  function delta / (alpha + beta cos theta + gamma sin theta),
* one side of an interior site is swept by perpendicular rays F(f) + rho*n;
  competitors bound rho by a quadratic (point) or a linear (line) function of f.

Candidates are taken nearest first.  The cell is final once every bounded
piece of its boundary is certified: along a bisector piece the supporting
disks never reach beyond the hull of the two end disks, so it suffices that
no unprocessed site meets a ball covering those two disks.  Unbounded pieces
are certified by checking that the limiting halfplane holds no input point.
"""

import math
from typing import NamedTuple, Optional

import numpy as np
from scipy.spatial import cKDTree

from .fvor import convex_hull
from .geom import (
    DEFAULT_TOL,
    EndpointSite,
    InteriorSite,
    InvalidInput,
    Point2,
    Segment,
    as_point,
    interiors_disjoint,
    quadratic_roots,
    site_distance,
)

TWO_PI = 2.0 * math.pi
INF = math.inf
MAX_CLOSING_ROUNDS = 8


class SegVorVertex(NamedTuple):
    center: Point2
    clearance: float
    owners: tuple  # elementary site ids


class SegVorEdge(NamedTuple):
    sites: tuple  # (i, j) elementary site ids, i < j
    ends: tuple  # (vertex id or None, vertex id or None); None is a point at infinity
    sample: Point2  # a point in the relative interior of the edge
    kind: str  # "line" or "parabola"


class SegVorDiagram(NamedTuple):
    segments: list
    sites: list  # EndpointSite / InteriorSite, indexed by id
    vertices: list
    edges: list
    locator: "SiteLocator"


# -- envelope functions -----------------------------------------------------------

class _AngFn:
    """rho(theta) = delta / (alpha + beta cos + gamma sin) on frame intervals."""

    __slots__ = ("owner", "a", "b", "c", "d", "ivs")

    def __init__(self, owner, a, b, c, d, ivs):
        self.owner, self.a, self.b, self.c, self.d, self.ivs = owner, a, b, c, d, ivs

    def raw(self, t):
        den = self.a + self.b * math.cos(t) + self.c * math.sin(t)
        if den <= 1e-15 * (abs(self.a) + abs(self.b) + abs(self.c)):
            return INF
        return self.d / den


def _ang_cross(f, g, lo, hi):
    A = f.d * g.a - g.d * f.a
    B = f.d * g.b - g.d * f.b
    C = f.d * g.c - g.d * f.c
    R = math.hypot(B, C)
    if R <= 1e-15 * (abs(A) + 1e-300):
        return []
    k = -A / R
    if k < -1.0 or k > 1.0:
        return []
    phi = math.atan2(C, B)
    w = math.acos(k)
    out = []
    for base in (phi + w, phi - w):
        t = base + TWO_PI * math.ceil((lo - base) / TWO_PI)
        while t < hi:
            if t > lo:
                out.append(t)
            t += TWO_PI
    return out


class _PolyFn:
    """rho(f) = q2 f^2 + q1 f + q0 on intervals of f."""

    __slots__ = ("owner", "q2", "q1", "q0", "ivs")

    def __init__(self, owner, q2, q1, q0, ivs):
        self.owner, self.q2, self.q1, self.q0, self.ivs = owner, q2, q1, q0, ivs

    def raw(self, f):
        return (self.q2 * f + self.q1) * f + self.q0


def _poly_cross(f, g, lo, hi):
    return [t for t in quadratic_roots(f.q2 - g.q2, f.q1 - g.q1, f.q0 - g.q0, 1e-14) if lo < t < hi]


def _valid(fn, t):
    for a, b in fn.ivs:
        if a <= t <= b:
            return True
    return False


class _Envelope:
    """Lower envelope as pieces [lo, hi, fn]; fn None means unbounded."""

    def __init__(self, lo, hi, cross, wrap=False):
        self.pieces = [[lo, hi, None]]
        self.cross = cross
        self.lo, self.hi = lo, hi
        self.wrap = wrap
        self.tiny = 1e-13 * max(1.0, abs(lo), abs(hi))

    def insert(self, fn):
        if not fn.ivs:
            return False
        changed = False
        out = []
        tiny = self.tiny
        for piece in self.pieces:
            lo, hi, g = piece
            cuts = None
            for a, b in fn.ivs:
                if a < hi and b > lo:
                    cuts = cuts or [lo, hi]
                    if lo < a < hi:
                        cuts.append(a)
                    if lo < b < hi:
                        cuts.append(b)
            if cuts is None:
                out.append(piece)
                continue
            if g is not None:
                cuts.extend(self.cross(fn, g, lo, hi))
            cuts.sort()
            prev = lo
            for c in cuts[1:]:
                if c - prev <= tiny:
                    continue
                mid = 0.5 * (prev + c)
                owner = g
                if _valid(fn, mid):
                    fv = fn.raw(mid)
                    gv = g.raw(mid) if g is not None else INF
                    if fv < gv * (1.0 - 1e-13):
                        owner = fn
                        changed = True
                out.append([prev, c, owner])
                prev = c
            if out and out[-1][1] < hi:
                out[-1][1] = hi
        merged = []
        for p in out:
            if merged and merged[-1][2] is p[2]:
                merged[-1][1] = p[1]
            else:
                merged.append(p)
        self.pieces = merged
        return changed



# -- the diagram --------------------------------------------------------------------

class SiteLocator:
    """Nearest elementary site queries backed by a k-d tree over segment midpoints."""

    def __init__(self, segments, seg_sites, sites):
        self.segments = segments
        self.seg_sites = seg_sites
        self.sites = sites
        mids = np.array([[(s.a.x + s.b.x) / 2, (s.a.y + s.b.y) / 2] for s in segments])
        half = np.array([s.length() / 2 for s in segments])
        cut = max(3.0 * float(np.median(half)), 1e-12)
        self.short = np.nonzero(half <= cut)[0]
        self.long = [int(i) for i in np.nonzero(half > cut)[0]]
        self.tree = cKDTree(mids[self.short]) if len(self.short) else None
        self.reach = float(half[self.short].max()) if len(self.short) else 0.0

    def within(self, centers, radii):
        """Segment ids possibly meeting any ball (centers[i], radii[i])."""
        found = set()
        if self.tree is not None and len(centers):
            res = self.tree.query_ball_point(np.asarray(centers), np.asarray(radii) + self.reach)
            for lst in res:
                for j in lst:
                    found.add(int(self.short[j]))
        for i in self.long:
            s = self.segments[i]
            for c, r in zip(centers, radii):
                if _dist_seg(c, s) <= r:
                    found.add(i)
                    break
        return found

    def nearest_segments(self, q, k):
        out = set(self.long)
        if self.tree is not None:
            k = min(k, len(self.short))
            _, idx = self.tree.query([q[0], q[1]], k=k)
            idx = np.atleast_1d(idx)
            out.update(int(self.short[j]) for j in idx if j < len(self.short))
        return out

    def nearest_site(self, q):
        cand = self.nearest_segments(q, 8)
        d0 = min(_dist_seg(q, self.segments[i]) for i in cand)
        cand |= self.within([q], [d0])
        best, bd = None, INF
        for i in sorted(cand):
            for sid in self.seg_sites[i]:
                if sid is None:
                    continue
                d = site_distance(q, self.sites[sid])
                if d < bd:
                    best, bd = sid, d
        return best, bd


def _dist_seg(p, s: Segment) -> float:
    ax, ay = s.a
    dx, dy = s.b.x - ax, s.b.y - ay
    L2 = dx * dx + dy * dy
    t = 0.0 if L2 == 0 else max(0.0, min(1.0, ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2))
    return math.hypot(p[0] - ax - t * dx, p[1] - ay - t * dy)


def _arc_to_frame(a, b, lo, hi):
    """Map the angular arc [a, b] (b - a <= 2pi) into frame intervals within [lo, hi]."""
    out = []
    a2 = lo + (a - lo) % TWO_PI
    b2 = a2 + (b - a)
    for s, e in ((a2, b2), (a2 - TWO_PI, b2 - TWO_PI)):
        s, e = max(s, lo), min(e, hi)
        if e > s:
            out.append((s, e))
    return out


class _Builder:
    def __init__(self, segments, tol):
        self.tol = tol
        self.segments = segments
        pts = {}
        self.sites = []
        self.seg_sites = []  # per segment: (endpoint id a, endpoint id b, interior id or None)
        for s in segments:
            ids = []
            for p in (s.a, s.b):
                if p not in pts:
                    pts[p] = len(self.sites)
                    self.sites.append(EndpointSite(p, len(self.seg_sites)))
                ids.append(pts[p])
            self.seg_sites.append([ids[0], ids[1], None])
        self.incident = {}
        for k, s in enumerate(segments):
            if not s.is_point:
                self.seg_sites[k][2] = len(self.sites)
                self.sites.append(InteriorSite(s, k))
                for p, q in ((s.a, s.b), (s.b, s.a)):
                    self.incident.setdefault(pts[p], []).append((k, q))
        self.point_id = pts
        allpts = list(pts.keys())
        self.scale = max(1.0, max(max(abs(p.x), abs(p.y)) for p in allpts))
        hull = convex_hull(allpts)
        self.hull = np.array([[p.x, p.y] for p in hull])
        lo, hi = np.min(self.hull, axis=0), np.max(self.hull, axis=0)
        self.diam = max(float(np.hypot(*(hi - lo))), 1e-12 * self.scale)
        self.center = (lo + hi) / 2
        self.far = 1e6 * max(self.scale, self.diam)  # clearances beyond this count as unbounded
        self.locator = SiteLocator(segments, self.seg_sites, self.sites)
        self.nseg = len(segments)
        self.vcands = []  # (position, rho, owner set)
        self.ecands = []  # (site a, site b, pos_lo or None, pos_hi or None, sample, kind)

    # -- certification of unbounded directions
    def extreme(self, w, anchor) -> bool:
        if len(self.hull) == 0:
            return True
        top = float(np.max(self.hull @ np.array([w[0], w[1]])))
        # ties happen exactly at the ends of an unbounded piece, where the angle
        # carries the rounding of a crossing solve
        return top <= w[0] * anchor[0] + w[1] * anchor[1] + 1e-9 * self.scale

    def extreme_segments(self, w) -> set:
        """Segments touching the hull vertex farthest in direction w."""
        if len(self.hull) == 0:
            return set()
        x, y = self.hull[int(np.argmax(self.hull @ np.array([w[0], w[1]])))]
        pid = self.point_id[Point2(float(x), float(y))]
        out = {self.sites[pid].source}
        out.update(k for k, _ in self.incident.get(pid, ()))
        return out

    def cover(self, balls):
        """Balls with the same sites inside, large ones shrunk to fit the hull.

        A ball much larger than the input is replaced by its supporting
        halfplane, clipped to the hull of all points; the bounding ball of
        that clipped polygon is usually a small sliver along one hull edge.
        """
        out = []
        for c, r in balls:
            if r <= 4.0 * self.diam or len(self.hull) < 3:
                out.append((c, r))
                continue
            v = self.center - np.array(c)
            dv = float(np.hypot(*v))
            if dv == 0.0:
                out.append((c, r))
                continue
            v /= dv
            # every point y of the ball has v . (y - c) <= r
            level = r + 1e-9 * r + float(v @ np.array(c))
            poly = _clip_below(self.hull, v, level)
            if len(poly) == 0:
                continue
            mid = poly.mean(axis=0)
            out.append(((float(mid[0]), float(mid[1])), float(np.max(np.hypot(*(poly - mid).T)))))
        return out

    # -- functions for a point cell
    def point_fns(self, p, sid, frame):
        lo, hi = frame
        fns = []
        site = self.sites[sid]
        if isinstance(site, EndpointSite):
            t = site.point
            wx, wy = t.x - p.x, t.y - p.y
            d2 = wx * wx + wy * wy
            if d2 == 0.0:
                return fns
            ang = math.atan2(wy, wx)
            ivs = _arc_to_frame(ang - 0.5 * math.pi, ang + 0.5 * math.pi, lo, hi)
            if ivs:
                fns.append(_AngFn(sid, 0.0, 2 * wx, 2 * wy, d2, ivs))
            return fns
        seg = site.segment
        a, b = seg.a, seg.b
        L = seg.length()
        dx, dy = (b.x - a.x) / L, (b.y - a.y) / L
        nx, ny = -dy, dx
        s0 = nx * (p.x - a.x) + ny * (p.y - a.y)
        if s0 < 0:
            nx, ny, s0 = -nx, -ny, -s0
        if s0 <= 1e-12 * self.scale:
            return fns
        angs = []
        for e in (a, b):
            r = ((e.x - p.x) ** 2 + (e.y - p.y) ** 2) / (2 * s0)
            angs.append(math.atan2(e.y + r * ny - p.y, e.x + r * nx - p.x))
        tn = math.atan2(ny, nx)
        s, e = angs[0], angs[1]
        span = (e - s) % TWO_PI
        if (tn - s) % TWO_PI < span:
            s, span = e, TWO_PI - span
        ivs = _arc_to_frame(s, s + span, lo, hi)
        if ivs:
            fns.append(_AngFn(sid, 1.0, -nx, -ny, s0, ivs))
        return fns

    # -- functions for one side of an interior cell
    def interior_fns(self, A, d, n, L, sid):
        fns = []
        site = self.sites[sid]
        if isinstance(site, EndpointSite):
            t = site.point
            h = n[0] * (t.x - A.x) + n[1] * (t.y - A.y)
            if h <= 1e-12 * self.scale:
                return fns
            ft = d[0] * (t.x - A.x) + d[1] * (t.y - A.y)
            fns.append(_PolyFn(sid, 1.0 / (2 * h), -ft / h, (ft * ft + h * h) / (2 * h), [(0.0, L)]))
            return fns
        seg = site.segment
        aJ = seg.a
        LJ = seg.length()
        dJ = ((seg.b.x - aJ.x) / LJ, (seg.b.y - aJ.y) / LJ)
        nJ = (-dJ[1], dJ[0])
        s0 = nJ[0] * (A.x - aJ.x) + nJ[1] * (A.y - aJ.y)
        s1 = nJ[0] * d[0] + nJ[1] * d[1]
        c = nJ[0] * n[0] + nJ[1] * n[1]
        g0 = dJ[0] * (A.x - aJ.x) + dJ[1] * (A.y - aJ.y)
        g1 = dJ[0] * d[0] + dJ[1] * d[1]
        gn = dJ[0] * n[0] + dJ[1] * n[1]
        for sign in (1.0, -1.0):
            den = 1.0 - sign * c
            if den <= 1e-12:
                continue
            q1, q0 = sign * s1 / den, sign * s0 / den  # rho = sign * s / den
            lo, hi = 0.0, L
            lo, hi = _clip_linear(q1, q0, 0.0, INF, lo, hi)  # rho >= 0
            if hi - lo <= 1e-12 * L:
                continue
            # foot on J strictly inside: 0 < g0 + g1 f + gn * rho(f) < LJ
            lo, hi = _clip_linear(g1 + gn * q1, g0 + gn * q0, 0.0, LJ, lo, hi)
            if hi - lo <= 1e-12 * L:
                continue
            fns.append(_PolyFn(sid, 0.0, q1, q0, [(lo, hi)]))
        return fns

    def segment_ids(self, k):
        return [x for x in self.seg_sites[k] if x is not None]


def _clip_linear(k1, k0, vlo, vhi, lo, hi):
    """Restrict [lo, hi] to where vlo <= k1 f + k0 <= vhi."""
    if abs(k1) <= 1e-300:
        if vlo <= k0 <= vhi:
            return lo, hi
        return 0.0, -1.0
    a, b = (vlo - k0) / k1, (vhi - k0) / k1
    if a > b:
        a, b = b, a
    return max(lo, a), min(hi, b)


# -- cells ------------------------------------------------------------------------

def _half_arc(start, span, hs):
    """Intersect the arc [start, start+span] with the closed half circle [hs, hs+pi].

    Returns (start, span, new_lo_from_half, new_hi_from_half) or None when empty.
    """
    s2 = start + (hs - start) % TWO_PI
    best = None
    for a in (s2, s2 - TWO_PI):
        lo, hi = max(start, a), min(start + span, a + math.pi)
        if hi > lo and (best is None or hi - lo > best[1] - best[0]):
            best = (lo, hi, lo == a, hi == a + math.pi)
    if best is None or best[1] - best[0] <= 1e-12:
        return None
    return best[0], best[1] - best[0], best[2], best[3]


def _ball(x0, e0, x1, e1):
    if e0 == INF and e1 == INF:
        return None
    if e0 == INF:
        return x1, e1
    if e1 == INF:
        return x0, e0
    c = ((x0[0] + x1[0]) / 2, (x0[1] + x1[1]) / 2)
    return c, math.hypot(x0[0] - x1[0], x0[1] - x1[1]) / 2 + max(e0, e1)


def _clip_below(poly, v, level):
    """Part of a convex polygon with v . y <= level (Sutherland-Hodgman, one plane)."""
    vals = poly @ v - level
    out = []
    m = len(poly)
    for i in range(m):
        a, b = poly[i], poly[(i + 1) % m]
        fa, fb = vals[i], vals[(i + 1) % m]
        if fa <= 0:
            out.append(a)
        if (fa < 0 < fb) or (fb < 0 < fa):
            out.append(a + (b - a) * (fa / (fa - fb)))
    return np.array(out)


def _capped(fn, t, far):
    e = fn.raw(t)
    return e if e <= far else INF


def _piece_balls(fn, lo, hi, x_at, far, depth=0):
    """Balls covering the empty disks along one envelope piece.

    A long piece is split until each chord is short compared with the
    clearance, so that the cover stays close to the union of empty disks
    (a single ball over a long piece can swallow most of the input).
    """
    e0, e1 = _capped(fn, lo, far), _capped(fn, hi, far)
    if e0 == INF or e1 == INF:
        bl = _ball(x_at(lo, e0) if e0 < INF else None, e0, x_at(hi, e1) if e1 < INF else None, e1)
        return [bl] if bl is not None else []
    x0, x1 = x_at(lo, e0), x_at(hi, e1)
    chord = math.hypot(x0[0] - x1[0], x0[1] - x1[1])
    mid = 0.5 * (lo + hi)
    em = _capped(fn, mid, far)
    if depth < 5 and em < INF and chord > 0.5 * max(e0, e1):
        return _piece_balls(fn, lo, mid, x_at, far, depth + 1) + _piece_balls(fn, mid, hi, x_at, far, depth + 1)
    c = ((x0[0] + x1[0]) / 2, (x0[1] + x1[1]) / 2)
    r = chord / 2 + max(e0, e1)
    if em < INF:
        xm = x_at(mid, em)
        r = max(r, math.hypot(xm[0] - c[0], xm[1] - c[1]) + em)
    return [(c, r)]


def _runs(pieces):
    """Merge adjacent pieces whose functions share an owner site."""
    out = []
    for lo, hi, fn in pieces:
        own = fn.owner if fn is not None else None
        if out and out[-1][2] == own:
            out[-1][1] = hi
            out[-1][3].append(fn)
        else:
            out.append([lo, hi, own, [fn]])
    return out


class _CellRunner:
    """Shared candidate loop: nearest segments first, then certification balls.

    A segment farther than twice the largest boundary radius cannot reach into
    the cell, and since the envelope only shrinks it never will; such segments
    are marked done without being inserted.
    """

    def __init__(self, builder, env, reach, anchor, skip):
        self.b = builder
        self.env = env
        self.reach = reach  # segment id -> distance from the cell's site
        self.anchor = anchor
        self.done = set(skip)

    def emax(self):
        top = 0.0
        for lo, hi, fn in self.env.pieces:
            if fn is None:
                return INF
            top = max(top, fn.raw(lo), fn.raw(hi))
        return top

    def add(self, segs, make_fns):
        todo = sorted((self.reach(k), k) for k in segs if k not in self.done)
        bound = self.emax()
        for dk, k in todo:
            self.done.add(k)
            if dk > 2.0 * bound:
                continue
            changed = False
            for sid in self.b.segment_ids(k):
                for fn in make_fns(sid):
                    changed |= self.env.insert(fn)
            if changed:
                bound = self.emax()

    def run(self, make_fns, open_directions, balls):
        """``open_directions()`` lists directions in which the cell is unbounded
        although the site is not extreme there; the segment at the extreme hull
        vertex in such a direction closes the cell off."""
        b = self.b
        k = 12
        self.add(b.locator.nearest_segments(self.anchor, k), make_fns)
        for _ in range(MAX_CLOSING_ROUNDS):
            dirs = open_directions()
            if not dirs:
                break
            fresh = set().union(*(b.extreme_segments(w) for w in dirs)) - self.done
            if not fresh:
                break
            self.add(fresh, make_fns)
        while open_directions():
            if len(self.done) >= b.nseg:
                break
            k *= 4
            if k >= b.nseg:
                self.add(range(b.nseg), make_fns)
            else:
                self.add(b.locator.nearest_segments(self.anchor, k), make_fns)
        while len(self.done) < b.nseg:
            bl = balls()
            if not bl:
                break
            bl = b.cover(bl)
            found = b.locator.within([c for c, _ in bl], [r for _, r in bl]) - self.done
            if not found:
                break
            self.add(found, make_fns)


def _point_cell(b: _Builder, sid):
    p = b.sites[sid].point
    inc = b.incident.get(sid, [])
    start, span, full = -math.pi, TWO_PI, True
    ends = [None, None]
    for k, q in inc:
        iid = b.seg_sites[k][2]
        hs = math.atan2(q.y - p.y, q.x - p.x) + 0.5 * math.pi
        if full:
            start, span, full = hs, math.pi, False
            ends = [iid, iid]
            continue
        r = _half_arc(start, span, hs)
        if r is None:
            return
        start, span, from_lo, from_hi = r
        if from_lo:
            ends[0] = iid
        if from_hi:
            ends[1] = iid
    lo, hi = start, start + span
    env = _Envelope(lo, hi, _ang_cross, wrap=full)

    def x_at(t, rho):
        return (p.x + rho * math.cos(t), p.y + rho * math.sin(t))

    def extreme_at(t):
        return b.extreme((math.cos(t), math.sin(t)), p)

    def open_directions():
        angles = []
        for plo, phi, fn in env.pieces:
            if fn is None:
                angles += [plo, 0.5 * (plo + phi), phi]
            else:
                angles += [t for t in (plo, phi) if fn.raw(t) == INF]
        return [(math.cos(t), math.sin(t)) for t in angles if not extreme_at(t)]

    def balls():
        out = []
        for plo, phi, fn in env.pieces:
            if fn is not None:
                out += _piece_balls(fn, plo, phi, x_at, b.far)
        return out

    runner = _CellRunner(b, env, lambda k: _dist_seg(p, b.segments[k]), (p.x, p.y), [k for k, _ in inc])
    for k, q in inc:  # far endpoints of incident segments
        for fn in b.point_fns(p, b.point_id[q], (lo, hi)):
            env.insert(fn)
    runner.run(lambda s: b.point_fns(p, s, (lo, hi)), open_directions, balls)

    runs = _runs(env.pieces)
    if full and len(runs) > 1 and runs[0][2] == runs[-1][2]:
        last = runs.pop()
        runs[0] = [last[0] - TWO_PI, runs[0][1], runs[0][2], last[3] + runs[0][3]]

    def value(t, fns):
        return min((fn.raw(t) for fn in fns if fn is not None), default=INF)

    nr = len(runs)
    for i, (rlo, rhi, own, fns) in enumerate(runs):
        e1 = value(rhi, fns)
        if own is not None:
            e0 = value(rlo, fns)
            x0 = x_at(rlo, e0) if e0 < INF else None
            x1 = x_at(rhi, e1) if e1 < INF else None
            kind = "line" if isinstance(b.sites[own], EndpointSite) else "parabola"
            mid = 0.5 * (rlo + rhi)
            b.ecands.append((sid, own, x0, x1, x_at(mid, value(mid, fns)), kind))
        if i + 1 < nr:
            nxt = runs[i + 1]
        elif full and nr > 1:
            nxt = runs[0]
        else:
            continue
        e = min(e1, value(rhi, nxt[3]))
        if e < INF:
            owners = {sid, own, nxt[2]} - {None}
            if len(owners) >= 3:
                b.vcands.append((x_at(rhi, e), e, owners))
    if not full:
        for t, iid, run in ((lo, ends[0], runs[0]), (hi, ends[1], runs[-1])):
            e = value(t, run[3])
            x = x_at(t, e) if e < INF else None
            if x is not None:
                owners = {sid, iid, run[2]} - {None}
                if len(owners) >= 3:
                    b.vcands.append((x, e, owners))
            b.perp.setdefault((sid, iid), []).append((x, (math.cos(t), math.sin(t))))


def _interior_cell(b: _Builder, sid):
    seg = b.sites[sid].segment
    k = b.sites[sid].source
    A = seg.a
    L = seg.length()
    d = ((seg.b.x - A.x) / L, (seg.b.y - A.y) / L)
    ia, ib = b.seg_sites[k][0], b.seg_sites[k][1]
    anchor = ((seg.a.x + seg.b.x) / 2, (seg.a.y + seg.b.y) / 2)

    def reach(j):
        t = b.segments[j]
        return min(_dist_seg(t.a, seg), _dist_seg(t.b, seg), _dist_seg(seg.a, t), _dist_seg(seg.b, t))

    for sigma in (1.0, -1.0):
        n = (-sigma * d[1], sigma * d[0])
        env = _Envelope(0.0, L, _poly_cross)

        def x_at(f, rho, n=n):
            return (A.x + f * d[0] + rho * n[0], A.y + f * d[1] + rho * n[1])

        def open_directions(env=env, n=n):
            if any(fn is None for _, _, fn in env.pieces) and not b.extreme(n, A):
                return [n]
            return []

        def balls(env=env, x_at=x_at):
            out = []
            for plo, phi, fn in env.pieces:
                if fn is not None:
                    out += _piece_balls(fn, plo, phi, x_at, b.far)
            return out

        runner = _CellRunner(b, env, reach, anchor, [k])
        runner.run(lambda s, n=n: b.interior_fns(A, d, n, L, s), open_directions, balls)

        runs = _runs(env.pieces)
        for i, (rlo, rhi, own, fns) in enumerate(runs):
            if own is None:
                continue
            e0 = min(fn.raw(rlo) for fn in fns)
            e1 = min(fn.raw(rhi) for fn in fns)
            mid = 0.5 * (rlo + rhi)
            kind = "parabola" if isinstance(b.sites[own], EndpointSite) else "line"
            b.ecands.append((sid, own, x_at(rlo, e0), x_at(rhi, e1), x_at(mid, min(fn.raw(mid) for fn in fns)), kind))
            if i + 1 < len(runs) and runs[i + 1][2] is not None:
                nxt = runs[i + 1]
                owners = {sid, own, nxt[2]}
                if len(owners) >= 3:
                    b.vcands.append((x_at(rhi, e1), e1, owners))
            if i == 0:
                owners = {sid, ia, own}
                if len(owners) >= 3:
                    b.vcands.append((x_at(0.0, e0), e0, owners))
            if i == len(runs) - 1:
                owners = {sid, ib, own}
                if len(owners) >= 3:
                    b.vcands.append((x_at(L, e1), e1, owners))


# -- assembly -----------------------------------------------------------------------

def build_segment_voronoi(segments, tol=DEFAULT_TOL) -> SegVorDiagram:
    """Closest-site Voronoi diagram of the elementary sites of ``segments``.

    Raises InvalidInput when the list is empty or two segment interiors meet.
    """
    segs = []
    for s in segments:
        if not isinstance(s, Segment):
            s = Segment(as_point(s[0]), as_point(s[1]))
        for c in (s.a.x, s.a.y, s.b.x, s.b.y):
            if not math.isfinite(c):
                raise InvalidInput("non-finite coordinate")
        segs.append(s)
    if not segs:
        raise InvalidInput("no segments")
    ok, pair = interiors_disjoint(segs, tol.eps_predicate)
    if not ok:
        raise InvalidInput(f"segments {pair[0]} and {pair[1]} have intersecting interiors")

    b = _Builder(segs, tol)
    b.perp = {}
    for sid, site in enumerate(b.sites):
        if isinstance(site, EndpointSite):
            _point_cell(b, sid)
        else:
            _interior_cell(b, sid)
    return _assemble(b)


def _assemble(b: _Builder) -> SegVorDiagram:
    mtol = b.tol.eps_merge * b.scale
    vertices = []
    vtree = None
    if b.vcands:
        xy = np.array([c[0] for c in b.vcands])
        tree = cKDTree(xy)
        parent = list(range(len(b.vcands)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in tree.query_pairs(mtol):
            parent[find(i)] = find(j)
        # copies of an ill-conditioned vertex (nearly tangent bisectors) drift
        # apart; copies with the same owners are merged on a looser scale
        by_owners = {}
        for i, (_, rho, owners) in enumerate(b.vcands):
            by_owners.setdefault(frozenset(owners), []).append(i)
        for idx in by_owners.values():
            for u in range(len(idx)):
                for w in range(u + 1, len(idx)):
                    i, j = idx[u], idx[w]
                    loose = 1e-5 * max(b.scale, b.vcands[i][1])
                    if math.hypot(*(xy[i] - xy[j])) <= loose:
                        parent[find(i)] = find(j)
        groups = {}
        for i in range(len(b.vcands)):
            groups.setdefault(find(i), []).append(i)
        for g in sorted(groups.values(), key=lambda g: tuple(xy[g[0]])):
            cx = float(np.mean(xy[g, 0]))
            cy = float(np.mean(xy[g, 1]))
            rho = float(np.mean([b.vcands[i][1] for i in g]))
            owners = sorted(set().union(*(b.vcands[i][2] for i in g)))
            vertices.append(SegVorVertex(Point2(cx, cy), max(rho, 0.0), tuple(owners)))
        vtree = cKDTree(np.array([[v.center.x, v.center.y] for v in vertices]))

    def vid(x):
        if x is None or vtree is None:
            return None
        d, i = vtree.query(x)
        return int(i) if d <= 100 * mtol else None

    edges = {}

    def add(a, c, x0, x1, sample, kind):
        e0, e1 = vid(x0), vid(x1)
        if (x0 is not None and e0 is None) or (x1 is not None and e1 is None):
            return
        if e0 is not None and e0 == e1:
            return
        i, j = min(a, c), max(a, c)
        key = (i, j, tuple(sorted((-1 if e is None else e) for e in (e0, e1))))
        if key not in edges:
            edges[key] = SegVorEdge((i, j), (e0, e1), Point2(*sample), kind)

    for a, c, x0, x1, sample, kind in b.ecands:
        add(a, c, x0, x1, sample, kind)
    for (p, iid), halves in b.perp.items():
        if iid is None:
            continue
        pt = b.sites[p].point
        if len(halves) == 2:
            add(p, iid, halves[0][0], halves[1][0], pt, "line")
        else:
            x, u = halves[0]
            if x is None:
                sample = (pt.x + u[0], pt.y + u[1])
            else:
                sample = ((pt.x + x[0]) / 2, (pt.y + x[1]) / 2)
            add(p, iid, (pt.x, pt.y), x, sample, "line")
    ordered = sorted(edges.values(), key=lambda e: (e.sites, tuple(-1 if v is None else v for v in e.ends)))
    return SegVorDiagram(b.segments, b.sites, vertices, ordered, b.locator)


def nearest_site(diagram: SegVorDiagram, q):
    """(site id, distance) of the elementary site closest to q."""
    return diagram.locator.nearest_site(as_point(q))
