"""All locally largest circles separating two segment sets.

For the orientation "P inside, Q outside" a circle is feasible when its center
c satisfies d(c, Q) >= h(c), where h(c) is the distance from c to the farthest
hull vertex of P.  Locally largest feasible circles with at least three contact
points come in two flavours:

* centered at a vertex of the Voronoi diagram of Q, where the clearance disk
  is pinned by outside sites alone (tags C1, C1p, C1pp), and
* centered on a Voronoi edge, where growing along the edge is stopped by an
  inside hull vertex (tags C2, C2p, C2pp).

Vertex candidates need one farthest-point query each; edge candidates need one
curve query against the lifted farthest-point envelope.  Both orientations are
run and the results merged.
"""

import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, Optional

from .circle_space import CirclePoint, DegenerateCurve, LiftingHalfplane, curve_from_sites
from .geom import (
    DEFAULT_TOL,
    Circle,
    EndpointSite,
    InteriorSite,
    InvalidInput,
    NoSolution,
    Point2,
    Segment,
    as_point,
    contact_point,
    interiors_disjoint,
    orientation,
    site_distance,
    solve_equidistant,
)
from .hierarchy import build_hierarchy, query_curve, query_vertical
from .segvor import build_segment_voronoi

VERTEX_TAGS = ("C1", "C1p", "C1pp")
EDGE_TAGS = ("C2", "C2p", "C2pp")


class InsufficientSites(UserWarning):
    """An orientation was skipped because its outside set has fewer than two sites."""


class Contact(NamedTuple):
    set: str  # "P" or "Q"
    site: object  # EndpointSite / InteriorSite of the outside set, or a hull vertex Point2
    point: Point2
    kind: str  # "tangent" (interior of a segment) or "through" (endpoint or hull vertex)
    index: int  # index of a segment of that set carrying the contact
    role: str  # "outside" pins the circle from outside, "inside" is an enclosed hull vertex


class SeparatingCircle(NamedTuple):
    circle: Circle
    inside: str  # "P" or "Q"
    contacts: tuple
    condition: str
    source: tuple  # ("vertex", id, None) or ("edge", id, t)


class RunInfo(NamedTuple):
    inside: str
    voronoi_vertices: int
    voronoi_edges: int
    hull_size: int
    candidates: int
    outputs: int
    build_seconds: float
    query_seconds: float


def _segments(S, name):
    out = []
    for s in S:
        if not isinstance(s, Segment):
            s = Segment(as_point(s[0]), as_point(s[1]))
        for c in (s.a.x, s.a.y, s.b.x, s.b.y):
            if not math.isfinite(c):
                raise InvalidInput(f"{name} has a non-finite coordinate")
        out.append(s)
    if not out:
        raise InvalidInput(f"{name} must be nonempty")
    return out


def validate(P, Q, tol=DEFAULT_TOL):
    """Segment lists for P and Q; raises InvalidInput on empty sets or crossing interiors."""
    P, Q = _segments(P, "P"), _segments(Q, "Q")
    ok, pair = interiors_disjoint(P + Q, tol.eps_predicate)
    if not ok:
        names = [("P", i) for i in range(len(P))] + [("Q", i) for i in range(len(Q))]
        (a, i), (b, j) = names[pair[0]], names[pair[1]]
        raise InvalidInput(
            f"interiors of {a}[{i}] and {b}[{j}] intersect; intersecting inputs are not supported"
        )
    return P, Q


# -- classification ---------------------------------------------------------------

def _strictly_inside(c, a, b, d, eps):
    o1 = orientation(a, b, c, eps)
    o2 = orientation(b, d, c, eps)
    o3 = orientation(d, a, c, eps)
    return o1 != 0 and o1 == o2 == o3


def _diametral(c, a, b, r, eps):
    return math.hypot(a.x + b.x - 2 * c.x, a.y + b.y - 2 * c.y) <= eps * r


def classify_contacts(circle: Circle, contacts) -> Optional[str]:
    """Condition tag of a circle from its contacts, or None.

    Contacts of the outside set pin the circle; contacts of the inside set are
    hull vertices.  Tags are tried in the order C1, C1p, C1pp, C2, C2p, C2pp.
    """
    c, r = circle.center, circle.radius
    eps = 1e-9
    if not contacts:
        return None
    outs = [k for k in contacts if k.role == "outside"]
    ins = [k for k in contacts if k.role == "inside"]
    q = [k.point for k in outs]
    nq = len(q)
    for i in range(nq):
        for j in range(i + 1, nq):
            for k in range(j + 1, nq):
                if _strictly_inside(c, q[i], q[j], q[k], eps):
                    return "C1"
    tangent_pairs = [
        (i, j)
        for i in range(nq)
        for j in range(i + 1, nq)
        if outs[i].kind == "tangent" and outs[j].kind == "tangent" and _diametral(c, q[i], q[j], r, 1e-7)
    ]
    diam = [(i, j) for i in range(nq) for j in range(i + 1, nq) if _diametral(c, q[i], q[j], r, 1e-7)]
    if tangent_pairs and nq >= 3:
        return "C1p"
    if len(diam) >= 2:
        used = set()
        for i, j in diam:
            if i in used or j in used:
                continue
            used |= {i, j}
        if len(used) >= 4:
            return "C1pp"
    p = [k.point for k in ins]
    for i in range(nq):
        for j in range(i + 1, nq):
            for pk in p:
                s_c = orientation(q[i], q[j], c, eps)
                s_p = orientation(q[i], q[j], pk, eps)
                if s_c != 0 and s_p != 0 and s_c != s_p:
                    return "C2"
    if tangent_pairs and p:
        return "C2p"
    for i, j in diam:
        sides = {orientation(q[i], q[j], pk, eps) for pk in p}
        if 1 in sides and -1 in sides:
            return "C2pp"
    return None


# -- one orientation --------------------------------------------------------------

class _Run:
    def __init__(self, inside_name, inside, outside_name, outside, tol):
        self.tol = tol
        self.inside_name, self.outside_name = inside_name, outside_name
        t0 = time.perf_counter()
        self.vor = build_segment_voronoi(outside, tol)
        pts = []
        self.point_index = {}
        for i, s in enumerate(inside):
            for p in (s.a, s.b):
                pts.append(p)
                self.point_index.setdefault(p, i)
        self.env = build_hierarchy(pts)
        self.build_seconds = time.perf_counter() - t0
        coords = [abs(c) for s in inside + outside for c in (s.a.x, s.a.y, s.b.x, s.b.y)]
        self.scale = max(1.0, max(coords))

    # contacts ------------------------------------------------------------------
    def contact_tol(self, r):
        return 1e-9 * max(1.0, r, self.scale)

    def outside_contacts(self, c, r):
        tol = self.contact_tol(r)
        loc = self.vor.locator
        found = {}
        for k in sorted(loc.within([(c.x, c.y)], [r + tol])):
            for sid in loc.seg_sites[k]:
                if sid is None:
                    continue
                site = self.vor.sites[sid]
                if isinstance(site, InteriorSite):
                    # tangency needs the foot of the perpendicular on the closed
                    # segment; otherwise the nearest point is an endpoint site
                    ln = site.line
                    u = ln.param(c) / site.segment.length()
                    slack = tol / site.segment.length()
                    if u < -slack or u > 1 + slack or abs(abs(ln.signed_distance(c)) - r) > tol:
                        continue
                    kind = "tangent"
                elif abs(site_distance(c, site) - r) > tol:
                    continue
                else:
                    kind = "through"
                pt = contact_point(site, c)
                key = _key(pt, tol)
                old = found.get(key)
                if old is None or (kind == "tangent" and old.kind != "tangent"):
                    found[key] = Contact(self.outside_name, site, pt, kind, site.source, "outside")
        return sorted(found.values(), key=lambda k: (k.point, k.kind))

    def inside_contacts(self, c, r, owners):
        tol = self.contact_tol(r)
        out = []
        for g in owners:
            v = self.env.hull[g]
            if abs(math.hypot(v.x - c.x, v.y - c.y) - r) <= tol:
                out.append(Contact(self.inside_name, v, v, "through", self.point_index[v], "inside"))
        return sorted(out, key=lambda k: k.point)

    # candidates ----------------------------------------------------------------
    def polish_vertex(self, v):
        """Recompute a Voronoi vertex from three of its owners for full precision."""
        sites = [self.vor.sites[o] for o in v.owners]
        best = None
        n = len(sites)
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    try:
                        sols = solve_equidistant(sites[i], sites[j], sites[k], self.tol)
                    except NoSolution:
                        continue
                    for c, r in sols:
                        d = math.hypot(c.x - v.center.x, c.y - v.center.y)
                        if best is None or d < best[0]:
                            best = (d, c, r)
                    if best is not None and best[0] <= 1e-6 * max(1.0, v.clearance):
                        return best[1], best[2]
        if best is not None and best[0] <= 1e-4 * max(1.0, v.clearance):
            return best[1], best[2]
        return v.center, v.clearance

    def check_vertex(self, vid):
        v = self.vor.vertices[vid]
        if v.clearance <= self.tol.eps_merge * self.scale:
            return None
        hit = query_vertical(self.env, v.center)
        z = hit.point.z
        if z > v.clearance * (1 + 1e-6) + self.tol.eps_merge:
            return None  # clearly not separating; skip the polishing work
        c, r = self.polish_vertex(v)
        hit = query_vertical(self.env, c)
        if hit.point.z > r + self.tol.eps_predicate * max(1.0, r):
            return None
        contacts = self.outside_contacts(c, r) + self.inside_contacts(c, r, hit.owners)
        tag = classify_contacts(Circle(c, r), contacts)
        if tag not in VERTEX_TAGS:
            return None
        return SeparatingCircle(Circle(c, r), self.inside_name, tuple(contacts), tag, ("vertex", vid, None))

    def edge_curve(self, e):
        sites = []
        for sid in e.sites:
            s = self.vor.sites[sid]
            if isinstance(s, InteriorSite):
                ln = s.line
                side = "left" if ln.signed_distance(e.sample) > 0 else "right"
                sites.append(LiftingHalfplane(ln, side))
            else:
                sites.append(s.point)
        return curve_from_sites(sites[0], sites[1], self.tol.eps_predicate)

    def edge_range(self, curve, e):
        ts = curve.param_of(_lift(e.sample, self.vor, e))
        ends = []
        for v in e.ends:
            ends.append(None if v is None else curve.param_of(_lift_vertex(self.vor.vertices[v])))
        a, b = ends
        if a is None and b is None:
            return -math.inf, math.inf
        if a is None or b is None:
            f = a if b is None else b
            return (f, math.inf) if ts >= f else (-math.inf, f)
        return min(a, b), max(a, b)

    def check_edge(self, eid):
        e = self.vor.edges[eid]
        try:
            curve = self.edge_curve(e)
        except DegenerateCurve:
            return []  # endpoint against its own segment, or coincident supports
        lo, hi = self.edge_range(curve, e)
        out = []
        for hit in query_curve(self.env, curve):
            t = hit.t
            slack = 1e-9 * max(1.0, abs(t))
            if not (lo - slack <= t <= hi + slack):
                continue
            c, r = hit.point.xy, hit.point.z
            if r <= self.tol.eps_merge * self.scale:
                continue
            contacts = self.outside_contacts(c, r) + self.inside_contacts(c, r, hit.owners)
            tag = classify_contacts(Circle(c, r), contacts)
            if tag in EDGE_TAGS:
                out.append(SeparatingCircle(Circle(c, r), self.inside_name, tuple(contacts), tag, ("edge", eid, t)))
        return out

    def run(self, threads=1):
        t0 = time.perf_counter()
        nv, ne = len(self.vor.vertices), len(self.vor.edges)

        def work(chunk):
            res = []
            for kind, i in chunk:
                if kind == "v":
                    r = self.check_vertex(i)
                    if r is not None:
                        res.append(r)
                else:
                    res.extend(self.check_edge(i))
            return res

        jobs = [("v", i) for i in range(nv)] + [("e", i) for i in range(ne)]
        if threads <= 1 or len(jobs) < 64:
            found = work(jobs)
        else:
            size = (len(jobs) + threads - 1) // threads
            chunks = [jobs[i:i + size] for i in range(0, len(jobs), size)]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                found = [r for part in pool.map(work, chunks) for r in part]
        self.query_seconds = time.perf_counter() - t0
        return found


def _key(p, tol):
    return (round(p.x / (10 * tol)), round(p.y / (10 * tol)))


def _lift(q, vor, e):
    # a sample of the edge lifted to circle space: radius is its clearance
    s = vor.sites[e.sites[0]]
    return CirclePoint(q.x, q.y, site_distance(q, s))


def _lift_vertex(v):
    return CirclePoint(v.center.x, v.center.y, v.clearance)


def _dedupe(records, tol):
    """Merge records of the same circle; vertex-sourced ones win."""
    records = sorted(records, key=lambda s: (s.source[0] != "vertex", s.circle.center, s.circle.radius))
    kept = []
    for rec in records:
        c, r = rec.circle
        dup = False
        for k in kept:
            if k.inside != rec.inside:
                continue
            kc, kr = k.circle
            if (
                abs(kc.x - c.x) <= tol * max(1.0, abs(c.x))
                and abs(kc.y - c.y) <= tol * max(1.0, abs(c.y))
                and abs(kr - r) <= tol * max(1.0, r)
            ):
                dup = True
                break
        if not dup:
            kept.append(rec)
    return kept


def canonical_order(records):
    return sorted(records, key=lambda s: (s.circle.center.x, s.circle.center.y, s.circle.radius, s.inside))


def _elementary_count(S):
    pts = set()
    interiors = 0
    for s in S:
        pts.add(s.a)
        pts.add(s.b)
        interiors += 0 if s.is_point else 1
    return len(pts) + interiors


def find_all_largest_with_info(P, Q, tol=DEFAULT_TOL, threads=1):
    """find_all_largest plus per-orientation RunInfo records."""
    P, Q = validate(P, Q, tol)
    found, infos = [], []
    for inside_name, inside, outside_name, outside in (("P", P, "Q", Q), ("Q", Q, "P", P)):
        if _elementary_count(outside) < 2:
            warnings.warn(
                InsufficientSites(f"{outside_name} has fewer than two sites; {inside_name}-inside run skipped"),
                stacklevel=2,
            )
            continue
        run = _Run(inside_name, inside, outside_name, outside, tol)
        recs = _dedupe(run.run(threads), tol.eps_merge)
        found.extend(recs)
        infos.append(
            RunInfo(
                inside_name,
                len(run.vor.vertices),
                len(run.vor.edges),
                len(run.env.hull),
                len(run.vor.vertices) + len(run.vor.edges),
                len(recs),
                run.build_seconds,
                run.query_seconds,
            )
        )
    return canonical_order(found), infos


def find_all_largest(P, Q, tol=DEFAULT_TOL, threads=1):
    """Every locally largest separating circle with at least three contacts, both orientations."""
    return find_all_largest_with_info(P, Q, tol, threads)[0]


def check_vertex_candidate(run: "_Run", vid: int):
    return run.check_vertex(vid)


def check_edge_candidate(run: "_Run", eid: int):
    return run.check_edge(eid)


def prepare(P, Q, inside="P", tol=DEFAULT_TOL):
    """Build the structures of one orientation (for inspection and tests)."""
    P, Q = validate(P, Q, tol)
    if inside == "P":
        return _Run("P", P, "Q", Q, tol)
    return _Run("Q", Q, "P", P, tol)
