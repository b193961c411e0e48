"""Convex hull, farthest-point Voronoi diagram of hull vertices, and its lifted envelope."""

import heapq
import math
from typing import NamedTuple, Optional

from .circle_space import CirclePoint
from .geom import DEFAULT_TOL, Point2, as_point, orientation


class FVorVertex(NamedTuple):
    center: Point2
    radius: float
    owners: tuple  # hull indices, sorted


class FVorEdge(NamedTuple):
    sites: tuple  # (i, j) hull indices, i < j
    head: Optional[int]  # vertex id or None
    tail: Optional[int]  # vertex id or None (a ray when head is set)
    anchor: Point2
    direction: Optional[Point2]  # unit direction for unbounded edges


class FarthestVoronoi(NamedTuple):
    sites: list  # CCW hull vertices
    triangles: list  # farthest-point Delaunay triangles (i, j, k)
    tri_vertex: list  # triangle index -> vertex id
    vertices: list
    edges: list
    cells: list  # site -> edge ids
    fans: list  # site -> [(neighbor, left triangle id or None, right triangle id or None)]

    def neighbors(self, i: int) -> list:
        return [u for u, _, _ in self.fans[i]]


class UEnvelope(NamedTuple):
    diagram: FarthestVoronoi
    vertices: list  # CirclePoint per diagram vertex

    def height(self, q) -> float:
        return max(math.hypot(q[0] - p.x, q[1] - p.y) for p in self.diagram.sites)


def convex_hull(points, eps: float = DEFAULT_TOL.eps_predicate) -> list:
    """CCW hull without repeated or collinear vertices (Andrew's monotone chain)."""
    pts = sorted(set(as_point(p) for p in points))
    if len(pts) <= 2:
        return pts

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p, eps) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) >= 2 else pts[:1] + pts[-1:]


def circumcenter(a, b, c) -> Point2:
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    if d == 0.0:
        return Point2(math.inf, math.inf)
    b2, c2 = bx * bx + by * by, cx * cx + cy * cy
    return Point2(a[0] + (cy * b2 - by * c2) / d, a[1] + (bx * c2 - cx * b2) / d)


def _circumradius(a, b, c) -> float:
    area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if area2 <= 0.0:
        return math.inf
    la = math.hypot(b[0] - c[0], b[1] - c[1])
    lb = math.hypot(a[0] - c[0], a[1] - c[1])
    lc = math.hypot(a[0] - b[0], a[1] - b[1])
    return la * lb * lc / (2.0 * area2)


def _angle_at(a, b, c) -> float:
    ux, uy = a[0] - b[0], a[1] - b[1]
    vx, vy = c[0] - b[0], c[1] - b[1]
    return math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)


def farthest_triangulation(hull) -> list:
    """Farthest-point Delaunay triangles of a strictly convex CCW polygon.

    Repeatedly clips the vertex whose (prev, v, next) circle is largest; that
    circle encloses every remaining vertex, so the clipped triangle belongs to
    the triangulation.
    """
    m = len(hull)
    if m < 3:
        return []
    prev = [(i - 1) % m for i in range(m)]
    nxt = [(i + 1) % m for i in range(m)]
    version = [0] * m
    heap = []

    def push(i):
        a, b, c = hull[prev[i]], hull[i], hull[nxt[i]]
        heapq.heappush(heap, (-_circumradius(a, b, c), -_angle_at(a, b, c), i, version[i]))

    for i in range(m):
        push(i)
    alive = m
    tris = []
    while alive > 3:
        _, _, i, ver = heapq.heappop(heap)
        if ver != version[i]:
            continue
        p, q = prev[i], nxt[i]
        tris.append((p, i, q))
        nxt[p], prev[q] = q, p
        version[i] = -1
        alive -= 1
        for j in (p, q):
            version[j] += 1
            push(j)
    i = next(k for k in range(m) if version[k] >= 0)
    tris.append((prev[i], i, nxt[i]))
    return tris


def _inward_normal(a, b) -> Point2:
    dx, dy = b[0] - a[0], b[1] - a[1]
    n = math.hypot(dx, dy)
    return Point2(-dy / n, dx / n)


def furthest_voronoi(hull, eps_merge: float = DEFAULT_TOL.eps_merge) -> FarthestVoronoi:
    """Farthest-site Voronoi diagram of CCW hull vertices.

    Cocircular vertices give a single Voronoi vertex of higher degree; the
    zero-length diagram edges that would join its copies are dropped from
    ``edges`` but kept as adjacencies in ``fans``.
    """
    hull = [as_point(p) for p in hull]
    m = len(hull)
    if m == 1:
        return FarthestVoronoi(hull, [], [], [], [], [[]], [[]])
    if m == 2:
        a, b = hull
        mid = Point2(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
        e = FVorEdge((0, 1), None, None, mid, _inward_normal(a, b))
        return FarthestVoronoi(hull, [], [], [], [e], [[0], [0]], [[(1, None, None)], [(0, None, None)]])

    tris = farthest_triangulation(hull)
    scale = max(max(abs(p.x), abs(p.y)) for p in hull)
    tol = eps_merge * max(1.0, scale)
    centers = [circumcenter(*(hull[k] for k in t)) for t in tris]

    edge_tris = {}
    for ti, t in enumerate(tris):
        for u, v in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            edge_tris.setdefault((min(u, v), max(u, v)), []).append(ti)

    # merge circumcenters of triangles that share a diagonal and a circle
    parent = list(range(len(tris)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for key, ts in edge_tris.items():
        if len(ts) == 2:
            c1, c2 = centers[ts[0]], centers[ts[1]]
            if math.hypot(c1.x - c2.x, c1.y - c2.y) <= tol:
                parent[find(ts[0])] = find(ts[1])
    root_id = {}
    tri_vertex = []
    groups = []
    for ti in range(len(tris)):
        r = find(ti)
        if r not in root_id:
            root_id[r] = len(groups)
            groups.append([])
        tri_vertex.append(root_id[r])
        groups[root_id[r]].append(ti)
    vertices = []
    for g in groups:
        owners = sorted({k for ti in g for k in tris[ti]})
        cx = sum(centers[ti].x for ti in g) / len(g)
        cy = sum(centers[ti].y for ti in g) / len(g)
        c = Point2(cx, cy)
        r = max(math.hypot(c.x - hull[k].x, c.y - hull[k].y) for k in owners)
        vertices.append(FVorVertex(c, r, tuple(owners)))

    edges = []
    cells = [[] for _ in range(m)]
    for (u, v), ts in sorted(edge_tris.items()):
        if len(ts) == 1:
            a, b = (u, v) if (v - u) % m == 1 else (v, u)
            vid = tri_vertex[ts[0]]
            e = FVorEdge((u, v), vid, None, vertices[vid].center, _inward_normal(hull[a], hull[b]))
        else:
            h, t = tri_vertex[ts[0]], tri_vertex[ts[1]]
            if h == t:
                continue
            e = FVorEdge((u, v), h, t, vertices[h].center, None)
        cells[u].append(len(edges))
        cells[v].append(len(edges))
        edges.append(e)

    tri_of = {}
    for ti, t in enumerate(tris):
        tri_of[frozenset(t)] = ti
    adj = [[] for _ in range(m)]
    for u, v in edge_tris:
        adj[u].append(v)
        adj[v].append(u)
    fans = []
    for v in range(m):
        nb = sorted(adj[v], key=lambda k: (k - v) % m)
        fan = []
        for j, u in enumerate(nb):
            left = tri_of.get(frozenset((v, nb[j - 1], u))) if j > 0 else None
            right = tri_of.get(frozenset((v, u, nb[j + 1]))) if j + 1 < len(nb) else None
            fan.append((u, left, right))
        fans.append(fan)
    return FarthestVoronoi(hull, tris, tri_vertex, vertices, edges, cells, fans)


def lift_envelope(d: FarthestVoronoi) -> UEnvelope:
    return UEnvelope(d, [CirclePoint(v.center.x, v.center.y, v.radius) for v in d.vertices])


def farthest_site(sites, q):
    """Index and distance of the farthest site from q (linear scan)."""
    best, bd = -1, -1.0
    for i, p in enumerate(sites):
        d = math.hypot(q[0] - p[0], q[1] - p[1])
        if d > bd:
            best, bd = i, d
    return best, bd
