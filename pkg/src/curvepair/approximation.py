"""Piecewise-linear approximation of one curve on a balanced partition.

Geometry is done on an integer grid: grid point ``(u, v)`` at depth ``G``
is the dyadic point ``(x0 + L*u/2^G, y0 + L*v/2^G)``.  ``G`` is four levels
below the deepest leaf, which leaves room for edge midpoints and for the
edge_length/8 offsets applied when snakes are separated.  The map to the
plane is an orientation-preserving scaling, so orientation and incidence
tests on grid coordinates are exact.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .arith import Dyadic
from .poly import BivariatePolynomial, eval_scaled_point
from .subdivision import SIDES, BoxNode, Partition, Region

__all__ = [
    "Grid",
    "Edge",
    "Skeleton",
    "Segment",
    "CurveApprox",
    "OddVertexCount",
    "sign_map",
    "place_vertices",
    "connect_box",
    "assemble",
]

GRID_MARGIN = 4


class OddVertexCount(RuntimeError):
    pass


@dataclass(frozen=True)
class Grid:
    """Integer grid of a partition and the affine map back to output coordinates.

    ``out_scale`` differs from the region side only when a rectangle was
    rescaled to a square: evaluation uses the square, output the rectangle.
    """

    region: Region
    depth: int
    out_scale: tuple = None

    def scaled(self, u: int, v: int):
        """Point as scaled integers for the evaluation kernels."""
        G = self.depth
        L = self.region.side
        return (self.region.x0 << G) + L * u, (self.region.y0 << G) + L * v, G

    def sign(self, p: BivariatePolynomial, u: int, v: int) -> int:
        """Exact sign of p at the grid point; an exact zero counts as positive."""
        return -1 if eval_scaled_point(p, *self.scaled(u, v)) < 0 else 1

    def to_dyadic(self, u, v):
        sx, sy = self.out_scale or (self.region.side, self.region.side)
        G = self.depth
        return (Dyadic(self.region.x0) + Dyadic(sx * u, -G), Dyadic(self.region.y0) + Dyadic(sy * v, -G))

    def to_fraction(self, u, v):
        """Exact output coordinates of a rational grid point (crossings need not be dyadic)."""
        from fractions import Fraction

        sx, sy = self.out_scale or (self.region.side, self.region.side)
        scale = Fraction(1, 1 << self.depth)
        return self.region.x0 + sx * Fraction(u) * scale, self.region.y0 + sy * Fraction(v) * scale

    def to_float(self, u, v):
        x, y = self.to_fraction(u, v)
        return float(x), float(y)

    def box_bounds(self, b: BoxNode):
        return b.grid_bounds(self.depth)


@dataclass(frozen=True, order=True)
class Edge:
    """Subdivision edge: ``horizontal`` at y = fixed or vertical at x = fixed, spanning lo..hi."""

    horizontal: bool
    fixed: int
    lo: int
    hi: int

    @property
    def endpoints(self):
        if self.horizontal:
            return (self.lo, self.fixed), (self.hi, self.fixed)
        return (self.fixed, self.lo), (self.fixed, self.hi)

    @property
    def midpoint(self):
        m = (self.lo + self.hi) // 2
        return (m, self.fixed) if self.horizontal else (self.fixed, m)

    @property
    def length(self) -> int:
        return self.hi - self.lo

    @property
    def direction(self):
        return (1, 0) if self.horizontal else (0, 1)


class Skeleton:
    """Edges of a balanced partition, per box in counter-clockwise order, with their owners."""

    def __init__(self, part: Partition, out_scale=None):
        self.part = part
        self.grid = Grid(part.region, part.max_depth + GRID_MARGIN, out_scale)
        self.box_edges = {}
        self.owners = defaultdict(list)
        for b in part.leaves:
            edges = self._edges_of(b)
            self.box_edges[b] = edges
            for _, e in edges:
                self.owners[e].append(b)

    def _edges_of(self, b: BoxNode):
        G = self.grid.depth
        xl, xh, yl, yh = b.grid_bounds(G)
        out = []
        for side in SIDES:
            nbrs = [n for n in self.part.side_neighbors(b, side) if n.depth > b.depth]
            if side in ("S", "N"):
                fixed = yl if side == "S" else yh
                spans = [(n.grid_bounds(G)[0], n.grid_bounds(G)[1]) for n in nbrs] or [(xl, xh)]
                spans.sort(reverse=(side == "N"))
                out.extend((side, Edge(True, fixed, lo, hi)) for lo, hi in spans)
            else:
                fixed = xh if side == "E" else xl
                spans = [(n.grid_bounds(G)[2], n.grid_bounds(G)[3]) for n in nbrs] or [(yl, yh)]
                spans.sort(reverse=(side == "W"))
                out.extend((side, Edge(False, fixed, lo, hi)) for lo, hi in spans)
        return out

    def edges(self):
        return self.owners.keys()

    def perimeter_position(self, b: BoxNode, point) -> int:
        """Counter-clockwise arc length from the SW corner to a point on b's boundary."""
        xl, xh, yl, yh = b.grid_bounds(self.grid.depth)
        w = xh - xl
        u, v = point
        if v == yl and u < xh:
            return u - xl
        if u == xh and v < yh:
            return w + (v - yl)
        if v == yh and u > xl:
            return 2 * w + (xh - u)
        return 3 * w + (yh - v)

    def on_boundary(self, point) -> bool:
        u, v = point
        n = 1 << self.grid.depth
        return u == 0 or v == 0 or u == n or v == n


@dataclass(frozen=True)
class Segment:
    a: object
    b: object
    box: BoxNode

    def key(self):
        return (self.box, frozenset((self.a, self.b)))


@dataclass
class CurveApprox:
    """Graph of an approximation: node -> grid position, plus segments tagged with their box.

    Nodes placed on subdivision edges are keyed by the :class:`Edge`; nodes
    added later (explicit crossings) use other hashable keys.
    """

    grid: Grid
    positions: dict = field(default_factory=dict)
    segments: list = field(default_factory=list)

    @property
    def vertices(self):
        return {n: p for n, p in self.positions.items() if isinstance(n, Edge)}

    def incident(self):
        inc = defaultdict(list)
        for s in self.segments:
            inc[s.a].append(s)
            inc[s.b].append(s)
        return inc

    def degrees(self):
        deg = dict.fromkeys(self.positions, 0)
        for s in self.segments:
            deg[s.a] += 1
            deg[s.b] += 1
        return deg

    def copy(self) -> "CurveApprox":
        return CurveApprox(self.grid, dict(self.positions), list(self.segments))

    def components(self):
        """Connected components as ``(node_list, closed)``; open ones start at a degree-1 node."""
        inc = self.incident()
        seen = set()
        out = []
        starts = sorted((n for n in inc if len(inc[n]) == 1), key=repr)
        rest = sorted((n for n in inc if len(inc[n]) != 1), key=repr)
        for start in starts + rest:
            if start in seen:
                continue
            path = [start]
            seen.add(start)
            used = set()
            node = start
            closed = False
            while True:
                nxt = None
                for s in inc[node]:
                    if id(s) in used:
                        continue
                    used.add(id(s))
                    nxt = s.b if s.a == node else s.a
                    break
                if nxt is None:
                    break
                if nxt == start:
                    closed = True
                    break
                if nxt in seen:
                    break
                seen.add(nxt)
                path.append(nxt)
                node = nxt
            out.append((path, closed))
        return out

    def polylines(self):
        """Components as lists of grid points; closed ones repeat their first point."""
        lines = []
        for path, closed in self.components():
            pts = [self.positions[n] for n in path]
            if closed:
                pts.append(pts[0])
            lines.append((pts, closed))
        return lines


def sign_map(p: BivariatePolynomial, part: Partition, skeleton: Skeleton | None = None):
    """Exact sign (+1 / -1, zero counted as +1) at every edge endpoint, keyed by grid point."""
    sk = skeleton or Skeleton(part)
    signs = {}
    for e in sk.edges():
        for pt in e.endpoints:
            if pt not in signs:
                signs[pt] = sk.grid.sign(p, *pt)
    return signs


def place_vertices(p: BivariatePolynomial, part: Partition, skeleton: Skeleton | None = None, signs=None):
    """One vertex at the midpoint of every edge whose endpoint signs differ: ``{edge: point}``."""
    sk = skeleton or Skeleton(part)
    signs = signs if signs is not None else sign_map(p, part, sk)
    out = {}
    for e in sk.edges():
        a, b = e.endpoints
        if signs[a] != signs[b]:
            out[e] = e.midpoint
    return out


def _noncrossing_matchings(n: int):
    """All non-crossing perfect matchings of points 0..n-1 placed on a circle."""

    def rec(lo, hi):
        if lo > hi:
            yield []
            return
        for k in range(lo + 1, hi + 1, 2):
            for inner in rec(lo + 1, k - 1):
                for outer in rec(k + 1, hi):
                    yield [(lo, k)] + inner + outer

    return list(rec(0, n - 1))


def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def connect_box(p: BivariatePolynomial, box: BoxNode, vertices, grid: Grid, signs=None):
    """Non-crossing matching of a box's vertices.

    ``vertices`` are ``(side, edge, point)`` in counter-clockwise order.  With
    four or more vertices a chord may not join two vertices on one side of
    the box; if several matchings remain, the one whose central face has the
    exact sign of p at the box centre wins.  Returns index pairs into
    ``vertices``.
    """
    n = len(vertices)
    if n % 2:
        raise OddVertexCount(f"box {box.address()} has {n} vertices")
    if n == 0:
        return []
    if n == 2:
        return [(0, 1)]
    candidates = [
        m for m in _noncrossing_matchings(n) if all(vertices[a][0] != vertices[b][0] for a, b in m)
    ]
    if not candidates:
        raise OddVertexCount(f"box {box.address()} admits no valid matching")
    if len(candidates) == 1:
        return candidates[0]

    xl, xh, yl, yh = box.grid_bounds(grid.depth)
    center = ((xl + xh) // 2, (yl + yh) // 2)
    center_sign = grid.sign(p, *center)
    # sign on the boundary arc leaving vertex t counter-clockwise
    arc_points = [vertices[t][1].endpoints[1 if vertices[t][0] in ("S", "E") else 0] for t in range(n)]
    arc_signs = [signs[pt] if signs is not None else grid.sign(p, *pt) for pt in arc_points]
    for m in candidates:
        pts = [v[2] for v in vertices]
        if any(_orient(pts[a], pts[b], center) == 0 for a, b in m):
            continue
        for t in range(n):
            probe = arc_points[t]
            if all(_orient(pts[a], pts[b], probe) == _orient(pts[a], pts[b], center) for a, b in m):
                if arc_signs[t] == center_sign:
                    return m
                break
    return candidates[0]


def assemble(p: BivariatePolynomial, part: Partition, skeleton: Skeleton | None = None) -> CurveApprox:
    sk = skeleton or Skeleton(part)
    signs = sign_map(p, part, sk)
    verts = place_vertices(p, part, sk, signs)
    approx = CurveApprox(sk.grid, dict(verts), [])
    for b in sorted(part.leaves):
        on_box = [(side, e, verts[e]) for side, e in sk.box_edges[b] if e in verts]
        for i, j in connect_box(p, b, on_box, sk.grid, signs):
            approx.segments.append(Segment(on_box[i][1], on_box[j][1], b))
    return approx
