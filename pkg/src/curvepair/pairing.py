"""Crossings between the two approximations.

Two approximations built on one partition meet in three ways: chords of the
same box that cross in its interior (transversal crossings), vertices both
curves place on the same edge, and segments both curves draw in the same
box.  Maximal chains of the last two form *snakes*.  Whether a snake hides
a crossing is read off the cyclic order of the four chords leaving its two
ends; resolution then pulls the curves apart along the snake, inserting one
explicit crossing in the middle when the verdict says so.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .approximation import CurveApprox, Edge, Segment, Skeleton
from .arith import IBox
from .subdivision import BoxNode, Partition

__all__ = [
    "TransversalCrossing",
    "Snake",
    "SnakeCrossing",
    "CrossingReport",
    "Orientation",
    "Verdict",
    "OpenSnake",
    "ClosedSnake",
    "EndpointOnSnakeBoundary",
    "find_transversal",
    "find_snakes",
    "snake_orientation",
    "verdict_from_orientations",
    "resolve_snakes",
    "build_report",
    "segment_intersection",
]


class OpenSnake(RuntimeError):
    def __init__(self, vertex, box: BoxNode | None = None):
        super().__init__(f"snake reaches the region boundary at {vertex} without separating")
        self.vertex = vertex
        self.box = box


class ClosedSnake(RuntimeError):
    pass


class EndpointOnSnakeBoundary(RuntimeError):
    def __init__(self, head: BoxNode):
        super().__init__(f"orientation tie in head box {head.address()}")
        self.head = head


class Orientation(str, enum.Enum):
    CW = "CW"
    CCW = "CCW"


class Verdict(str, enum.Enum):
    CROSSING = "crossing"
    NO_CROSSING = "no_crossing"


@dataclass(frozen=True)
class TransversalCrossing:
    box: BoxNode
    point: tuple  # grid coordinates, Fractions
    isolating_hull: IBox
    f_segment: Segment
    g_segment: Segment


@dataclass
class SnakeEnd:
    vertex: Edge
    head: BoxNode
    chain_ray: tuple
    f_other: object
    g_other: object


@dataclass
class Snake:
    """Chain of shared vertices ``shared[0..m]`` linked by ``m`` shared segments."""

    shared: list
    segment_boxes: list
    ends: tuple

    @property
    def heads(self):
        return (self.ends[0].head, self.ends[1].head)

    @property
    def boxes(self):
        return list(self.segment_boxes)

    @property
    def endpoints(self):
        a, b = self.ends
        return (a.f_other, a.g_other, b.f_other, b.g_other)

    @property
    def degenerate(self) -> bool:
        return not self.segment_boxes


@dataclass(frozen=True)
class SnakeCrossing:
    snake: Snake
    point: tuple
    isolating_hull: IBox


@dataclass
class CrossingReport:
    transversal: list
    snake_crossings: list
    resolved_approx_f: CurveApprox
    resolved_approx_g: CurveApprox
    snakes: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.transversal) + len(self.snake_crossings)

    def crossing_points(self):
        return [c.point for c in self.transversal] + [c.point for c in self.snake_crossings]

    def hulls(self):
        return [c.isolating_hull for c in self.transversal] + [c.isolating_hull for c in self.snake_crossings]


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def segment_intersection(p1, p2, q1, q2):
    """Exact intersection of closed segments: None, a point, or ('overlap', a, b)."""
    p1, p2, q1, q2 = (tuple(Fraction(c) for c in pt) for pt in (p1, p2, q1, q2))
    r = _sub(p2, p1)
    s = _sub(q2, q1)
    denom = _cross(r, s)
    qp = _sub(q1, p1)
    if denom == 0:
        if _cross(qp, r) != 0:
            return None
        rr = r[0] * r[0] + r[1] * r[1]
        if rr == 0:
            return p1 if p1 in (q1, q2) else None
        t0 = (qp[0] * r[0] + qp[1] * r[1]) / rr
        t1 = t0 + (s[0] * r[0] + s[1] * r[1]) / rr
        lo, hi = max(min(t0, t1), 0), min(max(t0, t1), 1)
        if lo > hi:
            return None
        a = (p1[0] + lo * r[0], p1[1] + lo * r[1])
        if lo == hi:
            return a
        return ("overlap", a, (p1[0] + hi * r[0], p1[1] + hi * r[1]))
    t = _cross(qp, s) / denom
    u = _cross(qp, r) / denom
    if 0 <= t <= 1 and 0 <= u <= 1:
        return (p1[0] + t * r[0], p1[1] + t * r[1])
    return None


def _hull(part: Partition, boxes, ring: int = 1) -> IBox:
    members = set()
    for b in boxes:
        members |= part.neighborhood_members(b, ring)
    return part.hull(members)


def find_transversal(af: CurveApprox, ag: CurveApprox, part: Partition, skeleton: Skeleton):
    """Chords of A(f) and A(g) in one box whose four endpoints are distinct and interleaved."""
    by_box_g = defaultdict(list)
    for s in ag.segments:
        by_box_g[s.box].append(s)
    out = []
    for sf in af.segments:
        for sg in by_box_g.get(sf.box, ()):
            if len({sf.a, sf.b, sg.a, sg.b}) < 4:
                continue
            pf = (af.positions[sf.a], af.positions[sf.b])
            pg = (ag.positions[sg.a], ag.positions[sg.b])
            pos = [skeleton.perimeter_position(sf.box, pt) for pt in pf + pg]
            lo, hi = sorted(pos[:2])
            if (lo < pos[2] < hi) == (lo < pos[3] < hi):
                continue
            point = segment_intersection(*pf, *pg)
            hull = _hull(part, [sf.box])
            out.append(TransversalCrossing(sf.box, point, hull, sf, sg))
    out.sort(key=lambda c: (c.box, c.point))
    return out


def _normal_into(skeleton: Skeleton, e: Edge, target: BoxNode):
    """Unit normal of edge e pointing into ``target`` (one of its owners)."""
    xl, xh, yl, yh = target.grid_bounds(skeleton.grid.depth)
    if e.horizontal:
        return (0, 1) if yl >= e.fixed else (0, -1)
    return (1, 0) if xl >= e.fixed else (-1, 0)


def find_snakes(af: CurveApprox, ag: CurveApprox, part: Partition, skeleton: Skeleton):
    shared = set(af.vertices) & set(ag.vertices)
    if not shared:
        return []
    inc_f = af.incident()
    inc_g = ag.incident()
    f_keys = {s.key(): s for s in af.segments}
    links = defaultdict(list)
    for s in ag.segments:
        if s.key() in f_keys:
            links[s.a].append((s.b, s.box))
            links[s.b].append((s.a, s.box))

    seen = set()
    snakes = []
    for start in sorted(shared):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w, _ in links[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        ends = sorted(v for v in comp if len(links[v]) < 2)
        if not ends:
            raise ClosedSnake(f"shared segments form a closed loop through {start}")
        chain = [ends[0]]
        boxes = []
        prev = None
        while True:
            nxt = [(w, b) for w, b in links[chain[-1]] if w != prev]
            if not nxt:
                break
            prev = chain[-1]
            chain.append(nxt[0][0])
            boxes.append(nxt[0][1])
        snakes.append(_make_snake(chain, boxes, af, ag, inc_f, inc_g, skeleton))
    return snakes


def _make_snake(chain, boxes, af, ag, inc_f, inc_g, skeleton):
    for v in (chain[0], chain[-1]):
        if len(inc_f[v]) < 2 or len(inc_g[v]) < 2:
            raise OpenSnake(v, min(skeleton.owners[v]))

    def head_pair(v, chain_box):
        fs = [s for s in inc_f[v] if s.box != chain_box]
        gs = [s for s in inc_g[v] if s.box != chain_box]
        (sf,), (sg,) = fs, gs
        assert sf.box == sg.box, "both curves leave a shared vertex into the same box"
        return sf, sg

    pos = af.positions
    if not boxes:
        v = chain[0]
        h0, h1 = sorted(skeleton.owners[v])
        ends = []
        for head, other in ((h0, h1), (h1, h0)):
            sf = next(s for s in inc_f[v] if s.box == head)
            sg = next(s for s in inc_g[v] if s.box == head)
            ray = _normal_into(skeleton, v, other)
            ends.append(SnakeEnd(v, head, ray, _other(sf, v), _other(sg, v)))
        return Snake([v], [], tuple(ends))

    ends = []
    for v, nbr, chain_box in ((chain[0], chain[1], boxes[0]), (chain[-1], chain[-2], boxes[-1])):
        sf, sg = head_pair(v, chain_box)
        ray = _sub(pos[nbr], pos[v])
        ends.append(SnakeEnd(v, sf.box, ray, _other(sf, v), _other(sg, v)))
    return Snake(list(chain), list(boxes), tuple(ends))


def _other(seg: Segment, v):
    return seg.b if seg.a == v else seg.a


def _cw_half(ref, v, head):
    c = _cross(ref, v)
    d = ref[0] * v[0] + ref[1] * v[1]
    if c == 0 and d > 0:
        raise EndpointOnSnakeBoundary(head)
    return 0 if c < 0 or c == 0 else 1


def _cw_first(ref, a, b, head) -> bool:
    """True when ray a is met before ray b sweeping clockwise from ref."""
    ha, hb = _cw_half(ref, a, head), _cw_half(ref, b, head)
    if ha != hb:
        return ha < hb
    c = _cross(a, b)
    if c == 0:
        raise EndpointOnSnakeBoundary(head)
    return c < 0


def _end_orientation(end: SnakeEnd, af: CurveApprox, ag: CurveApprox) -> Orientation:
    v = af.positions[end.vertex]
    fray = _sub(af.positions[end.f_other], v)
    gray = _sub(ag.positions[end.g_other], v)
    return Orientation.CW if _cw_first(end.chain_ray, fray, gray, end.head) else Orientation.CCW


def verdict_from_orientations(o1: Orientation, o2: Orientation) -> Verdict:
    return Verdict.CROSSING if Orientation(o1) == Orientation(o2) else Verdict.NO_CROSSING


def snake_orientation(s: Snake, af: CurveApprox, ag: CurveApprox):
    """Orientation of the g-end relative to the f-end at each head, and the verdict.

    At each end the rays to the f- and g-continuations are swept clockwise
    starting from the snake; CW means the f-continuation comes first.
    Going around a thin tube about the snake visits the two ends in these
    sweep orders, so equal orientations mean the endpoints interleave.
    """
    o = (_end_orientation(s.ends[0], af, ag), _end_orientation(s.ends[1], af, ag))
    return verdict_from_orientations(*o), o


def _right(n):
    return (n[1], -n[0])


def resolve_snakes(af, ag, snakes, verdicts, part: Partition, skeleton: Skeleton):
    """Separate every snake; crossing snakes get one explicit crossing.

    ``verdicts`` holds ``(verdict, (o1, o2))`` per snake as returned by
    :func:`snake_orientation`.  Returns resolved copies and the list of
    :class:`SnakeCrossing`.
    """
    rf, rg = af.copy(), ag.copy()
    crossings = []
    for idx, (s, (verdict, (o1, o2))) in enumerate(zip(snakes, verdicts)):
        # curve to the right of travel (head 0 -> head 1) at each end
        right0 = "f" if o1 == Orientation.CW else "g"
        right1 = "g" if o2 == Orientation.CW else "f"
        hull = _hull(part, list(s.segment_boxes) + list(s.heads))
        if s.degenerate:
            v = s.shared[0]
            if verdict == Verdict.CROSSING:
                crossings.append(SnakeCrossing(s, tuple(Fraction(c) for c in af.positions[v]), hull))
                continue
            n = _normal_into(skeleton, v, s.heads[1])
            _displace(rf, rg, v, n, right0)
            continue

        m = len(s.segment_boxes)
        path_boxes = [s.heads[0]] + list(s.segment_boxes) + [s.heads[1]]
        split = m // 2 if verdict == Verdict.CROSSING else m
        for k, v in enumerate(s.shared):
            n = _normal_into(skeleton, v, path_boxes[k + 1])
            _displace(rf, rg, v, n, right0 if k <= split else right1)
        if verdict == Verdict.CROSSING:
            a, b = s.shared[split], s.shared[split + 1]
            pa, pb = af.positions[a], af.positions[b]
            mid = ((pa[0] + pb[0]) // 2, (pa[1] + pb[1]) // 2)
            box = s.segment_boxes[split]
            for approx, tag in ((rf, "f"), (rg, "g")):
                node = ("crossing", idx)
                approx.positions[node] = mid
                approx.segments = [
                    seg for seg in approx.segments if not (seg.box == box and {seg.a, seg.b} == {a, b})
                ]
                approx.segments.extend([Segment(a, node, box), Segment(node, b, box)])
            crossings.append(SnakeCrossing(s, (Fraction(mid[0]), Fraction(mid[1])), hull))
    return rf, rg, crossings


def _displace(rf: CurveApprox, rg: CurveApprox, v: Edge, n, right_curve: str):
    delta = v.length // 8
    r = _right(n)
    d = (r[0] * delta, r[1] * delta)
    rp, lp = (rf, rg) if right_curve == "f" else (rg, rf)
    u, w = rp.positions[v]
    rp.positions[v] = (u + d[0], w + d[1])
    u, w = lp.positions[v]
    lp.positions[v] = (u - d[0], w - d[1])


def build_report(af, ag, part: Partition, skeleton: Skeleton) -> CrossingReport:
    transversal = find_transversal(af, ag, part, skeleton)
    snakes = find_snakes(af, ag, part, skeleton)
    verdicts = [snake_orientation(s, af, ag) for s in snakes]
    rf, rg, snake_crossings = resolve_snakes(af, ag, snakes, verdicts, part, skeleton)
    return CrossingReport(transversal, snake_crossings, rf, rg, snakes)
