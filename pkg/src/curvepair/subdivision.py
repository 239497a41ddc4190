"""Quadtree subdivision of a square region driven by the acceptance rules.

Boxes are addressed on the dyadic grid of the region: ``BoxNode(d, i, j)``
covers ``[x0 + L*i/2^d, x0 + L*(i+1)/2^d] × [y0 + L*j/2^d, ...]`` where the
region is ``[x0, x0+L] × [y0, y0+L]``.

The queue is processed breadth first.  The working partition (accepted
leaves plus queued boxes) is kept 2:1 balanced at all times, so the N₂ hull
seen when a box is popped never includes a coarse far-away box; the final
partition only refines every snapshot, so the pop-time rule-4 test implies
the final one (checked again by :func:`verify_rule4`).
"""

from __future__ import annotations

import enum
import logging
from collections import deque
from dataclasses import dataclass

from .arith import Dyadic, IBox
from .poly import CurvePair
from .predicates import c0, c1, c1_cross

__all__ = [
    "BoxNode",
    "Rule",
    "Region",
    "Partition",
    "Neighborhood",
    "MaxDepthExceeded",
    "IterationCapExceeded",
    "children",
    "neighborhood",
    "subdivide",
    "balance",
    "verify_rule4",
    "DEFAULT_MAX_DEPTH",
]

log = logging.getLogger(__name__)

DEFAULT_MAX_DEPTH = 24

SIDES = ("S", "E", "N", "W")
_STEP = {"S": (0, -1), "E": (1, 0), "N": (0, 1), "W": (-1, 0)}
_OPPOSITE = {"S": "N", "N": "S", "E": "W", "W": "E"}


class MaxDepthExceeded(RuntimeError):
    def __init__(self, box: "BoxNode", cap: int):
        super().__init__(f"box {box.address()} still rejected at depth cap {cap}")
        self.box = box
        self.cap = cap


class IterationCapExceeded(RuntimeError):
    pass


class Rule(str, enum.Enum):
    C0C0 = "C0C0"
    C0C1 = "C0C1"
    C1C0 = "C1C0"
    C1C1X = "C1C1X"


@dataclass(frozen=True, order=True)
class BoxNode:
    depth: int
    ix: int
    iy: int

    def children(self):
        d, i, j = self.depth + 1, 2 * self.ix, 2 * self.iy
        return (BoxNode(d, i, j), BoxNode(d, i + 1, j), BoxNode(d, i, j + 1), BoxNode(d, i + 1, j + 1))

    def parent(self) -> "BoxNode":
        return BoxNode(self.depth - 1, self.ix >> 1, self.iy >> 1)

    def grid_bounds(self, depth: int):
        """``(xl, xh, yl, yh)`` in units of side/2**depth; depth must be >= self.depth."""
        s = depth - self.depth
        return self.ix << s, (self.ix + 1) << s, self.iy << s, (self.iy + 1) << s

    def contains_node(self, other: "BoxNode") -> bool:
        s = other.depth - self.depth
        return s >= 0 and other.ix >> s == self.ix and other.iy >> s == self.iy

    def address(self):
        return {"depth": self.depth, "ix": self.ix, "iy": self.iy}


def children(b: BoxNode, max_depth: int | None = None):
    if max_depth is not None and b.depth >= max_depth:
        raise MaxDepthExceeded(b, max_depth)
    return b.children()


@dataclass(frozen=True)
class Region:
    """The square ``[x0, x0+side] × [y0, y0+side]`` with integer corners."""

    x0: int
    y0: int
    side: int

    def __post_init__(self):
        if self.side <= 0:
            raise ValueError("region side must be positive")

    @classmethod
    def from_corners(cls, x0: int, y0: int, x1: int, y1: int) -> "Region":
        if x1 - x0 != y1 - y0:
            raise ValueError("region must be a square; rescale rectangles first")
        return cls(x0, y0, x1 - x0)

    def bounds(self):
        return (self.x0, self.y0, self.x0 + self.side, self.y0 + self.side)

    def scaled_box(self, xl: int, xh: int, yl: int, yh: int, depth: int):
        """Grid bounds at ``depth`` to the scaled-integer form used by the kernels."""
        ox = self.x0 << depth
        oy = self.y0 << depth
        L = self.side
        return ox + L * xl, ox + L * xh, oy + L * yl, oy + L * yh, depth

    def ibox(self, xl: int, xh: int, yl: int, yh: int, depth: int) -> IBox:
        return IBox.from_scaled(*self.scaled_box(xl, xh, yl, yh, depth))

    def point(self, u: int, v: int, depth: int):
        """Dyadic coordinates of grid point (u, v) at ``depth``."""
        return (
            Dyadic(self.x0) + Dyadic(self.side * u, -depth),
            Dyadic(self.y0) + Dyadic(self.side * v, -depth),
        )


class _Tree:
    """Leaf lookup shared by the working and final partitions."""

    def __init__(self, region: Region, leaves):
        self.region = region
        self.leaves = leaves  # BoxNode -> rule (None while queued)

    def leaf_containing(self, b: BoxNode):
        """Leaf that equals or contains b, or None if b is subdivided further."""
        d, i, j = b.depth, b.ix, b.iy
        leaves = self.leaves
        for s in range(d + 1):
            cand = BoxNode(d - s, i >> s, j >> s)
            if cand in leaves:
                return cand
        return None

    def _leaves_along(self, b: BoxNode, side: str, out: list):
        if b in self.leaves:
            out.append(b)
            return
        c00, c10, c01, c11 = b.children()
        pick = {"S": (c00, c10), "N": (c01, c11), "W": (c00, c01), "E": (c10, c11)}[side]
        for c in pick:
            self._leaves_along(c, side, out)

    def side_neighbors(self, b: BoxNode, side: str):
        """Leaves sharing a positive-length piece of b's given side."""
        di, dj = _STEP[side]
        i, j = b.ix + di, b.iy + dj
        n = 1 << b.depth
        if not (0 <= i < n and 0 <= j < n):
            return []
        cell = BoxNode(b.depth, i, j)
        leaf = self.leaf_containing(cell)
        if leaf is not None:
            return [leaf]
        out = []
        self._leaves_along(cell, _OPPOSITE[side], out)
        return out

    def neighbors(self, b: BoxNode):
        out = []
        for side in SIDES:
            out.extend(self.side_neighbors(b, side))
        return out

    def neighborhood_members(self, b: BoxNode, i: int):
        members = {b}
        frontier = [b]
        for _ in range(i):
            fresh = []
            for m in frontier:
                for n in self.neighbors(m):
                    if n not in members:
                        members.add(n)
                        fresh.append(n)
            frontier = fresh
        return members

    def hull_bounds(self, members):
        depth = max(m.depth for m in members)
        xl = yl = None
        xh = yh = None
        for m in members:
            a, b_, c, d = m.grid_bounds(depth)
            xl = a if xl is None or a < xl else xl
            xh = b_ if xh is None or b_ > xh else xh
            yl = c if yl is None or c < yl else yl
            yh = d if yh is None or d > yh else yh
        return xl, xh, yl, yh, depth

    def hull(self, members) -> IBox:
        return self.region.ibox(*self.hull_bounds(members))

    def box(self, b: BoxNode) -> IBox:
        return self.region.ibox(b.ix, b.ix + 1, b.iy, b.iy + 1, b.depth)


@dataclass(frozen=True)
class Neighborhood:
    center: BoxNode
    members: frozenset
    hull: IBox


class Partition(_Tree):
    """Final set of accepted leaves tiling the region; ``leaves`` maps node to rule."""

    def __init__(self, region: Region, leaves: dict):
        super().__init__(region, dict(leaves))

    @property
    def max_depth(self) -> int:
        return max(b.depth for b in self.leaves)

    def rule(self, b: BoxNode):
        return self.leaves[b]

    def is_balanced(self) -> bool:
        return all(abs(n.depth - b.depth) <= 1 for b in self.leaves for n in self.neighbors(b))

    def tiles_region(self) -> bool:
        """Interior-disjoint cover of the region, checked by exact area and containment."""
        D = self.max_depth
        total = sum(1 << (2 * (D - b.depth)) for b in self.leaves)
        if total != 1 << (2 * D):
            return False
        for b in self.leaves:
            for s in range(1, b.depth + 1):
                if BoxNode(b.depth - s, b.ix >> s, b.iy >> s) in self.leaves:
                    return False
        return True

    def __len__(self):
        return len(self.leaves)


def neighborhood(p: _Tree, b: BoxNode, i: int) -> Neighborhood:
    if b not in p.leaves:
        raise KeyError(f"{b} is not a leaf")
    members = p.neighborhood_members(b, i)
    return Neighborhood(b, frozenset(members), p.hull(members))


class _Subdivider:
    def __init__(self, pair: CurvePair, region: Region, max_depth: int, min_depth: int = 0):
        self.pair = pair
        self.region = region
        self.max_depth = max_depth
        self.min_depth = min_depth
        self.tree = _Tree(region, {})
        self.queue = deque()
        self.cache = {}

    # predicate evaluation, cached per box
    def _flags(self, b: BoxNode):
        flags = self.cache.get(b)
        if flags is None:
            flags = {}
            self.cache[b] = flags
        return flags

    def _test(self, b: BoxNode, name: str) -> bool:
        flags = self._flags(b)
        if name not in flags:
            box = self.tree.box(b)
            pair = self.pair
            if name == "c0f":
                flags[name] = c0(pair.f, box).value
            elif name == "c0g":
                flags[name] = c0(pair.g, box).value
            elif name == "c1f":
                flags[name] = c1(pair.f, box, (pair.fx, pair.fy)).value
            else:
                flags[name] = c1(pair.g, box, (pair.gx, pair.gy)).value
        return flags[name]

    def local_rule(self, b: BoxNode):
        """Rules 1-3, which depend on b alone."""
        t = self._test
        if t(b, "c0f") and t(b, "c0g"):
            return Rule.C0C0
        if t(b, "c0f") and t(b, "c1g"):
            return Rule.C0C1
        if t(b, "c1f") and t(b, "c0g"):
            return Rule.C1C0
        return None

    def rule4(self, b: BoxNode) -> bool:
        if not (self._test(b, "c1f") and self._test(b, "c1g")):
            return False
        members = self.tree.neighborhood_members(b, 2)
        return c1_cross(self.pair, self.tree.hull(members)).value

    def classify(self, b: BoxNode):
        rule = self.local_rule(b)
        if rule is None and self.rule4(b):
            rule = Rule.C1C1X
        return rule

    # partition surgery
    def split(self, b: BoxNode):
        """Replace leaf b by its children and restore 2:1 balance around them."""
        leaves = self.tree.leaves
        old = leaves.pop(b)
        for c in b.children():
            if old in (Rule.C0C0, Rule.C0C1, Rule.C1C0):
                rule = self.local_rule(c)
                assert rule is not None, "local rules are inclusion monotone"
                leaves[c] = rule
            else:
                leaves[c] = None
                self.queue.append(c)
        for c in b.children():
            for n in self.tree.neighbors(c):
                if n.depth < c.depth - 1 and n in leaves:
                    self.split(n)

    def run(self):
        leaves = self.tree.leaves
        queue = self.queue
        while queue:
            b = queue.popleft()
            if b not in leaves or leaves[b] is not None:
                continue
            rule = None if b.depth < self.min_depth else self.classify(b)
            if rule is not None:
                leaves[b] = rule
                continue
            if b.depth >= self.max_depth:
                raise MaxDepthExceeded(b, self.max_depth)
            self.split(b)

    def start(self):
        root = BoxNode(0, 0, 0)
        self.tree.leaves[root] = None
        self.queue.append(root)
        self.run()
        return Partition(self.region, self.tree.leaves)


def subdivide(pair: CurvePair, region: Region, max_depth: int = DEFAULT_MAX_DEPTH, min_depth: int = 0) -> Partition:
    """Accept/reject loop of the subdivision step; every leaf records the rule that accepted it.

    ``min_depth`` forces uniform refinement down to that depth before any
    box may be accepted.
    """
    part = _Subdivider(pair, region, max_depth, min_depth).start()
    log.info("subdivide: %d leaves, max depth %d", len(part), part.max_depth)
    return part


def balance(p: Partition, pair: CurvePair | None = None) -> Partition:
    """2:1-balanced refinement of p.

    Children inherit their parent's rule.  With ``pair`` given, the C0/C1
    part of the inherited rule is re-checked (an assertion: the tests are
    inclusion monotone); the rule-4 neighbourhood test belongs to
    :func:`verify_rule4`.
    """
    tree = _Tree(p.region, dict(p.leaves))
    changed = True
    while changed:
        changed = False
        for b in sorted(tree.leaves):
            if b not in tree.leaves or not any(n.depth > b.depth + 1 for n in tree.neighbors(b)):
                continue
            rule = tree.leaves.pop(b)
            for c in b.children():
                tree.leaves[c] = rule
                if pair is not None:
                    _assert_rule(pair, tree.box(c), rule)
            changed = True
    return Partition(p.region, tree.leaves)


def _assert_rule(pair: CurvePair, box: IBox, rule: Rule):
    if rule is Rule.C0C0:
        ok = c0(pair.f, box).value and c0(pair.g, box).value
    elif rule is Rule.C0C1:
        ok = c0(pair.f, box).value and c1(pair.g, box, (pair.gx, pair.gy)).value
    elif rule is Rule.C1C0:
        ok = c1(pair.f, box, (pair.fx, pair.fy)).value and c0(pair.g, box).value
    else:
        ok = c1(pair.f, box, (pair.fx, pair.fy)).value and c1(pair.g, box, (pair.gx, pair.gy)).value
    if not ok:
        raise AssertionError(f"inherited rule {rule} fails on a child box")


def rule4_holds(p: Partition, pair: CurvePair, b: BoxNode) -> bool:
    return c1_cross(pair, p.hull(p.neighborhood_members(b, 2))).value


def verify_rule4(p: Partition, pair: CurvePair, max_depth: int = DEFAULT_MAX_DEPTH, max_rounds: int = 64) -> Partition:
    """Re-test C1× on the final N₂ hull of every rule-4 leaf; refine until all pass."""
    for _ in range(max_rounds):
        bad = [b for b, r in p.leaves.items() if r is Rule.C1C1X and not rule4_holds(p, pair, b)]
        if not bad:
            return p
        log.info("verify_rule4: %d rule-4 leaves fail on their final neighbourhood", len(bad))
        sub = _Subdivider(pair, p.region, max_depth)
        sub.tree.leaves.update(p.leaves)
        for b in bad:
            if b.depth >= max_depth:
                raise MaxDepthExceeded(b, max_depth)
            if b in sub.tree.leaves:
                sub.tree.leaves[b] = None
                sub.split(b)
        sub.run()
        p = balance(Partition(p.region, sub.tree.leaves), pair)
    raise IterationCapExceeded(f"rule-4 verification did not settle in {max_rounds} rounds")
