"""End-to-end simultaneous approximation of two curves."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2

from .arith import IBox
from .approximation import CurveApprox, Skeleton, assemble
from .pairing import CrossingReport, EndpointOnSnakeBoundary, build_report
from .poly import CurvePair, rescale_to_square
from .subdivision import (
    DEFAULT_MAX_DEPTH,
    Partition,
    Region,
    balance,
    subdivide,
    verify_rule4,
)

log = logging.getLogger(__name__)

__all__ = ["Result", "solve", "square_for"]

MAX_TIE_SPLITS = 8


@dataclass
class Result:
    pair: CurvePair
    rect: tuple
    partition: Partition
    skeleton: Skeleton
    approx_f: CurveApprox
    approx_g: CurveApprox
    report: CrossingReport

    def out_point(self, pt):
        """Grid point (possibly rational) to exact output coordinates."""
        return self.skeleton.grid.to_fraction(*pt)

    def out_box(self, box: IBox):
        """Box in working coordinates to ``(x0, y0, x1, y1)`` Fractions in output coordinates."""
        reg = self.partition.region
        x0, y0, x1, y1 = self.rect
        sx = Fraction(x1 - x0, reg.side)
        sy = Fraction(y1 - y0, reg.side)
        bx0, bx1 = box.x.lo.to_fraction(), box.x.hi.to_fraction()
        by0, by1 = box.y.lo.to_fraction(), box.y.hi.to_fraction()
        return (x0 + (bx0 - x0) * sx, y0 + (by0 - y0) * sy, x0 + (bx1 - x0) * sx, y0 + (by1 - y0) * sy)

    def polylines(self, which: str):
        """Resolved approximation of f or g as lists of exact output points."""
        approx = self.report.resolved_approx_f if which == "f" else self.report.resolved_approx_g
        return [([self.out_point(p) for p in pts], closed) for pts, closed in approx.polylines()]

    def crossings(self):
        """``(type, point, hull)`` per crossing, in output coordinates, sorted by point."""
        rows = [("transversal", c.point, c.isolating_hull) for c in self.report.transversal]
        rows += [("snake", c.point, c.isolating_hull) for c in self.report.snake_crossings]
        out = [(kind, self.out_point(p), self.out_box(h)) for kind, p, h in rows]
        out.sort(key=lambda r: (r[1], r[0]))
        return out


def square_for(rect):
    """Square with the rectangle's lower-left corner and power-of-two side, so coordinates stay dyadic."""
    x0, y0, x1, y1 = rect
    w, h = x1 - x0, y1 - y0
    if w <= 0 or h <= 0:
        raise ValueError("degenerate region")
    if w == h:
        return rect
    side = 1 << ceil(log2(max(w, h)))
    return (x0, y0, x0 + side, y0 + side)


def solve(pair: CurvePair, rect, max_depth: int = DEFAULT_MAX_DEPTH, min_depth: int = 0) -> Result:
    """Subdivide, balance, verify, approximate and pair; ``rect`` is ``(x0, y0, x1, y1)`` in integers."""
    rect = tuple(int(v) for v in rect)
    square = square_for(rect)
    out_scale = None
    work = pair
    if square != rect:
        work = CurvePair(rescale_to_square(pair.f, rect, square), rescale_to_square(pair.g, rect, square))
        out_scale = (rect[2] - rect[0], rect[3] - rect[1])
        log.info("rescaled %s to square %s", rect, square)
    region = Region.from_corners(*square)

    stage = "subdivide"
    try:
        part = subdivide(work, region, max_depth, min_depth)
        stage = "balance"
        part = balance(part, work)
        stage = "verify_rule4"
        part = verify_rule4(part, work, max_depth)
        log.info("partition: %d leaves, max depth %d", len(part), part.max_depth)
        for _ in range(MAX_TIE_SPLITS + 1):
            stage = "approximate"
            sk = Skeleton(part, out_scale)
            af = assemble(work.f, part, sk)
            ag = assemble(work.g, part, sk)
            stage = "pair"
            try:
                report = build_report(af, ag, part, sk)
            except EndpointOnSnakeBoundary as tie:
                log.info("orientation tie at %s; splitting the head box", tie.head)
                stage = "verify_rule4"
                part = _split_leaf(part, tie.head, work, max_depth)
                continue
            break
        else:
            raise RuntimeError("orientation ties persisted after repeated head splits")
    except Exception as exc:
        if not hasattr(exc, "stage"):
            exc.stage = stage
        raise
    log.info(
        "pairing: %d transversal, %d snakes, %d snake crossings",
        len(report.transversal),
        len(report.snakes),
        len(report.snake_crossings),
    )
    return Result(pair, rect, part, sk, af, ag, report)


def _split_leaf(part: Partition, b, pair: CurvePair, max_depth: int) -> Partition:
    from .subdivision import MaxDepthExceeded

    if b.depth >= max_depth:
        raise MaxDepthExceeded(b, max_depth)
    leaves = dict(part.leaves)
    rule = leaves.pop(b)
    for c in b.children():
        leaves[c] = rule
    return verify_rule4(balance(Partition(part.region, leaves), pair), pair, max_depth)
