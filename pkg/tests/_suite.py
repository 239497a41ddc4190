"""Curve pairs and geometric checks shared by the test modules."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from curvepair.oracle import certify_intersections
from curvepair.pairing import segment_intersection
from curvepair.pipeline import solve
from curvepair.poly import CurvePair

# name -> (f, g, region, certified crossing count)
SUITE = {
    "lines": ("x", "y", (-1, -1, 1, 1), 1),
    "two_circles": ("x^2+y^2-4", "(x-2)^2+y^2-4", (-4, -4, 4, 4), 2),
    "concentric": ("x^2+y^2-4", "x^2+y^2-9", (-4, -4, 4, 4), 0),
    "apart": ("x^2+y^2-1", "(x-3)^2+y^2-1", (-2, -2, 4, 4), 0),
    "near_tangent_2": ("x^2+4*y^2-4", "16*x^2+16*y^2-17", (-1, 0, 1, 2), 2),
    "near_tangent_0": ("x^2+4*y^2-4", "16*x^2+16*y^2-15", (-2, -2, 2, 2), 0),
}

# further pairs with plain transversal crossings, mixed cases and rectangles
EXTRA = {
    "circle_hyperbola": ("x^2+y^2-5", "x*y-1", (-4, -4, 4, 4), 4),
    "ellipses": ("4*x^2+y^2-9", "x^2+9*y^2-9", (-4, -4, 4, 4), 4),
    "offset_circles": ("x^2+y^2-4", "(x-1)^2+(y-1)^2-3", (-4, -4, 4, 4), 2),
    "cubic_line": ("x^3-3*x-y", "y-x+1", (-4, -4, 4, 4), 3),
    "parabolas": ("y-x^2", "x-y^2", (-2, -2, 2, 2), 2),
    "cubic_axis_rect": ("y", "x^3-x", (-2, -2, 3, 2), 3),
}


def pair_of(name):
    f, g, _, _ = SUITE.get(name) or EXTRA[name]
    return CurvePair.from_text(f, g)


@lru_cache(maxsize=None)
def run(name, min_depth=0):
    f, g, region, _ = SUITE.get(name) or EXTRA[name]
    return solve(CurvePair.from_text(f, g), region, min_depth=min_depth)


@lru_cache(maxsize=None)
def oracle_roots(name):
    f, g, region, _ = SUITE.get(name) or EXTRA[name]
    return certify_intersections(CurvePair.from_text(f, g), region)


def in_box(pt, box):
    x0, y0, x1, y1 = box
    return x0 <= pt[0] <= x1 and y0 <= pt[1] <= y1


def hull_bijection(result, roots):
    """True iff every oracle root lies in exactly one hull and every hull holds exactly one root."""
    hulls = [h for _, _, h in result.crossings()]
    pts = [tuple(c.to_fraction() for c in r.midpoint) for r in roots]
    boxes = [tuple(v.to_fraction() for v in r.box.bounds()) for r in roots]
    for box in boxes:
        # the whole certified box, not only its midpoint, must sit in the hull
        if sum(1 for h in hulls if in_box(box[:2], h) and in_box(box[2:], h)) != 1:
            return False
    return all(sum(1 for p in pts if in_box(p, h)) == 1 for h in hulls)


def pairwise_intersections(af, ag):
    """Exact intersection points of all segment pairs; a shared piece is returned as 'overlap'."""
    points = set()
    overlaps = 0
    for sf in af.segments:
        a, b = af.positions[sf.a], af.positions[sf.b]
        for sg in ag.segments:
            x = segment_intersection(a, b, ag.positions[sg.a], ag.positions[sg.b])
            if x is None:
                continue
            if x[0] == "overlap":
                overlaps += 1
            else:
                points.add(x)
    return points, overlaps


def reported_points(result):
    return {tuple(Fraction(c) for c in p) for p in result.report.crossing_points()}
