"""Interval predicates deciding box acceptance.

``c1`` and ``c1_cross`` range over *pairs* of points of the box: each
gradient factor is enclosed on its own copy of the box and the enclosures
are combined with plain interval products.  Squaring a shared factor would
describe a single point and is unsound here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import IBox, Interval, contains_zero
from .poly import BivariatePolynomial, CurvePair, eval_interval, partial_derivative

__all__ = ["PredicateResult", "c0", "c1", "c1_cross"]


@dataclass(frozen=True)
class PredicateResult:
    value: bool
    witness_interval: Interval

    def __bool__(self):
        return self.value


def c0(p: BivariatePolynomial, box: IBox) -> PredicateResult:
    """True certifies that V(p) misses the box."""
    image = eval_interval(p, box)
    return PredicateResult(not contains_zero(image), image)


def c1(p, box: IBox, gradient=None) -> PredicateResult:
    """True certifies no two points of the box have perpendicular gradients of p.

    ``gradient`` may pass the cached partials ``(px, py)``.
    """
    px, py = gradient if gradient is not None else (partial_derivative(p, "x"), partial_derivative(p, "y"))
    gx = eval_interval(px, box)
    gy = eval_interval(py, box)
    dot = gx * gx + gy * gy  # independent copies, not a square
    return PredicateResult(not contains_zero(dot), dot)


def c1_cross(pair: CurvePair, rect: IBox) -> PredicateResult:
    """True certifies grad f(p) and grad g(q) are never parallel for p, q in rect."""
    fx = eval_interval(pair.fx, rect)
    fy = eval_interval(pair.fy, rect)
    gx = eval_interval(pair.gx, rect)
    gy = eval_interval(pair.gy, rect)
    cross = fx * gy - fy * gx
    return PredicateResult(not contains_zero(cross), cross)
