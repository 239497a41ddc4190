"""Ground truth for V(f) ∩ V(g) by interval Krawczyk iteration.

Deliberately separate from the pipeline: rational (``Fraction``) intervals,
naive power-basis enclosures, its own grid.  A cell is discarded when one
polynomial is bounded away from zero on it; otherwise the Krawczyk operator

    K(X) = m - Y F(m) + (I - Y J(X)) (X - m)

decides it: ``K(X) ∩ X = ∅`` excludes a root, ``K(X) ⊂ int X`` proves a
unique one.  Roots sitting on cell lines are caught by retrying on the cell
inflated by a quarter of its width.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import Dyadic, IBox, Interval
from .poly import BivariatePolynomial, CurvePair

log = logging.getLogger(__name__)

__all__ = ["CertifiedRoot", "Inconclusive", "certify_intersections", "check_smooth_transversal"]

DEFAULT_GRID_DEPTH = 6
DEFAULT_SPLIT_CAP = 12
_REFINE_STEPS = 60
_Y_BITS = 60


class Inconclusive(RuntimeError):
    def __init__(self, cells, what="cells"):
        super().__init__(f"oracle could not decide {len(cells)} {what}")
        self.cells = cells


@dataclass(frozen=True)
class CertifiedRoot:
    box: IBox
    midpoint: tuple
    certificate: IBox  # box on which uniqueness was proven

    def contained_in(self, rect: IBox) -> bool:
        return self.box.subset_of(rect)


# rational intervals as (lo, hi) pairs


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _mul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def _scale(c, a):
    return (c * a[0], c * a[1]) if c >= 0 else (c * a[1], c * a[0])


def _enclose(p: BivariatePolynomial, X):
    """Naive enclosure: each monomial by repeated products."""
    ix, iy = X
    total = (Fraction(0), Fraction(0))
    for (i, j), c in p.terms.items():
        term = (Fraction(1), Fraction(1))
        for _ in range(i):
            term = _mul(term, ix)
        for _ in range(j):
            term = _mul(term, iy)
        total = _add(total, _scale(c, term))
    return total


def _value(p: BivariatePolynomial, pt) -> Fraction:
    x, y = pt
    return sum((c * x**i * y**j for (i, j), c in p.terms.items()), Fraction(0))


def _has_zero(a) -> bool:
    return a[0] <= 0 <= a[1]


def _round_dyadic(v: Fraction) -> Fraction:
    if v == 0:
        return v
    e = v.numerator.bit_length() - v.denominator.bit_length()
    shift = _Y_BITS - e
    if shift <= 0:
        return Fraction(round(v / (1 << -shift)) << -shift)
    return Fraction(round(v * (1 << shift)), 1 << shift)


def _width(X):
    return max(X[0][1] - X[0][0], X[1][1] - X[1][0])


def _mid(X):
    return ((X[0][0] + X[0][1]) / 2, (X[1][0] + X[1][1]) / 2)


class _System:
    """Square polynomial system (p, q) with its Jacobian."""

    def __init__(self, p, q):
        from .poly import partial_derivative

        self.F = (p, q)
        self.J = (
            (partial_derivative(p, "x"), partial_derivative(p, "y")),
            (partial_derivative(q, "x"), partial_derivative(q, "y")),
        )

    def krawczyk(self, X):
        """K(X), or None when the midpoint Jacobian is singular."""
        m = _mid(X)
        a, b = (_value(d, m) for d in self.J[0])
        c, d = (_value(e, m) for e in self.J[1])
        det = a * d - b * c
        if det == 0:
            return None
        Y = ((_round_dyadic(d / det), _round_dyadic(-b / det)), (_round_dyadic(-c / det), _round_dyadic(a / det)))
        Fm = tuple(_value(p, m) for p in self.F)
        JX = tuple(tuple(_enclose(e, X) for e in row) for row in self.J)
        out = []
        for i in range(2):
            yf = Y[i][0] * Fm[0] + Y[i][1] * Fm[1]
            acc = (m[i] - yf, m[i] - yf)
            for j in range(2):
                mij = _add(_scale(-Y[i][0], JX[0][j]), _scale(-Y[i][1], JX[1][j]))
                if i == j:
                    mij = (mij[0] + 1, mij[1] + 1)
                dev = (X[j][0] - m[j], X[j][1] - m[j])
                acc = _add(acc, _mul(mij, dev))
            out.append(acc)
        return tuple(out)

    def excluded(self, X) -> bool:
        return any(not _has_zero(_enclose(p, X)) for p in self.F)

    def certify(self, X):
        """'none', 'unique' or 'unknown' for the box X."""
        if self.excluded(X):
            return "none"
        K = self.krawczyk(X)
        if K is None:
            return "unknown"
        if any(K[i][1] < X[i][0] or K[i][0] > X[i][1] for i in range(2)):
            return "none"
        if all(X[i][0] < K[i][0] and K[i][1] < X[i][1] for i in range(2)):
            return "unique"
        return "unknown"

    def refine(self, X, tol):
        """Shrink a uniqueness box by X <- K(X) ∩ X.

        K(X) is rounded outward to multiples of ``tol / 4`` first, which
        keeps the root inside and the endpoint mantissas short.
        """
        q = tol / 4
        for _ in range(_REFINE_STEPS):
            if _width(X) <= tol:
                break
            K = self.krawczyk(X)
            if K is None:
                break
            K = tuple((math.floor(lo / q) * q, math.ceil(hi / q) * q) for lo, hi in K)
            nxt = tuple((max(K[i][0], X[i][0]), min(K[i][1], X[i][1])) for i in range(2))
            if nxt == X:
                break
            X = nxt
        return X


def _tolerance(span) -> Fraction:
    """Power of two near span * 2^-40."""
    return Fraction(2) ** (math.ceil(math.log2(span)) - 40)


def _inflate(X):
    return tuple((lo - (hi - lo) / 4, hi + (hi - lo) / 4) for lo, hi in X)


def _split(X):
    (xl, xh), (yl, yh) = X
    xm, ym = (xl + xh) / 2, (yl + yh) / 2
    return [((xl, xm), (yl, ym)), ((xm, xh), (yl, ym)), ((xl, xm), (ym, yh)), ((xm, xh), (ym, yh))]


def _grid(rect, depth):
    x0, y0, x1, y1 = (Fraction(v) for v in rect)
    n = 1 << depth
    dx, dy = (x1 - x0) / n, (y1 - y0) / n
    return [((x0 + i * dx, x0 + (i + 1) * dx), (y0 + j * dy, y0 + (j + 1) * dy)) for j in range(n) for i in range(n)]


def _to_ibox(X) -> IBox:
    return IBox(Interval(Dyadic.coerce(X[0][0]), Dyadic.coerce(X[0][1])), Interval(Dyadic.coerce(X[1][0]), Dyadic.coerce(X[1][1])))


def _inside(inner, outer) -> bool:
    return all(outer[i][0] <= inner[i][0] and inner[i][1] <= outer[i][1] for i in range(2))


def _disjoint(a, b) -> bool:
    return any(a[i][1] < b[i][0] or b[i][1] < a[i][0] for i in range(2))


def _solve(system: _System, rect, grid_depth, split_cap, tol):
    """Certified (certificate, enclosure) pairs for the system's zeros near rect, and undecided cells."""
    found = []
    undecided = []
    stack = [(X, 0) for X in reversed(_grid(rect, grid_depth))]
    while stack:
        X, level = stack.pop()
        verdict = system.certify(X)
        if verdict == "none":
            continue
        cert = X if verdict == "unique" else None
        if cert is None:
            wide = _inflate(X)
            if system.certify(wide) == "unique":
                cert = wide
        if cert is not None:
            found.append((cert, system.refine(cert, tol)))
            continue
        if level >= split_cap:
            undecided.append(X)
            continue
        stack.extend((c, level + 1) for c in reversed(_split(X)))

    roots = []
    for cert, enc in found:
        dup = False
        for c2, e2 in roots:
            if _inside(enc, c2) or _inside(e2, cert):
                dup = True
                break
            if not _disjoint(enc, e2):
                undecided.append(enc)
                dup = True
                break
        if not dup:
            roots.append((cert, enc))
    return roots, undecided


def certify_intersections(
    pair: CurvePair, region, grid_depth: int = DEFAULT_GRID_DEPTH, split_cap: int = DEFAULT_SPLIT_CAP
):
    """Certified isolating boxes of the common zeros of f and g in ``region = (x0, y0, x1, y1)``.

    Raises :class:`Inconclusive` rather than guessing.
    """
    if grid_depth < 1:
        raise ValueError("grid_depth must be >= 1")
    rect = tuple(Fraction(v) for v in region)
    tol = _tolerance(max(rect[2] - rect[0], rect[3] - rect[1]))
    system = _System(pair.f, pair.g)
    roots, undecided = _solve(system, rect, grid_depth, split_cap, tol)
    if undecided:
        raise Inconclusive(undecided)
    R = ((rect[0], rect[2]), (rect[1], rect[3]))
    out = []
    for cert, enc in roots:
        if _disjoint(enc, R):
            continue
        if not all(R[i][0] < enc[i][0] and enc[i][1] < R[i][1] for i in range(2)):
            raise Inconclusive([enc], "roots on the region boundary")
        out.append(CertifiedRoot(_to_ibox(enc), tuple(Dyadic.coerce(v) for v in _mid(enc)), _to_ibox(cert)))
    out.sort(key=lambda r: (r.midpoint[0], r.midpoint[1]))
    return out


def _candidates(enc):
    """Midpoint of a tiny enclosure plus small-denominator rationals inside it.

    A singular point is only ever reported after an exact check, so trying
    extra candidates cannot produce a false positive.
    """
    m = _mid(enc)
    out = [m]
    for bound in (10**3, 10**6):
        r = tuple(c.limit_denominator(bound) for c in m)
        if all(enc[i][0] <= r[i] <= enc[i][1] for i in range(2)) and r not in out:
            out.append(r)
    return out


def _singular_point(p: BivariatePolynomial, rect, grid_depth, split_cap):
    """A certified singular point of V(p) in rect, or None when p is certified smooth there."""
    from .poly import partial_derivative

    px, py = partial_derivative(p, "x"), partial_derivative(p, "y")
    crit = _System(px, py)
    tol = _tolerance(max(rect[0][1] - rect[0][0], rect[1][1] - rect[1][0]))
    stack = [(X, 0) for X in _grid((rect[0][0], rect[1][0], rect[0][1], rect[1][1]), grid_depth)]
    undecided = []
    while stack:
        X, level = stack.pop()
        if any(not _has_zero(_enclose(q, X)) for q in (p, px, py)):
            continue
        verdict = crit.certify(X)
        if verdict == "none":
            continue
        cert = X if verdict == "unique" else (_inflate(X) if crit.certify(_inflate(X)) == "unique" else None)
        if cert is not None:
            enc = crit.refine(cert, tol)
            if not _has_zero(_enclose(p, enc)):
                continue
            for m in _candidates(enc):
                if _value(px, m) == 0 and _value(py, m) == 0 and _value(p, m) == 0:
                    return m
        if level >= split_cap:
            undecided.append(X)
            continue
        stack.extend((c, level + 1) for c in _split(X))
    if undecided:
        raise Inconclusive(undecided, "cells in the smoothness check")
    return None


def check_smooth_transversal(
    pair: CurvePair, region, grid_depth: int = DEFAULT_GRID_DEPTH, split_cap: int = DEFAULT_SPLIT_CAP
) -> bool:
    """True iff both curves are certified smooth in region and every crossing is certified transverse."""
    rect = tuple(Fraction(v) for v in region)
    R = ((rect[0], rect[2]), (rect[1], rect[3]))
    for p in (pair.f, pair.g):
        if _singular_point(p, R, grid_depth, split_cap) is not None:
            return False
    for root in certify_intersections(pair, region, grid_depth, split_cap):
        b = root.box
        X = ((b.x.lo.to_fraction(), b.x.hi.to_fraction()), (b.y.lo.to_fraction(), b.y.hi.to_fraction()))
        cross = _add(
            _mul(_enclose(pair.fx, X), _enclose(pair.gy, X)),
            _scale(-1, _mul(_enclose(pair.fy, X), _enclose(pair.gx, X))),
        )
        if _has_zero(cross):
            return False
    return True
