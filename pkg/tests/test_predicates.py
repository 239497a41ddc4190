import random
from fractions import Fraction

from curvepair.arith import Dyadic, IBox, Interval
from curvepair.poly import BivariatePolynomial, CurvePair, eval_exact, parse_polynomial
from curvepair.predicates import c0, c1, c1_cross

CIRCLE = parse_polynomial("x^2+y^2-4")
TWO_CIRCLES = CurvePair.from_text("x^2+y^2-4", "(x-2)^2+y^2-4")
UNIT = IBox.from_bounds(0, 0, 1, 1)


def test_c0_examples():
    r = c0(CIRCLE, UNIT)
    assert r.value and r.witness_interval == Interval(-4, -2)
    r = c0(CIRCLE, IBox.from_bounds(1, 1, 2, 2))
    assert not r.value and r.witness_interval == Interval(-2, 4)
    assert c0(BivariatePolynomial.constant(1), IBox.from_bounds(-7, 3, 9, 4)).value


def test_c1_examples():
    x = parse_polynomial("x")
    r = c1(x, IBox.from_bounds(-3, -3, 5, 1))
    assert r.value and r.witness_interval == Interval(1, 1)
    r = c1(CIRCLE, IBox.from_bounds(-1, -1, 1, 1))
    assert not r.value and r.witness_interval == Interval(-8, 8)
    r = c1(CIRCLE, IBox.from_bounds(1, 1, 2, 2))
    assert r.value and r.witness_interval == Interval(8, 32)


def test_c1_uses_independent_factors():
    # a shared square would give [0, 8] here, which wrongly excludes negatives
    r = c1(CIRCLE, IBox.from_bounds(-1, -1, 1, 1))
    assert r.witness_interval.lo < 0


def test_c1_cross_examples():
    r = c1_cross(CurvePair.from_text("x", "y"), IBox.from_bounds(-5, 2, 3, 9))
    assert r.value and r.witness_interval == Interval(1, 1)
    same = CurvePair.from_text("x^2+y^2-4", "x^2+y^2-4")
    for box in (UNIT, IBox.from_bounds(1, 1, 2, 3)):
        assert not c1_cross(same, box).value
    r = c1_cross(TWO_CIRCLES, IBox.from_bounds(0, 0, 2, 2))
    # fx gy - fy gx = [0,4][0,4] - [0,4][-4,0] = [0,16] - [-16,0]
    assert not r.value and r.witness_interval == Interval(0, 32)


def test_witness_excludes_zero_when_true():
    rng = random.Random(5)
    for _ in range(200):
        x0, y0 = rng.randint(-8, 7), rng.randint(-8, 7)
        box = IBox.from_bounds(x0, y0, x0 + rng.randint(1, 3), y0 + rng.randint(1, 3))
        for r in (c0(CIRCLE, box), c1(CIRCLE, box), c1_cross(TWO_CIRCLES, box)):
            assert not r.value or not r.witness_interval.contains_zero()


def _nested_boxes(rng):
    k = 4
    xl, yl = rng.randint(-64, 48), rng.randint(-64, 48)
    xh, yh = xl + rng.randint(1, 32), yl + rng.randint(1, 32)
    a = rng.randint(xl, xh)
    b = rng.randint(a, xh)
    c = rng.randint(yl, yh)
    d = rng.randint(c, yh)
    return IBox.from_scaled(xl, xh, yl, yh, k), IBox.from_scaled(a, b, c, d, k)


def test_monotone_under_inclusion():
    rng = random.Random(17)
    pair = CurvePair.from_text("x^2+4*y^2-4", "16*x^2+16*y^2-17")
    for _ in range(400):
        outer, inner = _nested_boxes(rng)
        for pred in (lambda b: c0(pair.f, b), lambda b: c1(pair.g, b), lambda b: c1_cross(pair, b)):
            ro, ri = pred(outer), pred(inner)
            assert ri.witness_interval.subset_of(ro.witness_interval)
            if ro.value:
                assert ri.value


def _grid(box, n):
    (x0, y0, x1, y1) = (v.to_fraction() for v in box.bounds())
    for i in range(n + 1):
        for j in range(n + 1):
            yield (Dyadic.coerce(x0 + (x1 - x0) * Fraction(i, n)), Dyadic.coerce(y0 + (y1 - y0) * Fraction(j, n)))


def test_c0_sampling_soundness():
    rng = random.Random(23)
    checked = 0
    for _ in range(150):
        x0, y0 = rng.randint(-12, 11), rng.randint(-12, 11)
        box = IBox.from_scaled(x0, x0 + rng.randint(1, 4), y0, y0 + rng.randint(1, 4), 2)
        if c0(CIRCLE, box).value:
            signs = {eval_exact(CIRCLE, pt).sign() for pt in _grid(box, 16)}
            assert len(signs) == 1 and 0 not in signs
            checked += 1
    assert checked > 20


def test_c1_cross_sampling_soundness():
    rng = random.Random(29)
    pair = TWO_CIRCLES
    checked = 0
    for _ in range(100):
        x0, y0 = rng.randint(-12, 11), rng.randint(-12, 11)
        box = IBox.from_scaled(x0, x0 + rng.randint(1, 3), y0, y0 + rng.randint(1, 3), 2)
        if not c1_cross(pair, box).value:
            continue
        pts = list(_grid(box, 4))
        grads_f = [(eval_exact(pair.fx, p), eval_exact(pair.fy, p)) for p in pts]
        grads_g = [(eval_exact(pair.gx, p), eval_exact(pair.gy, p)) for p in pts]
        for a, b in grads_f:
            for c, d in grads_g:
                assert a * d - b * c != 0
        checked += 1
    assert checked > 10
