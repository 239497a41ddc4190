"""Pure-Python evaluation kernels.

All kernels work on *scaled integers*: a coordinate ``v`` together with a
shift ``k`` stands for the dyadic number ``v / 2**k``.  A polynomial is
passed as dense rows, ``rows[i][j]`` being the coefficient of ``x**i y**j``,
together with its partial degrees ``dx`` and ``dy``.  Results are scaled by
``2**(k*(dx+dy))`` so that no division ever happens.

``_ckernels.pyx`` mirrors this module line for line; keep them in sync.
"""


def imul(a, b, c, d):
    """Exact product of [a, b] and [c, d] as an (lo, hi) pair."""
    p1 = a * c
    p2 = a * d
    p3 = b * c
    p4 = b * d
    lo = p1
    hi = p1
    for p in (p2, p3, p4):
        if p < lo:
            lo = p
        elif p > hi:
            hi = p
    return lo, hi


def ipow(lo, hi, n):
    """[lo, hi] ** n with even powers tightened to a nonnegative range."""
    if n == 0:
        return 1, 1
    a = lo ** n
    b = hi ** n
    if n % 2:
        return a, b
    if lo >= 0:
        return a, b
    if hi <= 0:
        return b, a
    return 0, (a if a > b else b)


def eval_point(rows, dx, dy, X, Y, k):
    """Exact ``2**(k*(dx+dy)) * p(X/2**k, Y/2**k)``."""
    s = 1 << k
    spow = [1] * (max(dx, dy) + 1)
    for i in range(1, len(spow)):
        spow[i] = spow[i - 1] * s
    acc = 0
    for i in range(dx, -1, -1):
        row = rows[i]
        n = len(row)
        a = row[dy] if dy < n else 0
        for j in range(dy - 1, -1, -1):
            c = row[j] if j < n else 0
            a = a * Y + c * spow[dy - j]
        acc = acc * X + a * spow[dx - i] if i < dx else a
    return acc


def _horner(rows, dx, dy, xl, xh, yl, yh, spow):
    alo = 0
    ahi = 0
    for i in range(dx, -1, -1):
        row = rows[i]
        n = len(row)
        c = row[dy] if dy < n else 0
        blo = c
        bhi = c
        for j in range(dy - 1, -1, -1):
            c = row[j] if j < n else 0
            blo, bhi = imul(blo, bhi, yl, yh)
            c *= spow[dy - j]
            blo += c
            bhi += c
        if i == dx:
            alo = blo
            ahi = bhi
        else:
            alo, ahi = imul(alo, ahi, xl, xh)
            t = spow[dx - i]
            if t == 1:
                alo += blo
                ahi += bhi
            else:
                alo += blo * t
                ahi += bhi * t
    return alo, ahi


def _power_form(rows, dx, dy, xl, xh, yl, yh, spow):
    px = [ipow(xl, xh, i) for i in range(dx + 1)]
    py = [ipow(yl, yh, j) for j in range(dy + 1)]
    lo = 0
    hi = 0
    for i in range(dx + 1):
        row = rows[i]
        xlo, xhi = px[i]
        for j in range(len(row)):
            c = row[j]
            if c == 0:
                continue
            ylo, yhi = py[j]
            tlo, thi = imul(xlo, xhi, ylo, yhi)
            c *= spow[dx - i] * spow[dy - j]
            if c > 0:
                lo += c * tlo
                hi += c * thi
            else:
                lo += c * thi
                hi += c * tlo
    return lo, hi


def eval_box(rows, dx, dy, xl, xh, yl, yh, k):
    """Enclosure of ``2**(k*(dx+dy)) * p`` over the scaled box.

    Intersection of a nested Horner evaluation (y inside, x outside) and a
    power-basis evaluation with even-power tightening; both are inclusion
    isotone, so the intersection is as well.
    """
    s = 1 << k
    spow = [1] * (max(dx, dy) + 1)
    for i in range(1, len(spow)):
        spow[i] = spow[i - 1] * s
    hlo, hhi = _horner(rows, dx, dy, xl, xh, yl, yh, spow)
    plo, phi = _power_form(rows, dx, dy, xl, xh, yl, yh, spow)
    return (hlo if hlo > plo else plo), (hhi if hhi < phi else phi)
