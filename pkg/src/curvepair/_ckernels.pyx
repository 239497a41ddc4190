# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_pykernels``; same signatures, same results.

Coefficients and coordinates are arbitrary-precision Python ints, so the
arithmetic itself stays in ``object``; the gain comes from typed loop
indices and list access without interpreter dispatch.
"""


cpdef tuple imul(object a, object b, object c, object d):
    cdef object p1 = a * c
    cdef object p2 = a * d
    cdef object p3 = b * c
    cdef object p4 = b * d
    cdef object lo = p1
    cdef object hi = p1
    if p2 < lo:
        lo = p2
    elif p2 > hi:
        hi = p2
    if p3 < lo:
        lo = p3
    elif p3 > hi:
        hi = p3
    if p4 < lo:
        lo = p4
    elif p4 > hi:
        hi = p4
    return lo, hi


cpdef tuple ipow(object lo, object hi, int n):
    if n == 0:
        return 1, 1
    cdef object a = lo ** n
    cdef object b = hi ** n
    if n % 2:
        return a, b
    if lo >= 0:
        return a, b
    if hi <= 0:
        return b, a
    return 0, (a if a > b else b)


cdef list _spow(object s, int n):
    cdef list out = [1] * (n + 1)
    cdef int i
    for i in range(1, n + 1):
        out[i] = out[i - 1] * s
    return out


cpdef object eval_point(list rows, int dx, int dy, object X, object Y, int k):
    cdef list spow = _spow((<object>1) << k, dx if dx > dy else dy)
    cdef object acc = 0
    cdef object a, c
    cdef list row
    cdef int i, j, n
    for i in range(dx, -1, -1):
        row = rows[i]
        n = len(row)
        a = row[dy] if dy < n else 0
        for j in range(dy - 1, -1, -1):
            c = row[j] if j < n else 0
            a = a * Y + c * spow[dy - j]
        if i == dx:
            acc = a
        else:
            acc = acc * X + a * spow[dx - i]
    return acc


cdef tuple _horner(list rows, int dx, int dy, object xl, object xh,
                   object yl, object yh, list spow):
    cdef object alo = 0
    cdef object ahi = 0
    cdef object blo, bhi, c, t
    cdef list row
    cdef int i, j, n
    for i in range(dx, -1, -1):
        row = rows[i]
        n = len(row)
        c = row[dy] if dy < n else 0
        blo = c
        bhi = c
        for j in range(dy - 1, -1, -1):
            c = row[j] if j < n else 0
            blo, bhi = imul(blo, bhi, yl, yh)
            c = c * spow[dy - j]
            blo = blo + c
            bhi = bhi + c
        if i == dx:
            alo = blo
            ahi = bhi
        else:
            alo, ahi = imul(alo, ahi, xl, xh)
            t = spow[dx - i]
            alo = alo + blo * t
            ahi = ahi + bhi * t
    return alo, ahi


cdef tuple _power_form(list rows, int dx, int dy, object xl, object xh,
                       object yl, object yh, list spow):
    cdef list px = [ipow(xl, xh, i) for i in range(dx + 1)]
    cdef list py = [ipow(yl, yh, j) for j in range(dy + 1)]
    cdef object lo = 0
    cdef object hi = 0
    cdef object c, xlo, xhi, ylo, yhi, tlo, thi
    cdef list row
    cdef int i, j
    for i in range(dx + 1):
        row = rows[i]
        xlo, xhi = px[i]
        for j in range(len(row)):
            c = row[j]
            if c == 0:
                continue
            ylo, yhi = py[j]
            tlo, thi = imul(xlo, xhi, ylo, yhi)
            c = c * spow[dx - i] * spow[dy - j]
            if c > 0:
                lo = lo + c * tlo
                hi = hi + c * thi
            else:
                lo = lo + c * thi
                hi = hi + c * tlo
    return lo, hi


cpdef tuple eval_box(list rows, int dx, int dy, object xl, object xh,
                     object yl, object yh, int k):
    cdef list spow = _spow((<object>1) << k, dx if dx > dy else dy)
    cdef object hlo, hhi, plo, phi
    hlo, hhi = _horner(rows, dx, dy, xl, xh, yl, yh, spow)
    plo, phi = _power_form(rows, dx, dy, xl, xh, yl, yh, spow)
    return (hlo if hlo > plo else plo), (hhi if hhi < phi else phi)
