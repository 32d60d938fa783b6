# cython: language_level=3
"""Exact rational kernel for piecewise-linear breakpoint lists (compiled).

Compiled twin of ``_kernel_py``: same functions, same flat representation,
bit-identical results. Rational components stay Python ints (they grow
without bound under composition), so the compilation pays off in loop and
call overhead, not in the arithmetic itself.

See ``_kernel_py`` for the representation contract. The selector in
``_backend.py`` prefers this module when the build produced it.
"""

from math import gcd


# ---------------------------------------------------------------------------
# scalar rational helpers, operating on (numerator, denominator) pairs


cpdef tuple rnorm(n, d):
    """Lowest terms, positive denominator."""
    if d < 0:
        n = -n
        d = -d
    g = gcd(n, d)
    if g > 1:
        n //= g
        d //= g
    return n, d


cpdef tuple radd(tuple a, tuple b):
    return rnorm(a[0] * b[1] + b[0] * a[1], a[1] * b[1])


cpdef tuple rsub(tuple a, tuple b):
    return rnorm(a[0] * b[1] - b[0] * a[1], a[1] * b[1])


cpdef tuple rmul(tuple a, tuple b):
    return rnorm(a[0] * b[0], a[1] * b[1])


cpdef tuple rdiv(tuple a, tuple b):
    if b[0] == 0:
        raise ZeroDivisionError("rational division by zero")
    return rnorm(a[0] * b[1], a[1] * b[0])


cpdef int rcmp(tuple a, tuple b):
    """Sign of a - b."""
    s = a[0] * b[1] - b[0] * a[1]
    return (s > 0) - (s < 0)


cpdef tuple rabs(tuple a):
    return (-a[0], a[1]) if a[0] < 0 else a


cpdef tuple rmid(tuple a, tuple b):
    """Midpoint of a and b."""
    return rnorm(a[0] * b[1] + b[0] * a[1], 2 * a[1] * b[1])


# ---------------------------------------------------------------------------
# segment primitives


cdef inline tuple _interp(tuple x, tuple p, tuple q):
    """Value at x of the segment through breakpoints p and q (p.x < q.x)."""
    xn, xd = x
    x0n, x0d, y0n, y0d = p
    x1n, x1d, y1n, y1d = q
    tn = xn * x0d - x0n * xd  # x - x0, over td
    td = xd * x0d
    dxn = x1n * x0d - x0n * x1d  # x1 - x0, over dxd
    dxd = x1d * x0d
    dyn = y1n * y0d - y0n * y1d  # y1 - y0, over dyd
    dyd = y1d * y0d
    num = y0n * (td * dxn * dyd) + y0d * (tn * dxd * dyn)
    den = y0d * td * dxn * dyd
    return rnorm(num, den)


cdef inline tuple _interp_x(tuple u, tuple p, tuple q):
    """Preimage of the value u on the segment p->q (y strictly monotone)."""
    un, ud = u
    x0n, x0d, y0n, y0d = p
    x1n, x1d, y1n, y1d = q
    tn = un * y0d - y0n * ud  # u - y0, over td
    td = ud * y0d
    dyn = y1n * y0d - y0n * y1d
    dyd = y1d * y0d
    dxn = x1n * x0d - x0n * x1d
    dxd = x1d * x0d
    num = x0n * (td * dyn * dxd) + x0d * (tn * dyd * dxn)
    den = x0d * td * dyn * dxd
    return rnorm(num, den)


cdef inline bint _collinear(tuple p1, tuple p2, tuple p3):
    """Slope(p1,p2) == slope(p2,p3), by integer cross-multiplication."""
    a = p2[2] * p1[3] - p1[2] * p2[3]  # y2 - y1 (over b)
    b = p1[3] * p2[3]
    c = p3[0] * p2[1] - p2[0] * p3[1]  # x3 - x2 (over d)
    d = p2[1] * p3[1]
    e = p3[2] * p2[3] - p2[2] * p3[3]  # y3 - y2 (over f)
    f = p2[3] * p3[3]
    g = p2[0] * p1[1] - p1[0] * p2[1]  # x2 - x1 (over h)
    h = p1[1] * p2[1]
    return a * c * f * h == e * g * b * d


# ---------------------------------------------------------------------------
# breakpoint-list operations


cpdef list canonical(list bps):
    """Drop interior breakpoints collinear with their neighbors."""
    cdef list out = [bps[0]]
    cdef Py_ssize_t k
    for k in range(1, len(bps)):
        out.append(bps[k])
        while len(out) >= 3 and _collinear(out[-3], out[-2], out[-1]):
            del out[-2]
    return out


cdef Py_ssize_t _locate(list bps, tuple x):
    """Largest index i with bps[i].x <= x. x must lie in the domain."""
    xn, xd = x
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = len(bps) - 1
    cdef Py_ssize_t mid
    cdef tuple b
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        b = bps[mid]
        if b[0] * xd <= xn * b[1]:
            lo = mid
        else:
            hi = mid - 1
    return lo


cpdef tuple eval_at(list bps, tuple x):
    """Value at the rational point x = (n, d)."""
    cdef Py_ssize_t i = _locate(bps, x)
    cdef tuple p = bps[i]
    if p[0] * x[1] == x[0] * p[1]:
        return p[2], p[3]
    return _interp(x, p, bps[i + 1])


cpdef list eval_sorted(list bps, list xs):
    """Values at a nondecreasing list of points, walking segments once."""
    cdef list out = []
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t top = len(bps) - 1
    cdef tuple x, p, q
    for x in xs:
        xn, xd = x
        while i + 1 < top and bps[i + 1][0] * xd <= xn * bps[i + 1][1]:
            i += 1
        p = bps[i]
        if p[0] * xd == xn * p[1]:
            out.append((p[2], p[3]))
            continue
        q = bps[i + 1]
        if q[0] * xd == xn * q[1]:
            out.append((q[2], q[3]))
            continue
        out.append(_interp(x, p, q))
    return out


cpdef list compose(list f, list g):
    """Canonical breakpoints of f∘g. The range of g must lie in f's domain."""
    cdef list out = []
    cdef tuple y0 = (g[0][2], g[0][3])
    cdef tuple v = eval_at(f, y0)
    out.append((g[0][0], g[0][1], v[0], v[1]))
    cdef Py_ssize_t nf = len(f)
    cdef Py_ssize_t k, j
    cdef int s
    cdef tuple p, q, ya, yb, u, xs
    for k in range(len(g) - 1):
        p = g[k]
        q = g[k + 1]
        ya = (p[2], p[3])
        yb = (q[2], q[3])
        s = rcmp(yb, ya)
        if s > 0:
            j = _locate(f, ya) + 1
            while j < nf and f[j][0] * yb[1] < yb[0] * f[j][1]:
                u = (f[j][0], f[j][1])
                xs = _interp_x(u, p, q)
                out.append((xs[0], xs[1], f[j][2], f[j][3]))
                j += 1
        elif s < 0:
            j = _locate(f, ya)
            if f[j][0] * ya[1] == ya[0] * f[j][1]:
                j -= 1
            while j >= 0 and f[j][0] * yb[1] > yb[0] * f[j][1]:
                u = (f[j][0], f[j][1])
                xs = _interp_x(u, p, q)
                out.append((xs[0], xs[1], f[j][2], f[j][3]))
                j -= 1
        v = eval_at(f, yb)
        out.append((q[0], q[1], v[0], v[1]))
    return canonical(out)


cpdef list invert(list bps):
    """Swap axes of a strictly monotone PL function."""
    cdef list out = [(p[2], p[3], p[0], p[1]) for p in bps]
    if rcmp((bps[-1][2], bps[-1][3]), (bps[0][2], bps[0][3])) < 0:
        out.reverse()
    return out


cpdef list merged_xs(list f, list g):
    """Sorted union of the two breakpoint x-coordinate lists."""
    cdef list out = []
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t j = 0
    cdef Py_ssize_t nf = len(f)
    cdef Py_ssize_t ng = len(g)
    cdef tuple a, b
    while i < nf and j < ng:
        a = f[i]
        b = g[j]
        c = a[0] * b[1] - b[0] * a[1]
        if c < 0:
            out.append((a[0], a[1]))
            i += 1
        elif c > 0:
            out.append((b[0], b[1]))
            j += 1
        else:
            out.append((a[0], a[1]))
            i += 1
            j += 1
    while i < nf:
        out.append((f[i][0], f[i][1]))
        i += 1
    while j < ng:
        out.append((g[j][0], g[j][1]))
        j += 1
    return out


cpdef tuple sup_diff(list f, list g):
    """Exact sup of |f - g| over the common domain, with leftmost witness.

    The difference is linear between merged breakpoints, so the sup is
    attained at one of them. Returns (dn, dd, wxn, wxd).
    """
    cdef list xs = merged_xs(f, g)
    cdef list fv = eval_sorted(f, xs)
    cdef list gv = eval_sorted(g, xs)
    cdef tuple best = (0, 1)
    cdef tuple wit = xs[0]
    cdef tuple d
    cdef Py_ssize_t k
    for k in range(len(xs)):
        d = rabs(rsub(fv[k], gv[k]))
        if rcmp(d, best) > 0:
            best = d
            wit = xs[k]
    return best[0], best[1], wit[0], wit[1]


cpdef list crossings(list f, list g):
    """Strict sign-change roots of f - g between merged breakpoints."""
    cdef list xs = merged_xs(f, g)
    cdef list fv = eval_sorted(f, xs)
    cdef list gv = eval_sorted(g, xs)
    cdef list roots = []
    cdef tuple prev = rsub(fv[0], gv[0])
    cdef tuple cur, x0, x1, span, root
    cdef Py_ssize_t k
    for k in range(1, len(xs)):
        cur = rsub(fv[k], gv[k])
        if (prev[0] > 0 and cur[0] < 0) or (prev[0] < 0 and cur[0] > 0):
            x0 = xs[k - 1]
            x1 = xs[k]
            span = rsub(x1, x0)
            root = radd(x0, rmul(span, rdiv(prev, rsub(prev, cur))))
            roots.append(root)
        prev = cur
    return roots


cpdef list sign_change_roots(list bps):
    """Strict sign-change roots of the function itself between breakpoints."""
    cdef list roots = []
    cdef tuple p, q, ya, yb, x0, span
    cdef Py_ssize_t k
    for k in range(len(bps) - 1):
        p = bps[k]
        q = bps[k + 1]
        if (p[2] > 0 and q[2] < 0) or (p[2] < 0 and q[2] > 0):
            ya = (p[2], p[3])
            yb = (q[2], q[3])
            x0 = (p[0], p[1])
            span = rsub((q[0], q[1]), x0)
            roots.append(radd(x0, rmul(span, rdiv(ya, rsub(ya, yb)))))
    return roots


cdef list _merge_sorted(list a, list b):
    cdef list out = []
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t j = 0
    cdef int c
    while i < len(a) and j < len(b):
        c = rcmp(a[i], b[j])
        if c < 0:
            out.append(a[i])
            i += 1
        elif c > 0:
            out.append(b[j])
            j += 1
        else:
            out.append(a[i])
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return out


cpdef list pl_extremum(list f, list g, bint take_max):
    """Pointwise min (or max) of two PL functions on a common domain."""
    cdef list xs = _merge_sorted(merged_xs(f, g), crossings(f, g))
    cdef list fv = eval_sorted(f, xs)
    cdef list gv = eval_sorted(g, xs)
    cdef list out = []
    cdef tuple pick, x
    cdef int c
    cdef Py_ssize_t k
    for k in range(len(xs)):
        c = rcmp(fv[k], gv[k])
        pick = fv[k] if (c >= 0) == take_max else gv[k]
        x = xs[k]
        out.append((x[0], x[1], pick[0], pick[1]))
    return canonical(out)


cpdef list pl_min(list f, list g):
    return pl_extremum(f, g, False)


cpdef list pl_max(list f, list g):
    return pl_extremum(f, g, True)


cpdef list pl_sub(list f, list g):
    """Breakpoints of f - g on the common domain."""
    cdef list xs = merged_xs(f, g)
    cdef list fv = eval_sorted(f, xs)
    cdef list gv = eval_sorted(g, xs)
    cdef list out = []
    cdef tuple d, x
    cdef Py_ssize_t k
    for k in range(len(xs)):
        d = rsub(fv[k], gv[k])
        x = xs[k]
        out.append((x[0], x[1], d[0], d[1]))
    return canonical(out)


cpdef list restrict(list bps, tuple a, tuple b):
    """Breakpoints of the restriction to [a, b] inside the domain (a < b)."""
    cdef tuple va = eval_at(bps, a)
    cdef tuple vb = eval_at(bps, b)
    cdef list out = [(a[0], a[1], va[0], va[1])]
    cdef tuple p
    for p in bps:
        if rcmp((p[0], p[1]), a) > 0 and rcmp((p[0], p[1]), b) < 0:
            out.append(p)
    out.append((b[0], b[1], vb[0], vb[1]))
    return canonical(out)


cpdef list affine_image(list bps, tuple sx, tuple ox, tuple sy, tuple oy):
    """Apply x -> sx*x + ox and y -> sy*y + oy to every breakpoint (sx != 0)."""
    cdef list out = []
    cdef tuple p, nx, ny
    for p in bps:
        nx = radd(rmul(sx, (p[0], p[1])), ox)
        ny = radd(rmul(sy, (p[2], p[3])), oy)
        out.append((nx[0], nx[1], ny[0], ny[1]))
    if sx[0] < 0:
        out.reverse()
    return out


cpdef list concat(list pieces):
    """Glue PL pieces left to right; adjacent endpoints must coincide."""
    cdef list out = list(pieces[0])
    cdef list piece
    cdef Py_ssize_t k
    for k in range(1, len(pieces)):
        piece = pieces[k]
        if out[-1] != piece[0]:
            raise ValueError(
                f"pieces do not meet: {out[-1]} vs {piece[0]}"
            )
        out.extend(piece[1:])
    return canonical(out)
