"""Exact rational kernel for piecewise-linear breakpoint lists (pure Python).

This module is the pure-Python twin of the compiled kernel ``_kernel_c``.
Both expose the same functions over the same flat representation and must
produce bit-identical results; the package picks one at import time (see
``_backend.py``).

Flat representation: a continuous PL function on a closed interval is a list
of breakpoints ``[(xn, xd, yn, yd), ...]`` where every rational is in lowest
terms with a positive denominator and the x coordinates are strictly
increasing. Values are *not* range-restricted here -- differences of maps are
legal PL functions at this layer. Domain/range invariants belong to the typed
layer in ``plmap.py``.

All functions assume well-formed input (at least two breakpoints, normalized
entries, strict x order) and evaluation points inside the domain; the typed
layer enforces this once at construction.
"""

from math import gcd

# ---------------------------------------------------------------------------
# scalar rational helpers, operating on (numerator, denominator) pairs


def rnorm(n, d):
    """Lowest terms, positive denominator."""
    if d < 0:
        n = -n
        d = -d
    g = gcd(n, d)
    if g > 1:
        n //= g
        d //= g
    return n, d


def radd(a, b):
    return rnorm(a[0] * b[1] + b[0] * a[1], a[1] * b[1])


def rsub(a, b):
    return rnorm(a[0] * b[1] - b[0] * a[1], a[1] * b[1])


def rmul(a, b):
    return rnorm(a[0] * b[0], a[1] * b[1])


def rdiv(a, b):
    if b[0] == 0:
        raise ZeroDivisionError("rational division by zero")
    return rnorm(a[0] * b[1], a[1] * b[0])


def rcmp(a, b):
    """Sign of a - b."""
    s = a[0] * b[1] - b[0] * a[1]
    return (s > 0) - (s < 0)


def rabs(a):
    return (-a[0], a[1]) if a[0] < 0 else a


def rmid(a, b):
    """Midpoint of a and b."""
    return rnorm(a[0] * b[1] + b[0] * a[1], 2 * a[1] * b[1])


# ---------------------------------------------------------------------------
# segment primitives


def _interp(x, p, q):
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


def _interp_x(u, p, q):
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


def _collinear(p1, p2, p3):
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


def canonical(bps):
    """Drop interior breakpoints collinear with their neighbors."""
    out = [bps[0]]
    for p in bps[1:]:
        out.append(p)
        while len(out) >= 3 and _collinear(out[-3], out[-2], out[-1]):
            del out[-2]
    return out


def _locate(bps, x):
    """Largest index i with bps[i].x <= x. x must lie in the domain."""
    xn, xd = x
    lo, hi = 0, len(bps) - 1
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        b = bps[mid]
        if b[0] * xd <= xn * b[1]:
            lo = mid
        else:
            hi = mid - 1
    return lo


def eval_at(bps, x):
    """Value at the rational point x = (n, d)."""
    i = _locate(bps, x)
    p = bps[i]
    if p[0] * x[1] == x[0] * p[1]:
        return p[2], p[3]
    return _interp(x, p, bps[i + 1])


def eval_sorted(bps, xs):
    """Values at a nondecreasing list of points, walking segments once."""
    out = []
    i = 0
    top = len(bps) - 1
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


def compose(f, g):
    """Canonical breakpoints of f∘g. The range of g must lie in f's domain."""
    out = []
    y0 = (g[0][2], g[0][3])
    v = eval_at(f, y0)
    out.append((g[0][0], g[0][1], v[0], v[1]))
    nf = len(f)
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


def invert(bps):
    """Swap axes of a strictly monotone PL function."""
    out = [(p[2], p[3], p[0], p[1]) for p in bps]
    if rcmp((bps[-1][2], bps[-1][3]), (bps[0][2], bps[0][3])) < 0:
        out.reverse()
    return out


def merged_xs(f, g):
    """Sorted union of the two breakpoint x-coordinate lists."""
    out = []
    i = j = 0
    nf, ng = len(f), len(g)
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


def sup_diff(f, g):
    """Exact sup of |f - g| over the common domain, with leftmost witness.

    The difference is linear between merged breakpoints, so the sup is
    attained at one of them. Returns (dn, dd, wxn, wxd).
    """
    xs = merged_xs(f, g)
    fv = eval_sorted(f, xs)
    gv = eval_sorted(g, xs)
    best = (0, 1)
    wit = xs[0]
    for k in range(len(xs)):
        d = rabs(rsub(fv[k], gv[k]))
        if rcmp(d, best) > 0:
            best = d
            wit = xs[k]
    return best[0], best[1], wit[0], wit[1]


def crossings(f, g):
    """Strict sign-change roots of f - g between merged breakpoints."""
    xs = merged_xs(f, g)
    fv = eval_sorted(f, xs)
    gv = eval_sorted(g, xs)
    roots = []
    prev = rsub(fv[0], gv[0])
    for k in range(1, len(xs)):
        cur = rsub(fv[k], gv[k])
        if (prev[0] > 0 and cur[0] < 0) or (prev[0] < 0 and cur[0] > 0):
            x0, x1 = xs[k - 1], xs[k]
            span = rsub(x1, x0)
            root = radd(x0, rmul(span, rdiv(prev, rsub(prev, cur))))
            roots.append(root)
        prev = cur
    return roots


def sign_change_roots(bps):
    """Strict sign-change roots of the function itself between breakpoints."""
    roots = []
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


def _merge_sorted(a, b):
    out = []
    i = j = 0
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


def pl_extremum(f, g, take_max):
    """Pointwise min (or max) of two PL functions on a common domain."""
    xs = _merge_sorted(merged_xs(f, g), crossings(f, g))
    fv = eval_sorted(f, xs)
    gv = eval_sorted(g, xs)
    out = []
    for k in range(len(xs)):
        c = rcmp(fv[k], gv[k])
        pick = fv[k] if (c >= 0) == take_max else gv[k]
        out.append((xs[k][0], xs[k][1], pick[0], pick[1]))
    return canonical(out)


def pl_min(f, g):
    return pl_extremum(f, g, False)


def pl_max(f, g):
    return pl_extremum(f, g, True)


def pl_sub(f, g):
    """Breakpoints of f - g on the common domain."""
    xs = merged_xs(f, g)
    fv = eval_sorted(f, xs)
    gv = eval_sorted(g, xs)
    out = []
    for k in range(len(xs)):
        d = rsub(fv[k], gv[k])
        out.append((xs[k][0], xs[k][1], d[0], d[1]))
    return canonical(out)


def restrict(bps, a, b):
    """Breakpoints of the restriction to [a, b] inside the domain (a < b)."""
    va = eval_at(bps, a)
    vb = eval_at(bps, b)
    out = [(a[0], a[1], va[0], va[1])]
    for p in bps:
        if rcmp((p[0], p[1]), a) > 0 and rcmp((p[0], p[1]), b) < 0:
            out.append(p)
    out.append((b[0], b[1], vb[0], vb[1]))
    return canonical(out)


def affine_image(bps, sx, ox, sy, oy):
    """Apply x -> sx*x + ox and y -> sy*y + oy to every breakpoint (sx != 0)."""
    out = []
    for p in bps:
        nx = radd(rmul(sx, (p[0], p[1])), ox)
        ny = radd(rmul(sy, (p[2], p[3])), oy)
        out.append((nx[0], nx[1], ny[0], ny[1]))
    if sx[0] < 0:
        out.reverse()
    return out


def concat(pieces):
    """Glue PL pieces left to right; adjacent endpoints must coincide."""
    out = list(pieces[0])
    for piece in pieces[1:]:
        if out[-1] != piece[0]:
            raise ValueError(
                f"pieces do not meet: {out[-1]} vs {piece[0]}"
            )
        out.extend(piece[1:])
    return canonical(out)
