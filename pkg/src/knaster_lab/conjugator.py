"""Approximate conjugator synthesis and the blockwise conjugation kernel.

Two homeomorphisms with equal signatures are conjugate, but the exact
conjugator is generally not PL (its breakpoints accumulate at fixed
points), so the deliverable is an approximate conjugator h with

    sup_dist(h⁻¹ ∘ f ∘ h, g) < η

verified by exact computation after construction. The construction matches
non-fixed components in order and transports a fundamental domain along
the orbit inside each matched pair: on the orbit cell [q_j, q_{j+1}] of g
the conjugator is f^j ∘ h₀ ∘ g^{-j}, which satisfies the conjugacy
equation exactly; the only error comes from the affine caps that stop the
(infinite) orbit once it is within a margin of the component ends.

Cap error accounting, used to pick stopping rules: with the cap placed on
the g-side cell C next to a component end, both g(x) and h⁻¹(f(h(x)))
stay inside the convex hull of C's g-image for x in C, so the error is at
most the length of that hull. At the attracting end the hull is C itself;
at the repelling end it is C grown by one extra orbit step, which is why
the backward orbit runs until the previous point is inside the margin.

Where the fixed-gap layouts of f and g disagree (g pauses on an interval
where f has a single fixed point) no cap can absorb the mismatch: the
conjugator must compress that g-interval into a tiny window around the
f-point, and an affine compression amplifies f's displacement by the
inverse slope. The squeeze glue instead halves the window per piece of
equal width, so a displacement by a bounded slope ratio moves the image
at most a few pieces sideways and the error stays proportional to the
piece width, which we pick below the cap margin.
"""

from dataclasses import dataclass
from fractions import Fraction

from ._backend import kernel as _k
from .plmap import (
    PLHomeo,
    compose,
    identity,
    reflect,
    sup_dist,
    to_json_dict,
)
from .randgen import derive_rng, rand_signature_homeo
from .rational import format_rational
from .signatures import fixed_intervals, signature, signature_reflect
from .tents import block_sum, oplus_power


class SignatureMismatchError(ValueError):
    """The two maps are not conjugate: their signatures differ."""


class OrbitCapError(RuntimeError):
    """Orbit iteration exceeded the configured cap; η too small for it."""


class ConjugatorError(RuntimeError):
    """The synthesized map failed its exact post-check even after retries."""


class GridNotFixedError(ValueError):
    """The target map moves a grid point it was required to fix."""


class SnapMarginError(ValueError):
    """δ leaves no room to pinch a grid point onto the diagonal."""


def _fp(x):
    return (x.numerator, x.denominator)


def _frac(pair):
    return Fraction(pair[0], pair[1])


def _affine_piece(x0, y0, x1, y1):
    return [_fp(x0) + _fp(y0), _fp(x1) + _fp(y1)]


class _Budget:
    def __init__(self, cap):
        self.left = cap

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise OrbitCapError(
                "orbit iteration exceeded the cap; "
                "raise max_steps or use a larger eta"
            )


def _transport(f, g, fcomp, gcomp, sign, eta_cap, budget):
    """Orbit-matched conjugator pieces inside one component pair.

    Returns (pieces, ql, pl, qh, ph): kernel pieces in ascending x order
    covering [ql, qh] on the g side, with h(ql) = pl and h(qh) = ph.
    """
    a, b = fcomp
    c, d = gcomp
    g_loc = _k.restrict(g._kbps, _fp(c), _fp(d))
    ginv = _k.invert(g_loc)
    f_loc = _k.restrict(f._kbps, _fp(a), _fp(b))
    finv = _k.invert(f_loc)

    q0 = (c + d) / 2
    p0 = (a + b) / 2
    q1 = _frac(_k.eval_at(g_loc, _fp(q0)))
    p1 = _frac(_k.eval_at(f_loc, _fp(p0)))
    h0 = (
        _affine_piece(q0, p0, q1, p1)
        if sign > 0
        else _affine_piece(q1, p1, q0, p0)
    )

    attract = d if sign > 0 else c
    repel = c if sign > 0 else d

    fwd_pieces = []
    piece, q_cur, p_cur = h0, q1, p1
    while abs(attract - q_cur) > eta_cap:
        budget.spend()
        q_next = _frac(_k.eval_at(g_loc, _fp(q_cur)))
        p_next = _frac(_k.eval_at(f_loc, _fp(p_cur)))
        lo, hi = (q_cur, q_next) if sign > 0 else (q_next, q_cur)
        step = _k.compose(piece, _k.restrict(ginv, _fp(lo), _fp(hi)))
        piece = _k.compose(f_loc, step)
        fwd_pieces.append(piece)
        q_cur, p_cur = q_next, p_next

    back_pieces = []
    piece, r_cur, z_cur = h0, q0, p0
    # the cap bound at the repelling end is the previous orbit point, so
    # keep stepping until g(r) is already inside the margin
    while abs(_frac(_k.eval_at(g_loc, _fp(r_cur))) - repel) > eta_cap:
        budget.spend()
        r_next = _frac(_k.eval_at(ginv, _fp(r_cur)))
        z_next = _frac(_k.eval_at(finv, _fp(z_cur)))
        lo, hi = (r_next, r_cur) if sign > 0 else (r_cur, r_next)
        step = _k.compose(piece, _k.restrict(g_loc, _fp(lo), _fp(hi)))
        piece = _k.compose(finv, step)
        back_pieces.append(piece)
        r_cur, z_cur = r_next, z_next

    if sign > 0:
        pieces = list(reversed(back_pieces)) + [h0] + fwd_pieces
        return pieces, r_cur, z_cur, q_cur, p_cur
    pieces = list(reversed(fwd_pieces)) + [h0] + back_pieces
    return pieces, q_cur, p_cur, r_cur, z_cur


def _slope_bound(f, lo, hi):
    """Largest of slope and inverse slope of f over segments meeting (lo, hi)."""
    worst = Fraction(1)
    kb = f._kbps
    for i in range(len(kb) - 1):
        x0, x1 = Fraction(kb[i][0], kb[i][1]), Fraction(kb[i + 1][0], kb[i + 1][1])
        if x1 <= lo or x0 >= hi:
            continue
        sl = (Fraction(kb[i + 1][2], kb[i + 1][3]) - Fraction(kb[i][2], kb[i][3])) / (
            x1 - x0
        )
        worst = max(worst, sl, 1 / sl)
    return worst


def _half_squeeze(u, v, m, theta, eta_cap, f, rising):
    """Kernel piece compressing [u, v] into the window next to m.

    rising=True: values climb from m - theta at u to exactly m at v.
    rising=False: values climb from exactly m at u to m + theta at v.
    The window halves per equal-width piece, so a point displaced by f
    within a bounded slope ratio lands only a few pieces away.
    """
    ratio = _slope_bound(f, m - theta, m + theta)
    c_const = 3 + (ratio.numerator // ratio.denominator + 1).bit_length()
    width = eta_cap / c_const
    span = v - u
    npieces = max(1, -((-span.numerator * width.denominator) // (span.denominator * width.numerator)))
    pts = []
    for j in range(npieces + 1):
        x = u + span * j / npieces
        if rising:
            y = m if j == npieces else m - theta / (2**j)
        else:
            y = m if j == 0 else m + theta / (2 ** (npieces - j))
        pts.append(_fp(x) + _fp(y))
    return _k.canonical(pts)


def _gap_pieces(j, ncomp, gap_g, gap_f, left, right, eta_cap, f):
    """Pieces over one fixed gap plus the anchor values at its two ends.

    Returns (pieces, left_anchor, right_anchor): h's value at the gap's
    left end (where the previous component's cap attaches) and right end
    (where the next component's cap starts).
    """
    u, v = gap_g
    fu, fv = gap_f
    if u < v and fu < fv:
        return [_affine_piece(u, fu, v, fv)], fu, fv
    if u == v and fu == fv:
        return [], fu, fu
    if u == v:
        # g pinches where f pauses: the neighbouring caps absorb the f-gap
        if j == 0:
            anchor = Fraction(0)
        elif j == ncomp:
            anchor = Fraction(1)
        else:
            anchor = (fu + fv) / 2
        return [], anchor, anchor
    # g pauses where f pinches: squeeze [u, v] into a geometric window
    m = fu
    if j == 0:
        theta = (right[2] - m) / 2
        return [_half_squeeze(u, v, m, theta, eta_cap, f, False)], m, m + theta
    if j == ncomp:
        theta = (m - left[4]) / 2
        return [_half_squeeze(u, v, m, theta, eta_cap, f, True)], m - theta, m
    mid = (u + v) / 2
    th_l = (m - left[4]) / 2
    th_r = (right[2] - m) / 2
    pieces = [
        _half_squeeze(u, mid, m, th_l, eta_cap, f, True),
        _half_squeeze(mid, v, m, th_r, eta_cap, f, False),
    ]
    return pieces, m - th_l, m + th_r


def _build_conjugator(f, g, eta_cap, budget):
    f_ivs = fixed_intervals(f)
    g_ivs = fixed_intervals(g)
    ncomp = len(f_ivs) - 1

    comps = []
    for j in range(ncomp):
        fcomp = (f_ivs[j][1], f_ivs[j + 1][0])
        gcomp = (g_ivs[j][1], g_ivs[j + 1][0])
        mid = (gcomp[0] + gcomp[1]) / 2
        sign = 1 if g(mid) > mid else -1
        comps.append(_transport(f, g, fcomp, gcomp, sign, eta_cap, budget))

    parts = []
    for j in range(ncomp + 1):
        left = comps[j - 1] if j > 0 else None
        right = comps[j] if j < ncomp else None
        pieces, left_anchor, right_anchor = _gap_pieces(
            j, ncomp, g_ivs[j], f_ivs[j], left, right, eta_cap, f
        )
        if left is not None:
            parts.append(_affine_piece(left[3], left[4], g_ivs[j][0], left_anchor))
        parts.extend(pieces)
        if right is not None:
            parts.append(_affine_piece(g_ivs[j][1], right_anchor, right[1], right[2]))
            parts.extend(right[0])
    return PLHomeo._from_kernel(_k.concat(parts))


def approx_conjugator(f, g, eta, max_steps=1_000_000):
    """A homeomorphism h with sup_dist(h⁻¹ ∘ f ∘ h, g) < eta, exact-checked.

    Requires signature(f) == signature(g). Raises OrbitCapError when the
    orbit matching needs more than max_steps iterations, and
    ConjugatorError when the exact post-check cannot be met.
    """
    eta = Fraction(eta)
    if eta <= 0:
        raise ValueError("eta must be positive")
    if f == g:
        return identity()
    if signature(f) != signature(g):
        raise SignatureMismatchError(
            "maps are not conjugate: signatures differ"
        )
    budget = _Budget(max_steps)
    for attempt in range(6):
        h = _build_conjugator(f, g, eta / (2 ** (attempt + 1)), budget)
        achieved = sup_dist(compose(compose(h.invert(), f), h), g)
        if achieved < eta:
            return h
    raise ConjugatorError(
        f"post-check failed: achieved {achieved}, needed < {eta}"
    )


def grid_block_conjugate(f, d, h, eta, max_steps=1_000_000):
    """Blockwise conjugator g with sup_dist(g⁻¹ ∘ ⊕ᵈ(f) ∘ g, h) < eta.

    h must fix every grid point i/d; each rescaled block of h must be
    conjugate to f (even block) or to its reflection (odd block). The
    returned g fixes the grid, and sup_dist(g, id) equals the largest
    block conjugator norm divided by d, exactly.
    """
    eta = Fraction(eta)
    blocks = []
    for i in range(d + 1):
        p = Fraction(i, d)
        if h(p) != p:
            raise GridNotFixedError(f"h moves the grid point {i}/{d}")
    sig_f = signature(f)
    for i in range(d):
        kb = _k.restrict(h._kbps, _fp(Fraction(i, d)), _fp(Fraction(i + 1, d)))
        kb = _k.affine_image(kb, (d, 1), (-i, 1), (d, 1), (-i, 1))
        block = PLHomeo._from_kernel(kb)
        want = sig_f if i % 2 == 0 else signature_reflect(sig_f)
        if signature(block) != want:
            raise SignatureMismatchError(
                f"block {i} of h is not conjugate to the required model"
            )
        if i % 2 == 0:
            w = approx_conjugator(f, block, d * eta, max_steps)
        else:
            w = reflect(approx_conjugator(f, reflect(block), d * eta, max_steps))
        blocks.append(w)
    g = block_sum(blocks)
    ident = identity()
    assert sup_dist(g, ident) == max(sup_dist(w, ident) for w in blocks) / d
    conj = compose(compose(g.invert(), oplus_power(f, d)), g)
    achieved = sup_dist(conj, h)
    if achieved >= eta:
        raise ConjugatorError(
            f"blockwise post-check failed: achieved {achieved}, needed < {eta}"
        )
    return g


def snap_to_grid(h, d, reference, delta):
    """Pinch h onto the grid: h′ fixing every i/d, sup_dist(h′, ref) < δ/d.

    reference must itself fix the grid (it plays the role of the block sum
    being approximated). h′ agrees with h outside small windows around the
    moved grid points and lies between the identity and h there. Raises
    SnapMarginError when δ leaves no feasible pinch window.
    """
    delta = Fraction(delta)
    bound = delta / d
    for i in range(d + 1):
        p = Fraction(i, d)
        if reference(p) != p:
            raise ValueError(f"reference moves the grid point {i}/{d}")
    base = sup_dist(h, reference)
    if base >= bound:
        raise SnapMarginError(
            f"sup_dist(h, reference) = {base} is not below {bound}"
        )
    ivs = fixed_intervals(h)
    hinv = h.invert()
    pinches = []
    for i in range(1, d):
        w = Fraction(i, d)
        disp = abs(h(w) - w)
        if disp == 0:
            continue
        comp = None
        for j in range(len(ivs) - 1):
            if ivs[j][1] < w < ivs[j + 1][0]:
                comp = (ivs[j][1], ivs[j + 1][0])
                break
        mid = (comp[0] + comp[1]) / 2
        sgn = 1 if h(mid) > mid else -1
        upper = min((bound - base) / 2, w - comp[0], comp[1] - w, Fraction(1, 2 * d))
        if disp >= upper:
            raise SnapMarginError(
                f"grid point {w}: displacement {disp} leaves no pinch window "
                f"below {upper}"
            )
        mu = (disp + upper) / 2
        xl = hinv(w - mu)
        xr = hinv(w + mu)
        wedge = [_fp(xl) + _fp(w - mu), _fp(w) + _fp(w), _fp(xr) + _fp(w + mu)]
        window = _k.restrict(h._kbps, _fp(xl), _fp(xr))
        mod = _k.pl_min(window, wedge) if sgn > 0 else _k.pl_max(window, wedge)
        pinches.append((xl, xr, mod))
    if not pinches:
        return h
    parts = []
    cursor = Fraction(0)
    for xl, xr, mod in pinches:
        if cursor < xl:
            parts.append(_k.restrict(h._kbps, _fp(cursor), _fp(xl)))
        parts.append(mod)
        cursor = xr
    if cursor < 1:
        parts.append(_k.restrict(h._kbps, _fp(cursor), _fp(Fraction(1))))
    out = PLHomeo._from_kernel(_k.concat(parts))
    for i in range(d + 1):
        p = Fraction(i, d)
        assert out(p) == p
    final = sup_dist(out, reference)
    assert final < bound
    return out


@dataclass
class PseudoGenericSpec:
    """Request for a randomized map with k non-fixed intervals.

    signs defaults to the alternating pattern starting +1. Genuine generic
    elements have densely interleaved intervals and are not PL; this is
    the finite stand-in used throughout the verification campaigns.
    """

    k: int
    signs: list | None = None
    seed: int | str = 0


def pseudo_generic(spec):
    """Seeded map whose signature matches the requested pattern exactly."""
    if spec.k < 1:
        raise ValueError("need at least one non-fixed interval")
    signs = spec.signs
    if signs is None:
        signs = [(-1) ** i for i in range(spec.k)]
    if len(signs) != spec.k or any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be a list of ±1 of length k")
    rng = derive_rng(spec.seed, "pseudo-generic", spec.k)
    h = rand_signature_homeo(rng, signs)
    assert signature(h) == signs
    return h


def conjugator_certificate(f, g, h, eta):
    """JSON-ready record of an approximate-conjugacy verification."""
    achieved = sup_dist(compose(compose(h.invert(), f), h), g)
    eta = Fraction(eta)
    return {
        "f": to_json_dict(f),
        "g": to_json_dict(g),
        "conjugator": to_json_dict(h),
        "achieved_distance": format_rational(achieved),
        "eta": format_rational(eta),
        "ok": achieved < eta,
    }
