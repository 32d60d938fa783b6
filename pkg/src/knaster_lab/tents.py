"""Tent maps, block sums, the alternating extension, and straightening.

The degree-d tent map folds [0,1] through d full laps on the uniform grid.
``block_sum`` glues n maps into the n blocks [i/n, (i+1)/n], each copy
affinely squeezed; ``oplus_power(g, d)`` is the block sum of d copies of g
alternating with its reflection, which is exactly the map that the degree-d
tent semiconjugates onto g:

    g ∘ tent(d) == tent(d) ∘ oplus_power(g, d)

``straighten`` produces the homeomorphism h with g ∘ h == f for two open
maps of the same degree starting at the same endpoint value, by matching
laps and transporting each lap of f through the inverse of the matching
lap of g.
"""

from fractions import Fraction
from functools import lru_cache

from ._backend import kernel as _k
from .plmap import OpenPLMap, PLHomeo, PLMap, compose, reflect


@lru_cache(maxsize=None)
def tent(d):
    """The standard degree-d tent map."""
    if d < 1:
        raise ValueError("degree must be a positive integer")
    pts = []
    for m in range(d + 1):
        xn, xd = _k.rnorm(m, d)
        pts.append((xn, xd, m & 1, 1))
    return OpenPLMap._from_kernel(_k.canonical(pts))


def tent_value(d, x):
    """tent(d)(x) as a Fraction, without building the map.

    The lap index is floor(d*x); even laps rise from 0, odd laps fall
    from 1, and x = 1 lands on the closing value d mod 2.
    """
    u = Fraction(d) * x
    k = u.numerator // u.denominator
    t = u - k
    if k == d:
        return Fraction(k & 1)
    return t if k % 2 == 0 else 1 - t


def block_sum(maps):
    """Glue maps into equal blocks along the diagonal.

    Block i of n carries maps[i] via x -> (i + x)/n in both coordinates,
    so adjacent blocks meet only when each map ends where the next begins
    (always true for homeomorphisms fixing 0 and 1).
    """
    n = len(maps)
    if n == 0:
        raise ValueError("need at least one block")
    pieces = []
    for i, g in enumerate(maps):
        pieces.append(
            _k.affine_image(g._kbps, (1, n), (i, n), (1, n), (i, n))
        )
    kb = _k.concat(pieces)
    if all(isinstance(g, PLHomeo) for g in maps):
        return PLHomeo._from_kernel(kb)
    return PLMap._from_kernel(kb)


def oplus_power(g, d):
    """Block sum of d copies of g, every odd block reflected."""
    if d < 1:
        raise ValueError("degree must be a positive integer")
    r = reflect(g)
    return block_sum([g if i % 2 == 0 else r for i in range(d)])


def verify_semiconjugacy(g, d):
    """Exact check of g ∘ tent(d) == tent(d) ∘ oplus_power(g, d)."""
    t = tent(d)
    return compose(g, t) == compose(t, oplus_power(g, d))


def straighten(f, g):
    """The homeomorphism h with g ∘ h == f, for lap-aligned open maps.

    Requires equal degree and f(0) == g(0); then lap j of f runs between
    the same pair of endpoint values as lap j of g, and h is defined on
    lap j as (g restricted to its lap)^-1 ∘ (f restricted to its lap).
    """
    if not isinstance(f, OpenPLMap) or not isinstance(g, OpenPLMap):
        raise TypeError("straighten expects open maps")
    laps_f = f.laps()
    laps_g = g.laps()
    if len(laps_f) != len(laps_g):
        raise ValueError("degree mismatch")
    if f(0) != g(0):
        raise ValueError("maps must start at the same endpoint value")
    pieces = []
    for (af, bf, _), (ag, bg, _) in zip(laps_f, laps_g):
        pf = _k.restrict(
            f._kbps,
            (af.numerator, af.denominator),
            (bf.numerator, bf.denominator),
        )
        pg = _k.restrict(
            g._kbps,
            (ag.numerator, ag.denominator),
            (bg.numerator, bg.denominator),
        )
        pieces.append(_k.compose(_k.invert(pg), pf))
    h = PLHomeo._from_kernel(_k.concat(pieces))
    if compose(g, h) != f:
        raise AssertionError("straightening failed its exact post-check")
    return h


def grid_points(d):
    """The fixed grid i/d for i = 0..d."""
    return [Fraction(i, d) for i in range(d + 1)]
