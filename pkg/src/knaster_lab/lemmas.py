"""Certified lower and upper bound checkers for the tower metric.

Each checker validates its preconditions, then produces an exact
rational certificate that a distance bound holds:

  * certify_mod_bound: two inducers within eps/(p_1...p_n) in the sup
    metric stay within eps as diagonal maps; the certificate is a
    CertifiedDistance whose upper bound is strictly below eps.
  * tent_witness: a sup gap of delta/d survives composition with the
    degree-d tent, either undiminished (case 1) or halved but pinned to
    a boundary value (case 2); returns the witness point.
  * separation_lower_bound: a window that moves the grid point 1/d is
    uniformly far from every diagonal induced below it.
  * comod_lower_bound_check: a sup gap at a high coordinate forces a
    metric gap at a fixed low coordinate, via tent_witness.

A CounterexampleError from any of them means the checked claim failed
on inputs satisfying its preconditions; the payload replays the inputs.
Tests treat any occurrence as fatal.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .knaster import (
    CertifiedDistance,
    DiagonalHomeo,
    TruncatedKnasterPoint,
    diag_dist,
    eval_diagonal,
    extend_point,
    knaster_dist,
    lift,
)
from .plmap import (
    PLHomeo,
    compose,
    reflect,
    sup_dist,
    sup_dist_witness,
    to_json_dict,
)
from .rational import format_rational
from .tents import tent, tent_value


class CounterexampleError(RuntimeError):
    """A certified search failed where the theory says it cannot."""

    def __init__(self, message, payload):
        super().__init__(message)
        self.payload = payload


@dataclass(frozen=True)
class ModBoundCertificate:
    coord: int
    eps: Fraction
    distance: CertifiedDistance
    certified: bool

    def to_json_dict(self):
        return {
            "coord": self.coord,
            "eps": format_rational(self.eps),
            "distance": self.distance.to_json_dict(),
            "certified": self.certified,
        }


def certify_mod_bound(g, h, n, eps, P, max_extra=8):
    """Certify that the diagonal distance of (n,g) and (n,h) is below eps.

    Requires sup_dist(g, h) < eps/(p_1...p_n). Walks the truncation up
    from n until the certified upper bound drops under eps. The weighted
    coordinate differences keep the lower part under 5*eps/6 at every
    truncation while the tail term shrinks geometrically, so the first
    or second truncation certifies unless the implementation is wrong.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if n < 0:
        raise ValueError("coordinate must be nonnegative")
    gap = sup_dist(g, h)
    bound = eps / P.product(1, n)
    if gap >= bound:
        raise ValueError(
            f"sup distance {gap} is not below eps/(p_1...p_n) = {bound}"
        )
    a = DiagonalHomeo(n, g)
    b = DiagonalHomeo(n, h)
    for N in range(n, n + max_extra + 1):
        d = diag_dist(a, b, N, P)
        if d.upper < eps:
            return ModBoundCertificate(n, eps, d, True)
    raise CounterexampleError(
        "no truncation certified the mod bound",
        {
            "g": to_json_dict(g),
            "h": to_json_dict(h),
            "coord": n,
            "eps": format_rational(eps),
        },
    )


class TentWitness(NamedTuple):
    x: Fraction
    case: int


def _tent_pair(f, g, d, x):
    return tent_value(d, f(x)), tent_value(d, g(x))


def _payload(f, g, d, delta):
    return {
        "f": to_json_dict(f),
        "g": to_json_dict(g),
        "d": d,
        "delta": format_rational(delta),
    }


def _witness_by_search(f, g, d, delta):
    t = tent(d)
    tf = compose(t, f)
    tg = compose(t, g)
    m, wx = sup_dist_witness(tf, tg)
    if m >= delta:
        return TentWitness(wx, 1)
    # the full composite sup fell under delta, so hunt along the exact
    # preimages of the tent grid, where one side is pinned to 0 or 1
    half = delta / 2
    cands = set()
    for k in range(d + 1):
        y = Fraction(k, d)
        cands.add(f.preimage(y))
        cands.add(g.preimage(y))
    for x in sorted(cands):
        a, b = _tent_pair(f, g, d, x)
        if abs(a - b) >= half and (a in (0, 1) or b in (0, 1)):
            return TentWitness(x, 2)
    raise CounterexampleError(
        "no tent witness on a pair meeting the preconditions",
        _payload(f, g, d, delta),
    )


def _trace_up(lo, hi, d, delta, j):
    """Walk the anchored grid indices upward until a witness appears.

    Invariant entering each step: hi exceeds lo by at least delta/(2d)
    at the point where lo hits k/d. The composed values then either
    separate enough to answer, or hi's value is within delta/(2d) of a
    grid point of the same parity at least two steps up.
    """
    half = delta / 2
    width = delta / (2 * d)
    k = j
    for _ in range(d + 2):
        x = lo.preimage(Fraction(k, d))
        a = Fraction(k & 1)
        b = tent_value(d, hi(x))
        diff = abs(a - b)
        if diff >= delta:
            return TentWitness(x, 1)
        if diff >= half:
            return TentWitness(x, 2)
        v = hi(x) * d + Fraction(1, 2)
        kp = v.numerator // v.denominator
        if (
            abs(hi(x) - Fraction(kp, d)) >= width
            or kp % 2 != k % 2
            or kp < k + 2
        ):
            raise CounterexampleError(
                "tent trace lost the walk invariant",
                {"k": k, "kp": kp, "x": format_rational(x)},
            )
        k = kp - 1
    raise CounterexampleError("tent trace failed to terminate", {"k": k})


def _witness_by_trace(f, g, d, delta):
    m, x0 = sup_dist_witness(f, g)
    a, b = _tent_pair(f, g, d, x0)
    if abs(a - b) >= delta:
        return TentWitness(x0, 1)
    lo, hi = (f, g) if f(x0) < g(x0) else (g, f)
    va, vb = lo(x0), hi(x0)
    js = [j for j in range(1, d) if va < Fraction(j, d) < vb]
    if not js:
        raise CounterexampleError(
            "trace found no separating grid point", _payload(f, g, d, delta)
        )
    width = delta / (2 * d)
    up = [j for j in js if vb - Fraction(j, d) >= width]
    if up:
        return _trace_up(lo, hi, d, delta, max(up))
    down = [j for j in js if Fraction(j, d) - va >= width]
    if down:
        # mirror through x -> 1-x; tent values reflect within {0,1}
        w = _trace_up(reflect(hi), reflect(lo), d, delta, d - min(down))
        return TentWitness(1 - w.x, w.case)
    raise CounterexampleError(
        "neither walk direction had enough margin", _payload(f, g, d, delta)
    )


def tent_witness(f, g, d, delta, method="search"):
    """A point where the degree-d tent keeps f and g visibly apart.

    Requires delta < 1/4 and sup_dist(f, g) >= delta/d. Returns
    TentWitness(x, case) with case 1 meaning |T∘f - T∘g| >= delta at x,
    and case 2 meaning the gap is >= delta/2 with one side in {0, 1}.

    method "search" takes the exact sup and then the finitely many grid
    preimages; "trace" replays the anchored walk that proves those
    candidates suffice, at matching cost but with more steps shown.
    """
    delta = Fraction(delta)
    if d < 1:
        raise ValueError("tent degree must be positive")
    if not 0 < delta < Fraction(1, 4):
        raise ValueError("delta must lie in (0, 1/4)")
    if sup_dist(f, g) < delta / d:
        raise ValueError("pair is closer than delta/d in the sup metric")
    if method == "search":
        return _witness_by_search(f, g, d, delta)
    if method == "trace":
        return _witness_by_trace(f, g, d, delta)
    raise ValueError(f"unknown method {method!r}")


def check_tent_witness(f, g, d, delta, w):
    """Exact recheck of a TentWitness certificate; True when it holds."""
    a, b = _tent_pair(f, g, d, w.x)
    gap = abs(a - b)
    if w.case == 1:
        return gap >= delta
    return gap >= Fraction(delta) / 2 and (a in (0, 1) or b in (0, 1))


@dataclass(frozen=True)
class SeparationCertificate:
    bound: Fraction
    distance: CertifiedDistance
    certified: bool

    def to_json_dict(self):
        return {
            "bound": format_rational(self.bound),
            "distance": self.distance.to_json_dict(),
            "certified": self.certified,
        }


def separation_lower_bound(F, h_window, m, eta, P):
    """Certify d >= eta/(p_1...p_m) between F and the window's diagonal.

    F lives at a coordinate n < m; d = p_{n+1}...p_m. Every lift of F
    fixes the grid point 1/d, so a window with |h(1/d) - 1/d| >= 2*eta
    stays a weighted step away from F. The grid point is a corner of the
    lifted block inducer, hence among diag_dist's candidates, and the
    certified lower bound dominates the coordinate-m term there.
    """
    eta = Fraction(eta)
    if eta <= 0:
        raise ValueError("eta must be positive")
    n = F.base_coord
    if m <= n:
        raise ValueError("window coordinate must exceed the base coordinate")
    d = P.product(n + 1, m)
    grid = Fraction(1, d)
    margin = abs(h_window(grid) - grid)
    if margin < 2 * eta:
        raise ValueError("window moves 1/d by less than 2*eta")
    dist = diag_dist(F, DiagonalHomeo(m, h_window), m, P)
    bound = eta / P.product(1, m)
    if dist.lower < bound:
        raise CounterexampleError(
            "separation bound failed at the grid stalk",
            {
                "inducer": to_json_dict(F.inducer),
                "base_coord": n,
                "window": to_json_dict(h_window),
                "coord": m,
                "eta": format_rational(eta),
            },
        )
    return SeparationCertificate(bound, dist, True)


@dataclass(frozen=True)
class ComodCertificate:
    bound: Fraction
    achieved: Fraction
    coordinate: int
    route: str
    witness: TruncatedKnasterPoint
    certified: bool

    def to_json_dict(self):
        return {
            "bound": format_rational(self.bound),
            "achieved": format_rational(self.achieved),
            "coordinate": self.coordinate,
            "route": self.route,
            "witness": self.witness.to_json_dict(),
            "certified": self.certified,
        }


def comod_lower_bound_check(p_prime, n, g_phi, j, delta, P):
    """Certify d >= delta/(p_1...p_j) from a sup gap at coordinate n >= j.

    p_prime induces at coordinate n; g_phi induces at coordinate j and
    is compared through its lift. Requires j >= 2, delta below both 1/4
    and 1/p_j, and sup_dist(p_prime, lift) >= delta/(p_{j+1}...p_n).

    With n = j the sup witness itself separates coordinate j. With
    n > j, tent_witness supplies a point whose images separate at
    coordinate j (case 1), or at coordinate j-1 after the degree-p_j
    tent doubles a boundary-pinned half gap (case 2).
    """
    delta = Fraction(delta)
    if j < 2:
        raise ValueError("base coordinate j must be at least 2")
    if n < j:
        raise ValueError("n must be at least j")
    pj = P.prime(j)
    if not 0 < delta < min(Fraction(1, 4), Fraction(1, pj)):
        raise ValueError("delta must lie in (0, min(1/4, 1/p_j))")
    lifted = lift(DiagonalHomeo(j, g_phi), n, P).inducer
    d = P.product(j + 1, n)
    if sup_dist(p_prime, lifted) < delta / d:
        raise ValueError("pair is closer than delta/(p_{j+1}...p_n)")

    if n == j:
        _, x_top = sup_dist_witness(p_prime, lifted)
        route = "direct"
        coord_used = j
    else:
        w = tent_witness(p_prime, lifted, d, delta)
        x_top = w.x
        route = f"tent-case-{w.case}"
        coord_used = j if w.case == 1 else j - 1

    x = extend_point(x_top, n, P)
    ya = eval_diagonal(DiagonalHomeo(n, p_prime), x, P)
    yb = eval_diagonal(DiagonalHomeo(n, lifted), x, P)
    dist = knaster_dist(ya, yb, P)
    bound = delta / P.product(1, j)
    if dist.lower < bound:
        raise CounterexampleError(
            "comod lower bound failed at its witness",
            {
                "p_prime": to_json_dict(p_prime),
                "n": n,
                "g_phi": to_json_dict(g_phi),
                "j": j,
                "delta": format_rational(delta),
                "witness": x.to_json_dict(),
            },
        )
    return ComodCertificate(bound, dist.lower, coord_used, route, x, True)
