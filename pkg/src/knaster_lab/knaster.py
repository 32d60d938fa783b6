"""Finite truncations of the tent-tower continuum and its diagonal maps.

The space is the inverse limit of copies of [0,1] bonded by tent maps
whose degrees follow a configurable prime schedule. A point is stored as
a coherent finite stalk (x_0, ..., x_N) with x_{m-1} = T_{p_m}(x_m); a
degree-one diagonal homeomorphism is stored as a single interval
homeomorphism acting at some coordinate, with the canonical lift
(n, f) == (n+1, oplus_power(f, p_{n+1})) identifying representations.

Distances are never floats. The metric

    d(x, y) = |x_0 - y_0|/2 + sum_i |x_i - y_i| / (p_1...p_i)

is reported as a CertifiedDistance: an exact rational interval
[lower, upper] containing the value the untruncated objects would have,
with the tail beyond the truncation absorbed into the upper bound.
"""

from dataclasses import dataclass
from fractions import Fraction

from ._backend import kernel as _k
from .plmap import OpenPLMap, PLHomeo
from .rational import format_rational, parse_rational
from .tents import oplus_power, tent, tent_value

_PRIME_NAMES = ("diagonal", "all2")

_SMALL_PRIMES = [2]


def _is_prime(n):
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _first_primes(k):
    while len(_SMALL_PRIMES) < k:
        c = _SMALL_PRIMES[-1] + 1
        while not _is_prime(c):
            c += 1
        _SMALL_PRIMES.append(c)
    return _SMALL_PRIMES[:k]


class PrimeSequence:
    """A reproducible schedule p_1, p_2, ... of bonding-map degrees.

    "all2" repeats 2 forever. "diagonal" walks the triangle 2 | 2,3 |
    2,3,5 | 2,3,5,7 | ... so every prime recurs infinitely often. An
    explicit list gives a finite schedule that errors past its end;
    certificates at truncation N need N+1 terms (the tail bound looks
    one level down).
    """

    def __init__(self, spec="diagonal"):
        if isinstance(spec, str):
            if spec not in _PRIME_NAMES:
                raise ValueError(f"unknown prime schedule {spec!r}")
            self._name = spec
            self._prefix = None
            self._cache = []
            self._row = 0
        else:
            primes = [int(p) for p in spec]
            if not primes:
                raise ValueError("explicit prime schedule must be nonempty")
            for p in primes:
                if not _is_prime(p):
                    raise ValueError(f"schedule entry {p} is not prime")
            self._name = None
            self._prefix = tuple(primes)
            self._cache = list(primes)
            self._row = 0
        # prefix products p_1...p_i, with the empty product at index 0
        self._prod = [1]

    def _extend(self, n):
        if len(self._cache) >= n:
            return
        if self._prefix is not None:
            raise ValueError(
                f"schedule has only {len(self._prefix)} terms, needs {n}"
            )
        if self._name == "all2":
            self._cache.extend([2] * (n - len(self._cache)))
            return
        while len(self._cache) < n:
            self._row += 1
            self._cache.extend(_first_primes(self._row))

    def prime(self, i):
        """p_i, 1-indexed."""
        if i < 1:
            raise ValueError("prime indices start at 1")
        self._extend(i)
        return self._cache[i - 1]

    def prefix(self, n):
        """(p_1, ..., p_n)."""
        self._extend(n)
        return tuple(self._cache[:n])

    def product(self, i, j):
        """p_i * ... * p_j, empty (= 1) when j < i."""
        if j < i:
            return 1
        self._extend(j)
        while len(self._prod) <= j:
            k = len(self._prod)
            self._prod.append(self._prod[-1] * self._cache[k - 1])
        return self._prod[j] // self._prod[i - 1]

    def weight(self, i):
        """1/(p_1...p_i); at most 2^-i, so metric tails are summable."""
        return Fraction(1, self.product(1, i))

    def tail_bound(self, n):
        """Closed-form bound for sum_{i>n} weight(i).

        Each factor is at least 2, so the tail is dominated by the
        geometric series 2 * weight(n+1).
        """
        return Fraction(2, self.product(1, n + 1))

    def describe(self):
        if self._name is not None:
            return self._name
        return "prefix" + repr(list(self._prefix))

    def to_json_dict(self):
        if self._name is not None:
            return {"name": self._name}
        return {"prefix": list(self._prefix)}

    @classmethod
    def from_json_dict(cls, data):
        if isinstance(data, str):
            return cls(data)
        if isinstance(data, (list, tuple)):
            return cls(data)
        if "name" in data:
            return cls(data["name"])
        if "prefix" in data:
            return cls(data["prefix"])
        raise ValueError("prime schedule needs a 'name' or a 'prefix'")

    def __eq__(self, other):
        if not isinstance(other, PrimeSequence):
            return NotImplemented
        return (self._name, self._prefix) == (other._name, other._prefix)

    def __hash__(self):
        return hash((self._name, self._prefix))

    def __repr__(self):
        return f"PrimeSequence({self.describe()})"


@dataclass(frozen=True)
class TruncatedKnasterPoint:
    """A coherent stalk (x_0, ..., x_N); stands for all its extensions."""

    coords: tuple

    def __post_init__(self):
        pts = tuple(Fraction(c) for c in self.coords)
        if not pts:
            raise ValueError("a point needs at least coordinate 0")
        for c in pts:
            if c < 0 or c > 1:
                raise ValueError("coordinates must lie in [0, 1]")
        object.__setattr__(self, "coords", pts)

    @property
    def truncation(self):
        return len(self.coords) - 1

    @property
    def top(self):
        return self.coords[-1]

    def to_json_dict(self):
        return {"coords": [format_rational(c) for c in self.coords]}

    @classmethod
    def from_json_dict(cls, data):
        return cls(tuple(parse_rational(c) for c in data["coords"]))


def validate_point(x, P):
    """Check the bonding relations x_{m-1} = T_{p_m}(x_m) exactly."""
    for m in range(1, len(x.coords)):
        want = tent_value(P.prime(m), x.coords[m])
        if x.coords[m - 1] != want:
            raise ValueError(
                f"incoherent point: coordinate {m - 1} is "
                f"{x.coords[m - 1]}, bonding map gives {want}"
            )


def extend_point(x, n, P):
    """The stalk through coordinate value x at level n, computed downward."""
    x = Fraction(x)
    if x < 0 or x > 1:
        raise ValueError("coordinate must lie in [0, 1]")
    if n < 0:
        raise ValueError("truncation must be nonnegative")
    coords = [x]
    for m in range(n, 0, -1):
        coords.append(tent_value(P.prime(m), coords[-1]))
    coords.reverse()
    return TruncatedKnasterPoint(tuple(coords))


@dataclass(frozen=True)
class CertifiedDistance:
    """An exact interval [lower, upper] around an untruncatable metric value.

    upper - lower never exceeds the schedule's closed-form tail bound at
    the truncation; witness, when present, is an input stalk realizing
    the lower bound.
    """

    lower: Fraction
    upper: Fraction
    truncation: int
    witness: "TruncatedKnasterPoint | None"

    def to_json_dict(self):
        coords = self.witness.coords if self.witness is not None else ()
        return {
            "lower": format_rational(self.lower),
            "upper": format_rational(self.upper),
            "N": self.truncation,
            "witness": [format_rational(c) for c in coords],
        }

    @classmethod
    def from_json_dict(cls, data):
        coords = data.get("witness") or []
        wit = TruncatedKnasterPoint(tuple(parse_rational(c) for c in coords)) if coords else None
        return cls(
            parse_rational(data["lower"]),
            parse_rational(data["upper"]),
            int(data["N"]),
            wit,
        )


def knaster_dist(x, y, P):
    """Certified metric distance between two stalks of equal truncation."""
    if x.truncation != y.truncation:
        raise ValueError("points have different truncations")
    validate_point(x, P)
    validate_point(y, P)
    n = x.truncation
    lower = abs(x.coords[0] - y.coords[0]) / 2
    for i in range(1, n + 1):
        lower += P.weight(i) * abs(x.coords[i] - y.coords[i])
    return CertifiedDistance(lower, lower + P.tail_bound(n), n, None)


@dataclass(frozen=True)
class DiagonalHomeo:
    """A degree-one diagonal homeomorphism: one inducer at one coordinate.

    Two representations describe the same map when they agree after
    lifting to a common coordinate; lift() and diagonal_equal() decide
    that, this dataclass compares structurally.
    """

    base_coord: int
    inducer: PLHomeo

    def __post_init__(self):
        if self.base_coord < 0:
            raise ValueError("base coordinate must be nonnegative")
        if not isinstance(self.inducer, PLHomeo):
            raise TypeError("inducer must be an increasing homeomorphism")

    def to_json_dict(self):
        from .plmap import to_json_dict as _map_json

        return {
            "base_coord": self.base_coord,
            "inducer": _map_json(self.inducer),
        }

    @classmethod
    def from_json_dict(cls, data):
        from .plmap import from_json_dict as _map_from

        return cls(int(data["base_coord"]), _map_from(data["inducer"]))


def lift(F, m, P):
    """The canonical representation of F at coordinate m >= F.base_coord.

    One level up replaces the inducer by its p-fold alternating block
    sum; lifting several levels iterates that, which agrees with a
    single block sum of the product degree.
    """
    if m < F.base_coord:
        raise ValueError("cannot lift below the base coordinate")
    g = F.inducer
    for k in range(F.base_coord + 1, m + 1):
        g = oplus_power(g, P.prime(k))
    return DiagonalHomeo(m, g)


def diagonal_equal(F, G, P):
    """Equality of the represented maps, decided at a common coordinate."""
    m = max(F.base_coord, G.base_coord)
    return lift(F, m, P).inducer == lift(G, m, P).inducer


def eval_diagonal(F, x, P):
    """Image stalk of x under F; coherent by construction."""
    validate_point(x, P)
    n = x.truncation
    if n < F.base_coord:
        raise ValueError("truncation is below the base coordinate")
    g = lift(F, n, P).inducer
    return extend_point(g(x.coords[n]), n, P)


def diag_dist(F, G, N, P):
    """Certified sup-metric distance between two diagonal homeomorphisms.

    Lifts both to coordinate N. For a stalk with top coordinate t the
    truncated metric between the images is piecewise linear in t, so its
    sup is attained at a breakpoint of one of the per-level differences.
    (A sign-change zero of one difference is a convex kink of the sum
    and can never be a strict maximum, so only breakpoints matter.)

    The upper bound adds the smaller of two tails: the generic bound
    2*weight(N+1), and the contraction-aware bound that scales the
    level-N sup-distance down the remaining tower.
    """
    if N < F.base_coord or N < G.base_coord:
        raise ValueError("truncation is below a base coordinate")
    A = lift(F, N, P).inducer._kbps
    B = lift(G, N, P).inducer._kbps

    levels = []
    m = N
    while True:
        levels.append((m, _k.pl_sub(A, B)))
        if m == 0:
            break
        t = tent(P.prime(m))._kbps
        A = _k.compose(t, A)
        B = _k.compose(t, B)
        m -= 1

    cands = set()
    for _, D in levels:
        for p in D:
            cands.add((p[0], p[1]))
    xs = sorted(cands, key=lambda c: Fraction(*c))

    totals = [(0, 1)] * len(xs)
    sup_top = (0, 1)
    for m, D in levels:
        w = (1, 2) if m == 0 else (1, P.product(1, m))
        vals = _k.eval_sorted(D, xs)
        for i, v in enumerate(vals):
            a = _k.rabs(v)
            if m == N and _k.rcmp(a, sup_top) > 0:
                sup_top = a
            if a[0]:
                totals[i] = _k.radd(totals[i], _k.rmul(a, w))

    best = (-1, 1)
    wit = xs[0]
    for i, tot in enumerate(totals):
        if _k.rcmp(tot, best) > 0:
            best = tot
            wit = xs[i]

    lower = Fraction(*best)
    # Coordinates past N are block sums of the level-N inducers, so the
    # level-m difference is sup_top/(p_{N+1}...p_m); the weighted tail
    # is geometric with ratio <= 1/4.
    pn1 = P.prime(N + 1)
    sharp = Fraction(*sup_top) * Fraction(4, 3 * P.product(1, N + 1) * pn1)
    tail = min(P.tail_bound(N), sharp)
    witness = extend_point(Fraction(*wit), N, P)
    return CertifiedDistance(lower, lower + tail, N, witness)


@dataclass(frozen=True)
class GeneralDiagonalMap:
    """A diagonal map given by an open window from one level to a lower one.

    The window w satisfies (coordinate target_coord of the image) =
    w(coordinate source_coord); increasing homeomorphisms are accepted
    and treated as degree-one windows.
    """

    target_coord: int
    source_coord: int
    window: OpenPLMap

    def __post_init__(self):
        if self.target_coord < 0 or self.source_coord < self.target_coord:
            raise ValueError("need 0 <= target_coord <= source_coord")
        w = self.window
        if not isinstance(w, OpenPLMap):
            if isinstance(w, PLHomeo):
                w = OpenPLMap(w.breakpoints)
                object.__setattr__(self, "window", w)
            else:
                raise TypeError("window must be an open interval map")

    def to_json_dict(self):
        from .plmap import to_json_dict as _map_json

        return {
            "target_coord": self.target_coord,
            "source_coord": self.source_coord,
            "window": _map_json(self.window),
        }

    @classmethod
    def from_json_dict(cls, data):
        from .plmap import from_json_dict as _map_from

        return cls(
            int(data["target_coord"]),
            int(data["source_coord"]),
            _map_from(data["window"]),
        )


def as_general(F):
    """View a degree-one diagonal homeomorphism as a general diagonal map."""
    return GeneralDiagonalMap(
        F.base_coord, F.base_coord, OpenPLMap(F.inducer.breakpoints)
    )


def degree_diagonal(F, P):
    """deg(window) * (p_1...p_target) / (p_1...p_source), exactly.

    The ratio deg(window at level n)/(p_1...p_n) is the same at every
    level the map factors through, so any window representation gives
    the same positive rational.
    """
    w = F.window
    if w(Fraction(0)) != 0:
        raise ValueError("window must fix 0")
    return Fraction(
        w.degree * P.product(1, F.target_coord), P.product(1, F.source_coord)
    )
