"""Fixed-point invariant: extraction, laws, conjugacy decision."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knaster_lab import PLHomeo, compose, identity, reflect
from knaster_lab.randgen import (
    derive_rng,
    rand_homeo,
    rand_sign_list,
    rand_signature_homeo,
)
from knaster_lab.signatures import (
    decide_conjugate,
    fixed_intervals,
    signature,
    signature_oplus,
    signature_reflect,
)
from knaster_lab.tents import oplus_power

# fixed on [1/4,1/2], pushed up before, pulled down after
PLATEAU = PLHomeo(
    [
        (0, 0),
        (F(1, 8), F(3, 16)),
        (F(1, 4), F(1, 4)),
        (F(1, 2), F(1, 2)),
        (F(3, 4), F(5, 8)),
        (1, 1),
    ]
)
# isolated interior crossing at x = 1/3
CROSSER = PLHomeo([(0, 0), (F(1, 4), F(1, 8)), (F(1, 2), F(3, 4)), (1, 1)])


def homeos(max_interior=6):
    return st.integers(min_value=0, max_value=2**48 - 1).map(
        lambda s: rand_homeo(derive_rng("hyp-sig", s), max_interior)
    )


def test_fixed_intervals_frozen():
    assert fixed_intervals(identity()) == [(F(0), F(1))]
    assert fixed_intervals(PLATEAU) == [
        (F(0), F(0)),
        (F(1, 4), F(1, 2)),
        (F(1), F(1)),
    ]
    assert fixed_intervals(CROSSER) == [
        (F(0), F(0)),
        (F(1, 3), F(1, 3)),
        (F(1), F(1)),
    ]


def test_signature_frozen():
    assert signature(identity()) == []
    assert signature(PLATEAU) == [1, -1]
    assert signature(CROSSER) == [-1, 1]


def test_signature_helpers():
    assert signature_reflect([1, -1, -1]) == [1, 1, -1]
    assert signature_oplus([1], 3) == [1, -1, 1]
    assert signature_oplus([1, -1], 2) == [1, -1, 1, -1]
    assert signature_oplus([], 4) == []


def test_signature_realizer():
    rng = derive_rng("sig-realize")
    for _ in range(40):
        signs = rand_sign_list(rng, rng.randint(0, 6))
        h = rand_signature_homeo(rng, signs)
        assert signature(h) == signs


@settings(max_examples=40, deadline=None)
@given(homeos())
def test_reflect_law(h):
    assert signature(reflect(h)) == signature_reflect(signature(h))


@settings(max_examples=25, deadline=None)
@given(homeos(4), st.integers(min_value=1, max_value=5))
def test_oplus_law(h, d):
    assert signature(oplus_power(h, d)) == signature_oplus(signature(h), d)


@settings(max_examples=25, deadline=None)
@given(homeos(4), homeos(4))
def test_conjugation_invariance(f, w):
    conj = compose(compose(w, f), w.invert())
    assert signature(conj) == signature(f)


def test_decide_conjugate():
    rng = derive_rng("decide")
    for _ in range(30):
        signs = rand_sign_list(rng, rng.randint(0, 4))
        f = rand_signature_homeo(rng, signs)
        g = rand_signature_homeo(rng, signs)
        assert decide_conjugate(f, g)
        assert decide_conjugate(g, f)
        flipped = [-s for s in signs]
        if flipped != signs:
            assert not decide_conjugate(f, rand_signature_homeo(rng, flipped))


def test_rejects_open_maps():
    from knaster_lab.tents import tent

    with pytest.raises(TypeError):
        fixed_intervals(tent(2))
