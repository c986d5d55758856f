from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aligndanzer.geometry import (
    AlignedBox,
    DyadicRational,
    Window,
    box_volume,
    contains,
    quadrant_pieces,
    reflect,
    reflect_box,
)

dyadics = st.builds(DyadicRational, st.integers(-(10**12), 10**12), st.integers(-40, 40))
small = st.integers(-50, 50)


def test_dyadic_canonical_form():
    assert (DyadicRational(12, 0).mantissa, DyadicRational(12, 0).exponent) == (3, 2)
    z = DyadicRational(0, 17)
    assert (z.mantissa, z.exponent) == (0, 0)
    assert DyadicRational(6, -2) == Fraction(3, 2)
    assert DyadicRational.from_value(Fraction(5, 8)) == DyadicRational(5, -3)
    assert DyadicRational.from_value(0.375) == DyadicRational(3, -3)
    with pytest.raises(ValueError):
        DyadicRational.from_value(Fraction(1, 3))


@given(dyadics, dyadics)
def test_dyadic_add_sub_roundtrip(a, b):
    assert (a + b) - b == a
    assert (a + b).to_fraction() == a.to_fraction() + b.to_fraction()
    assert (a * b).to_fraction() == a.to_fraction() * b.to_fraction()


@given(dyadics, dyadics)
def test_dyadic_ordering_matches_fractions(a, b):
    fa, fb = a.to_fraction(), b.to_fraction()
    assert (a < b) == (fa < fb)
    assert (a == b) == (fa == fb)
    assert (a <= fb) == (fa <= fb)
    if a == b:
        assert hash(a) == hash(b)


def test_dyadic_hash_agrees_with_fraction():
    assert hash(DyadicRational(3, -2)) == hash(Fraction(3, 4))
    assert hash(DyadicRational(5, 3)) == hash(40)


@pytest.mark.parametrize(
    "lower, upper, vol",
    [((0, 0), (1, 1), 1), ((0, 0), (8, 2), 16), ((-1, -1, -1), (1, 1, 1), 8)],
)
def test_box_volume(lower, upper, vol):
    assert box_volume(AlignedBox.closed(lower, upper)) == vol


@given(small, small, st.integers(0, 20), st.integers(0, 20), small, small)
def test_volume_translation_invariant(x, y, w, h, dx, dy):
    b1 = AlignedBox.closed((x, y), (x + w, y + h))
    b2 = AlignedBox.closed((x + dx, y + dy), (x + w + dx, y + h + dy))
    assert box_volume(b1) == box_volume(b2)


def test_contains_respects_openness():
    assert contains(AlignedBox.closed((0, 0), (1, 1)), (1, 1))
    assert not contains(AlignedBox.open((0, 0), (1, 1)), (0, 0.5))
    assert contains(AlignedBox.closed((0, 0), (8, 2)), (6, Fraction(3, 4)))
    half = AlignedBox((0, 0), (1, 1), (False, True), (True, False))
    assert contains(half, (0, 0.5)) and not contains(half, (1, 0.5))
    with pytest.raises(ValueError):
        contains(AlignedBox.closed((0, 0), (1, 1)), (0, 0, 0))


def test_box_validation():
    with pytest.raises(ValueError):
        AlignedBox.closed((1, 0), (0, 1))
    with pytest.raises(ValueError):
        Window((0, 0), (0, 1))
    # degenerate boxes are allowed, just of volume zero
    assert box_volume(AlignedBox.closed((0, 0), (0, 5))) == 0


def test_quadrant_pieces_examples():
    pieces = quadrant_pieces(AlignedBox.closed((-4, -4), (4, 4)))
    assert [box_volume(b) for _, b in pieces] == [16, 16, 16, 16]
    assert [s for s, _ in pieces] == [(1, 1), (1, -1), (-1, 1), (-1, -1)]

    pieces = quadrant_pieces(AlignedBox.closed((1, 2), (3, 5)))
    assert len(pieces) == 1 and pieces[0][0] == (1, 1)
    assert pieces[0][1] == AlignedBox.closed((1, 2), (3, 5))

    pieces = quadrant_pieces(AlignedBox.closed((-2, 0), (6, 8)))
    assert sorted(box_volume(b) for _, b in pieces) == [16, 48]


@given(small, small, st.integers(0, 30), st.integers(0, 30), small, st.integers(0, 30))
def test_quadrant_pieces_partition(x, y, w, h, z, depth):
    b = AlignedBox.closed((x, y, z), (x + w, y + h, z + depth))
    pieces = quadrant_pieces(b)
    assert sum(box_volume(p) for _, p in pieces) == box_volume(b)
    for signs, p in pieces:
        for s, lo, hi in zip(signs, p.lower, p.upper):
            assert (lo >= 0) if s > 0 else (hi <= 0)


def test_reflect_examples():
    assert reflect((1, 2), (-1, 1)) == (-1, 2)
    assert reflect((0, 0), (-1, -1)) == (0, 0)


@given(st.tuples(dyadics, dyadics), st.tuples(st.sampled_from((1, -1)), st.sampled_from((1, -1))))
def test_reflect_involution(p, s):
    assert reflect(reflect(p, s), s) == p


def test_reflect_box_swaps_openness():
    b = AlignedBox((0, 1), (2, 3), (True, False), (False, True))
    r = reflect_box(b, (-1, 1))
    assert r.lower == (-2, 1) and r.upper == (0, 3)
    assert r.open_lower == (False, False) and r.open_upper == (True, True)
