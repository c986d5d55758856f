import random
from fractions import Fraction

import pytest

from aligndanzer import vdc
from aligndanzer.errors import TooManyPoints
from aligndanzer.geometry import DyadicRational, Window, contains
from aligndanzer.verifier import empty_box_bruteforce, growth_count, largest_empty_box

F = Fraction
UNIT = Window((0, 0), (1, 1))


def random_points(rng, n, d, exact=False):
    if exact:
        return [tuple(F(rng.randint(1, 63), 64) for _ in range(d)) for _ in range(n)]
    return [tuple(rng.random() for _ in range(d)) for _ in range(n)]


def test_empty_input_gives_whole_window():
    r = largest_empty_box([], UNIT)
    assert r.volume == 1
    assert r.box.lower == (0, 0) and r.box.upper == (1, 1)
    assert empty_box_bruteforce([], UNIT).volume == 1


def test_single_center_point():
    r = largest_empty_box([(F(1, 2), F(1, 2))], UNIT)
    assert r.volume == F(1, 2)
    # four halves tie; lower corner then upper corner decide: the left half
    assert r.box.lower == (0, 0) and r.box.upper == (F(1, 2), 1)


def test_two_by_two_grid():
    pts = [(F(a, 3), F(b, 3)) for a in (1, 2) for b in (1, 2)]
    r = largest_empty_box(pts, UNIT)
    assert r.volume == F(1, 3)
    assert empty_box_bruteforce(pts, UNIT).volume == F(1, 3)


def test_boundary_points_do_not_block():
    pts = [(0, F(1, 2)), (1, F(1, 2)), (F(1, 2), 0)]
    assert largest_empty_box(pts, UNIT).volume == 1


def test_dyadic_inputs_stay_exact():
    pts = [(DyadicRational(1, -1), DyadicRational(1, -2))]
    r = largest_empty_box(pts, UNIT)
    assert r.volume == F(3, 4)
    assert isinstance(r.volume, (DyadicRational, Fraction, int))


@pytest.mark.parametrize("seed", range(40))
def test_agrees_with_brute_force_2d(seed):
    rng = random.Random(seed)
    pts = random_points(rng, rng.randint(0, 25), 2, exact=seed % 2 == 0)
    a, b = largest_empty_box(pts, UNIT), empty_box_bruteforce(pts, UNIT)
    assert a.volume == b.volume
    assert a.box == b.box


@pytest.mark.parametrize("seed", range(10))
def test_agrees_with_brute_force_3d(seed):
    rng = random.Random(100 + seed)
    w = Window((0, 0, 0), (1, 1, 1))
    pts = random_points(rng, rng.randint(1, 8), 3, exact=True)
    a, b = largest_empty_box(pts, w), empty_box_bruteforce(pts, w)
    assert a.volume == b.volume
    assert a.box == b.box


def test_soundness_4d():
    rng = random.Random(5)
    w = Window((0,) * 4, (1,) * 4)
    pts = random_points(rng, 12, 4, exact=True)
    r = largest_empty_box(pts, w)
    assert not any(contains(r.box, p) for p in pts)
    assert 0 < r.volume < 1


def test_monotone_under_insertion():
    rng = random.Random(9)
    pts = random_points(rng, 10, 2, exact=True)
    prev = largest_empty_box(pts, UNIT).volume
    for _ in range(30):
        pts.append(random_points(rng, 1, 2, exact=True)[0])
        cur = largest_empty_box(pts, UNIT).volume
        assert cur <= prev
        prev = cur


def test_reported_box_is_empty_and_inside():
    rng = random.Random(3)
    pts = random_points(rng, 60, 2)
    r = largest_empty_box(pts, UNIT)
    assert not any(contains(r.box, p) for p in pts)
    assert all(0 <= a < b <= 1 for a, b in zip(r.box.lower, r.box.upper))
    assert r.point_count == 60


def test_limits():
    with pytest.raises(ValueError):
        largest_empty_box([(0.5,) * 5], Window((0,) * 5, (1,) * 5))
    with pytest.raises(TooManyPoints):
        empty_box_bruteforce([(0.5, 0.5)] * 201, UNIT)


def test_vdc_threshold_small_window():
    w = Window((0, 0), (64, 64))
    pts = [p for _, p in vdc.enumerate_positive(w)]
    r = largest_empty_box(pts, w)
    assert r.volume <= 64
    # regression value from the exact sweep
    assert r.volume == F(6135, 1024)


def test_growth_count_closed_form():
    def n_by_2n(T):
        return [(a, b) for a in range(T + 1) for b in range(0, T + 1, 2)]

    assert growth_count(n_by_2n, [100]) == [(100, 5151, 0.5151)]


def test_growth_count_vdc():
    rows = growth_count(lambda T: vdc.count_positive(Window((0, 0), (T, T))), [64, 128])
    assert [r[1] for r in rows] == [2050, 8194]
    assert all(0.4 <= r[2] <= 0.6 for r in rows)


def test_report_dict():
    d = largest_empty_box([(F(1, 2), F(1, 2))], UNIT).as_dict()
    assert d["volume"] == 0.5
    assert d["lower"] == [0, 0] and d["upper"] == [0.5, 1]
