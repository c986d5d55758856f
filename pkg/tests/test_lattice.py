import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aligndanzer.errors import FlowTooLarge, WindowTooLarge
from aligndanzer.lattice import (
    DiagonalFlowVector,
    apply_flow,
    covering_radius_estimate,
    danzer_constant_estimate,
    enumerate_lattice,
    expected_count,
    flow_grid,
    hit_box_lattice,
    lll_reduce,
    norm_product,
    shortest_vector_under_flow,
)
from aligndanzer.numberfield import PRESETS, LatticeBasis, build_basis, build_field, identity_basis

SQRT2 = math.sqrt(2)


@pytest.fixture(scope="module")
def quad():
    return build_basis(build_field(PRESETS[2]))


@pytest.fixture(scope="module")
def cubic():
    return build_basis(build_field(PRESETS[3]))


def brute_points(b, lo, hi, reach):
    """Direct sum over a large coefficient cube."""
    out = []
    for c in itertools.product(range(-reach, reach + 1), repeat=b.dim):
        p = b.matrix @ np.array(c, dtype=float)
        if np.all(p >= np.array(lo) - 1e-9) and np.all(p <= np.array(hi) + 1e-9):
            out.append(tuple(p))
    return sorted(out)


def test_flow_vector_validation():
    with pytest.raises(ValueError):
        DiagonalFlowVector((1.0, 1.0))
    t = DiagonalFlowVector.from_free([0.5, -1.0])
    assert t.t == pytest.approx((0.5, -1.0, 0.5))
    assert t.sup_norm == 1.0
    assert np.prod(t.scales()) == pytest.approx(1.0)


def test_flow_for_box_makes_a_cube():
    sides = np.array([8.0, 2.0, 0.5])
    t = DiagonalFlowVector.for_box(sides)
    s = t.scales() * sides
    np.testing.assert_allclose(s, s[0])


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=3), st.lists(st.floats(-50, 50), min_size=4, max_size=4))
def test_flow_preserves_norm_product(free, p):
    t = DiagonalFlowVector.from_free(free)
    p = np.array(p[: t.dim])
    assert norm_product(apply_flow(t, p)) == pytest.approx(norm_product(p), rel=1e-9, abs=1e-9)


def test_lll_unimodular(cubic):
    B, U = lll_reduce(cubic.matrix)
    assert abs(round(np.linalg.det(U))) == 1
    np.testing.assert_allclose(cubic.matrix @ U, B, atol=1e-9)


@pytest.mark.parametrize("lo, hi", [((-5, -5), (5, 5)), ((-0.5, 3), (7, 4.5)), ((10, -20), (11, 20))])
def test_enumeration_matches_brute_force(quad, lo, hi):
    got = [tuple(map(float, p)) for p in enumerate_lattice(quad, (lo, hi))]
    want = brute_points(quad, lo, hi, 25)
    np.testing.assert_allclose(np.array(got).reshape(-1, 2), np.array(want).reshape(-1, 2), atol=1e-12)


def test_enumeration_3d_matches_brute_force(cubic):
    lo, hi = (-3, -2, -4), (3, 2.5, 1)
    got = np.array(enumerate_lattice(cubic, (lo, hi)), dtype=float)
    want = np.array(brute_points(cubic, lo, hi, 8))
    assert got.shape == want.shape
    np.testing.assert_allclose(got, want, atol=1e-9)


def test_enumeration_counts_near_expected(quad):
    w = ((-50, -50), (50, 50))
    n = len(enumerate_lattice(quad, w))
    assert abs(n - expected_count(quad, w)) / expected_count(quad, w) < 0.01


def test_enumeration_cap(quad):
    with pytest.raises(WindowTooLarge):
        enumerate_lattice(quad, ((-1000, -1000), (1000, 1000)), cap=1000)


def test_norms_are_integers(quad, cubic):
    for b in (quad, cubic):
        lo = [-6.0] * b.dim
        pts, coeffs = enumerate_lattice(b, (lo, [6.0] * b.dim), return_coefficients=True)
        assert len(pts) > 10
        norms = np.prod(pts, axis=1)
        assert np.all(np.abs(norms - np.round(norms)) < 1e-9)
        nonzero = np.any(coeffs != 0, axis=1)
        assert np.all(np.abs(norms[nonzero]) >= 1 - 1e-9)


def test_shortest_vector_examples(quad):
    assert shortest_vector_under_flow(quad) == pytest.approx(SQRT2, rel=1e-12)
    assert shortest_vector_under_flow(identity_basis(2), (1.5, -1.5)) == pytest.approx(math.exp(-1.5))
    with pytest.raises(FlowTooLarge):
        shortest_vector_under_flow(quad, (11.0, -11.0))


def test_shortest_vector_brute_force(quad):
    for t in (0.0, 0.7, -1.3, 2.9):
        flow = DiagonalFlowVector((t, -t))
        m = flow.scales()[:, None] * quad.matrix
        best = min(
            np.linalg.norm(m @ np.array(c, dtype=float))
            for c in itertools.product(range(-40, 41), repeat=2)
            if c != (0, 0)
        )
        assert shortest_vector_under_flow(quad, flow) == pytest.approx(best, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_shortest_vector_stays_admissible(a, b):
    cubic = build_basis(build_field(PRESETS[3]))
    # nonzero integer norm gives |prod| >= 1, so the sup norm is at least 1
    assert shortest_vector_under_flow(cubic, (a, b, -a - b)) >= 1 - 1e-9


def test_covering_radius_of_integer_lattice():
    mu = covering_radius_estimate(identity_basis(2), samples=20000)
    assert 0.69 < mu <= math.sqrt(0.5) + 1e-12


def test_covering_radius_monotone_in_samples(quad):
    values = [covering_radius_estimate(quad, samples=n, seed=3) for n in (100, 1000, 10000)]
    assert values == sorted(values)


def test_covering_radius_ignores_basis_choice(quad, cubic):
    for b in (quad, cubic):
        U = np.eye(b.dim)
        U[0, 1] = 3
        U[-1, 0] = -1 if b.dim > 2 else 0
        swapped = LatticeBasis.from_matrix(b.matrix[:, ::-1])
        changed = LatticeBasis.from_matrix(b.matrix @ U)
        base = covering_radius_estimate(b, samples=2000)
        assert covering_radius_estimate(swapped, samples=2000) == pytest.approx(base, rel=1e-9)
        assert covering_radius_estimate(changed, samples=2000) == pytest.approx(base, rel=1e-9)


def test_flow_grid():
    grid = flow_grid(2, bound=1.0, step=0.5)
    assert [g.t for g in grid] == [(-1.0, 1.0), (-0.5, 0.5), (0.0, 0.0), (0.5, -0.5), (1.0, -1.0)]
    assert all(g.sup_norm <= 3 for g in flow_grid(3))


def test_danzer_constant_bounds_empty_boxes(quad):
    from aligndanzer.verifier import largest_empty_box
    from aligndanzer.geometry import Window

    s_hat = danzer_constant_estimate(quad, flow_grid(2, bound=1.0, step=0.5), samples=5000)
    assert 5.5 < s_hat < 6.5
    w = Window((-20, -20), (20, 20))
    pts = [tuple(map(float, p)) for p in enumerate_lattice(quad, w)]
    assert largest_empty_box(pts, w).volume <= s_hat * (1 + 1e-6)


def test_hit_box_lattice_examples():
    z2 = identity_basis(2)
    assert hit_box_lattice(z2, ((0.1, 0.1), (0.2, 0.2))) is None
    assert tuple(map(float, hit_box_lattice(z2, ((0.9, 0.9), (1.1, 1.1))))) == (1.0, 1.0)


def test_hit_box_lattice_random_boxes(quad):
    rng = np.random.default_rng(11)
    # a little above the largest empty box 3 + 2*sqrt(2) of this lattice
    s_hat = 5.9
    for _ in range(1000):
        w = math.exp(rng.uniform(-2.5, 2.5))
        h = s_hat / w
        x, y = rng.uniform(-50, 50 - w), rng.uniform(-50, 50 - h)
        p = hit_box_lattice(quad, ((x, y), (x + w, y + h)))
        assert p is not None
        assert x - 1e-9 <= p[0] <= x + w + 1e-9 and y - 1e-9 <= p[1] <= y + h + 1e-9


def test_flow_and_norm_examples():
    p = apply_flow(DiagonalFlowVector((math.log(2), -math.log(2))), np.array([1.0, 1.0]))
    np.testing.assert_allclose(p, [2.0, 0.5])
    np.testing.assert_allclose(apply_flow(DiagonalFlowVector.zero(2), np.array([3.0, -4.0])), [3.0, -4.0])
    assert norm_product(np.array([1.0, 1.0])) == 1.0
    assert norm_product(np.array([1 + SQRT2, 1 - SQRT2])) == pytest.approx(1.0)


def test_enumeration_examples(quad):
    pts = enumerate_lattice(quad, ((-0.5, -0.5), (0.5, 0.5)))
    assert pts.shape == (1, 2) and np.all(pts == 0)
    got = {tuple(np.round(np.asarray(p, dtype=float), 12)) for p in enumerate_lattice(quad, ((-3, -3), (3, 3)))}
    assert (1.0, 1.0) in got
    assert (round(SQRT2, 12), round(-SQRT2, 12)) in got


def test_hit_box_lattice_quad_example(quad):
    p = hit_box_lattice(quad, ((0.9, 0.9), (1.1, 1.1)))
    assert tuple(map(float, p)) == pytest.approx((1.0, 1.0))
    assert hit_box_lattice(quad, ((0.1, 0.1), (0.2, 0.2))) is None


def test_covering_radius_reproducible_across_seeds(quad):
    values = [covering_radius_estimate(quad, samples=20000, seed=s) for s in range(3)]
    assert max(values) / min(values) < 1.02
