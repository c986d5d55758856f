"""Lattice point enumeration and diagonal-flow probes.

Everything here works for a :class:`~aligndanzer.numberfield.LatticeBasis`
whose columns span the lattice.  Enumeration first applies the trace-zero
diagonal flow that turns the query box into a cube, LLL-reduces the flowed
basis and only then bounds the integer coefficients, so long thin boxes cost
about as much as cubes of the same volume.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import qmc

from .errors import FlowTooLarge, WindowTooLarge
from .geometry import AlignedBox
from .numberfield import TAU, LatticeBasis

DEFAULT_CAP = int(os.environ.get("ALIGNDANZER_MAX_CANDIDATES", 5_000_000))
MAX_FLOW = 10.0

__all__ = [
    "DiagonalFlowVector",
    "apply_flow",
    "norm_product",
    "lll_reduce",
    "enumerate_lattice",
    "shortest_vector_under_flow",
    "covering_radius_estimate",
    "covering_profile",
    "danzer_constant_estimate",
    "flow_grid",
    "hit_box_lattice",
]


@dataclass(frozen=True)
class DiagonalFlowVector:
    """Trace-zero vector ``t``; the flow is ``diag(exp(t_1), ..., exp(t_d))``."""

    t: tuple

    def __post_init__(self):
        t = tuple(float(x) for x in self.t)
        if len(t) < 2:
            raise ValueError("flow needs at least two coordinates")
        if abs(math.fsum(t)) >= TAU:
            raise ValueError(f"flow vector {t} is not trace-zero")
        object.__setattr__(self, "t", t)

    @classmethod
    def zero(cls, d: int) -> "DiagonalFlowVector":
        return cls((0.0,) * d)

    @classmethod
    def from_free(cls, free: Sequence[float]) -> "DiagonalFlowVector":
        """Complete ``d - 1`` coordinates with the one forced by trace zero."""
        free = [float(x) for x in free]
        return cls(tuple(free) + (-math.fsum(free),))

    @classmethod
    def for_box(cls, sides: Sequence[float]) -> "DiagonalFlowVector":
        """Flow mapping a box with these positive side lengths to a cube."""
        logs = [math.log(float(s)) for s in sides]
        mean = math.fsum(logs) / len(logs)
        t = [mean - x for x in logs]
        t[-1] = -math.fsum(t[:-1])
        return cls(tuple(t))

    @property
    def dim(self) -> int:
        return len(self.t)

    @property
    def sup_norm(self) -> float:
        return max(abs(x) for x in self.t)

    def scales(self, dtype=float) -> np.ndarray:
        return np.exp(np.array(self.t, dtype=dtype))

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.scales())


def _as_flow(t, d: int) -> DiagonalFlowVector:
    if t is None:
        return DiagonalFlowVector.zero(d)
    if not isinstance(t, DiagonalFlowVector):
        t = DiagonalFlowVector(tuple(t))
    if t.dim != d:
        raise ValueError(f"flow of dimension {t.dim} applied in dimension {d}")
    return t


def apply_flow(t: DiagonalFlowVector, p):
    """Scale coordinates by ``exp(t_i)``; works on a point or an ``(n, d)`` array."""
    arr = np.asarray(p)
    dtype = np.longdouble if arr.dtype == np.longdouble else float
    t = _as_flow(t, arr.shape[-1])
    return arr * t.scales(dtype)


def norm_product(p):
    """Product of absolute coordinates (row-wise for arrays)."""
    arr = np.asarray(p)
    if arr.dtype == object:
        out = 1
        for x in arr:
            out = out * abs(x)
        return out
    return np.prod(np.abs(arr), axis=-1)


def lll_reduce(basis: np.ndarray, delta: float = 0.75):
    """LLL reduction of the columns of ``basis``.

    Returns ``(reduced, U)`` with ``reduced = basis @ U`` and ``U`` unimodular.
    Plain floating point is adequate at the dimensions used here (d <= 4).
    """
    B = np.array(basis, dtype=float)
    d = B.shape[1]
    U = np.eye(d, dtype=np.int64)

    def gso(B):
        Bs = np.zeros_like(B)
        mu = np.zeros((d, d))
        for i in range(d):
            v = B[:, i].copy()
            for j in range(i):
                mu[i, j] = B[:, i] @ Bs[:, j] / (Bs[:, j] @ Bs[:, j])
                v -= mu[i, j] * Bs[:, j]
            Bs[:, i] = v
        return Bs, mu

    Bs, mu = gso(B)
    k = 1
    guard = 0
    while k < d:
        guard += 1
        if guard > 10_000:
            break
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q:
                B[:, k] -= q * B[:, j]
                U[:, k] -= q * U[:, j]
                Bs, mu = gso(B)
        if Bs[:, k] @ Bs[:, k] >= (delta - mu[k, k - 1] ** 2) * (Bs[:, k - 1] @ Bs[:, k - 1]):
            k += 1
        else:
            B[:, [k - 1, k]] = B[:, [k, k - 1]]
            U[:, [k - 1, k]] = U[:, [k, k - 1]]
            Bs, mu = gso(B)
            k = max(k - 1, 1)
    return B, U


def _is_primitive(coeffs: list) -> bool:
    """Integer vectors extend to a lattice basis iff their maximal minors are coprime."""
    m = np.array(coeffs, dtype=float).T
    k = m.shape[1]
    g = 0
    for rows in itertools.combinations(range(m.shape[0]), k):
        g = math.gcd(g, int(round(np.linalg.det(m[list(rows)]))))
        if g == 1:
            return True
    return False


def _canonical_basis(m: np.ndarray) -> np.ndarray:
    """A basis that depends on the lattice only, not on the input basis.

    Greedy over lattice vectors ordered by length (sign fixed, ties broken by
    coordinates): keep a vector when it still extends the chosen ones to a
    basis.  The search radius starts at the longest LLL vector and doubles if
    the greedy pass gets stuck.
    """
    d = m.shape[0]
    reduced, _ = lll_reduce(m)
    inv = np.linalg.inv(reduced)
    radius = float(np.max(np.linalg.norm(reduced, axis=0))) * (1 + 1e-9)
    while True:
        reach = np.linalg.norm(inv, axis=1) * radius
        grid = _coefficient_grid([(-math.floor(r), math.floor(r)) for r in reach], DEFAULT_CAP)
        vecs = grid.astype(float) @ reduced.T
        norms = np.einsum("ij,ij->i", vecs, vecs)
        keep = (norms > 1e-18) & (norms <= radius * radius)
        cands = []
        for c, v, n in zip(grid[keep], vecs[keep], norms[keep]):
            k = int(np.argmax(np.abs(v) > 1e-9))
            if v[k] > 0:
                cands.append((round(float(n), 9), tuple(np.round(-v, 9)), c, v))
        cands.sort(key=lambda e: e[:2])
        chosen, cols = [], []
        for *_, c, v in cands:
            if _is_primitive(chosen + [c]):
                chosen.append(c)
                cols.append(v)
                if len(cols) == d:
                    return np.array(cols).T
        radius *= 2


def _coefficient_grid(ranges: Sequence[tuple], cap: int) -> np.ndarray:
    sizes = [hi - lo + 1 for lo, hi in ranges]
    total = math.prod(max(s, 0) for s in sizes)
    if total > cap:
        raise WindowTooLarge(f"{total} candidate coefficient vectors exceed the cap {cap}")
    if total == 0:
        return np.zeros((0, len(ranges)), dtype=np.int64)
    axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in ranges]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(ranges))


def _box_bounds(box) -> tuple:
    if isinstance(box, AlignedBox):
        return (np.array([float(x) for x in box.lower]), np.array([float(x) for x in box.upper]))
    lo, hi = box
    return np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)


def enumerate_lattice(
    b: LatticeBasis,
    w,
    tol: float = TAU,
    cap: int | None = None,
    return_coefficients: bool = False,
):
    """All lattice points ``B c`` (``c`` integral) in the closed box ``w``.

    Containment is tested in extended precision with slack ``tol``.  Points are
    returned as an ``(n, d)`` ``longdouble`` array sorted lexicographically.
    """
    cap = DEFAULT_CAP if cap is None else cap
    lo, hi = _box_bounds(w)
    d = b.dim
    if lo.shape != (d,):
        raise ValueError(f"window of dimension {lo.shape[0]} for a rank {d} lattice")
    sides = hi - lo
    t = DiagonalFlowVector.for_box(sides) if np.all(sides > 0) else DiagonalFlowVector.zero(d)
    s = t.scales()
    reduced, U = lll_reduce(s[:, None] * b.matrix)
    inv = np.linalg.inv(reduced)
    center = s * (lo + hi) / 2
    half = s * (sides / 2 + tol)
    mid = inv @ center
    rad = np.abs(inv) @ half
    slack = 1e-9 * (1 + np.abs(mid) + rad)
    ranges = [
        (math.ceil(m - r - e), math.floor(m + r + e)) for m, r, e in zip(mid, rad, slack)
    ]
    grid = _coefficient_grid(ranges, cap)
    coeffs = grid @ U.T
    pts = coeffs.astype(np.longdouble) @ b.matrix_ld.T
    lo_ld = np.array(lo, dtype=np.longdouble) - tol
    hi_ld = np.array(hi, dtype=np.longdouble) + tol
    keep = np.all((pts >= lo_ld) & (pts <= hi_ld), axis=1)
    pts, coeffs = pts[keep], coeffs[keep]
    order = np.lexsort(pts.T[::-1].astype(float)) if len(pts) else np.arange(0)
    pts, coeffs = pts[order], coeffs[order]
    return (pts, coeffs) if return_coefficients else pts


def _flowed(b: LatticeBasis, t: DiagonalFlowVector, dtype=float) -> np.ndarray:
    m = b.matrix_ld if dtype == np.longdouble else b.matrix
    return t.scales(dtype)[:, None] * m


def shortest_vector_under_flow(
    b: LatticeBasis, t=None, cap: int | None = None, max_flow: float = MAX_FLOW
) -> float:
    """Length of the shortest nonzero vector of ``g_t`` applied to the lattice.

    Exhaustive over all coefficient vectors that could beat the shortest
    reduced basis vector: ``|c_i| <= R * ||row_i(M^-1)||`` for any vector of
    length at most ``R``.
    """
    cap = DEFAULT_CAP if cap is None else cap
    t = _as_flow(t, b.dim)
    if t.sup_norm > max_flow:
        raise FlowTooLarge(f"|t|_inf = {t.sup_norm} exceeds {max_flow}")
    reduced, U = lll_reduce(_flowed(b, t))
    radius = float(np.min(np.linalg.norm(reduced, axis=0)))
    inv = np.linalg.inv(reduced)
    reach = np.linalg.norm(inv, axis=1) * radius * (1 + 1e-9)
    ranges = [(-math.floor(r), math.floor(r)) for r in reach]
    try:
        grid = _coefficient_grid(ranges, cap)
    except WindowTooLarge as exc:
        raise FlowTooLarge(str(exc)) from exc
    grid = grid[np.any(grid != 0, axis=1)]
    coeffs = grid @ U.T
    vecs = coeffs.astype(np.longdouble) @ _flowed(b, t, np.longdouble).T
    return float(np.sqrt(np.min(np.sum(vecs * vecs, axis=1))))


def _halton(d: int, n: int, seed: int) -> np.ndarray:
    return qmc.Halton(d, scramble=True, seed=seed).random(n)


def covering_radius_estimate(
    b: LatticeBasis,
    t=None,
    samples: int = 10_000,
    seed: int = 0,
    cap: int = 20_000,
) -> float:
    """Lower estimate of the covering radius of the flowed lattice.

    Takes the largest distance to the lattice over the first ``samples``
    points of a seeded scrambled Halton sequence mapped into a fundamental
    parallelepiped of the reduced basis.  Because later calls only extend the
    same sequence, the estimate never decreases as ``samples`` grows.
    """
    d = b.dim
    t = _as_flow(t, d)
    reduced = _canonical_basis(_flowed(b, t))
    inv = np.linalg.inv(reduced)
    # Babai rounding lands within this distance of any point of the cell
    reach = 0.5 * float(np.sum(np.linalg.norm(reduced, axis=0)))
    rows = np.linalg.norm(inv, axis=1) * reach
    ranges = [(math.floor(-r), math.ceil(1 + r)) for r in rows]
    cand = _coefficient_grid(ranges, cap).astype(float) @ reduced.T
    # drop candidates farther than `reach` from every point of the cell
    cell_center = reduced @ np.full(d, 0.5)
    corners = np.array(list(itertools.product((1, -1), repeat=d)), dtype=float)
    cell_radius = 0.5 * float(np.max(np.linalg.norm(corners @ reduced.T, axis=1)))
    cand = cand[np.linalg.norm(cand - cell_center, axis=1) <= reach + cell_radius + 1e-9]
    u = _halton(d, samples, seed)
    x = u @ reduced.T
    best = 0.0
    batch = max(1, 2_000_000 // max(len(cand), 1))
    for i in range(0, len(x), batch):
        xb = x[i:i + batch]
        diff = xb[:, None, :] - cand[None, :, :]
        dist2 = np.min(np.einsum("ijk,ijk->ij", diff, diff), axis=1)
        best = max(best, float(np.max(dist2)))
    return math.sqrt(best)


def flow_grid(d: int, bound: float = 3.0, step: float = 0.25) -> list:
    """Trace-zero flows on a regular grid with ``|t|_inf <= bound``."""
    n = int(round(bound / step))
    axis = [i * step for i in range(-n, n + 1)]
    out = []
    for free in itertools.product(axis, repeat=d - 1):
        last = -math.fsum(free)
        if abs(last) <= bound + 1e-12:
            out.append(DiagonalFlowVector(tuple(free) + (last,)))
    return out


def covering_profile(
    b: LatticeBasis, grid: Iterable, samples: int = 10_000, seed: int = 0
) -> list:
    return [(t, covering_radius_estimate(b, t, samples, seed)) for t in grid]


def danzer_constant_estimate(
    b: LatticeBasis, grid: Iterable, samples: int = 10_000, seed: int = 0
) -> float:
    """Empirical box-volume threshold ``(2 * max_t mu(t)) ** d``.

    An empty box flowed into a cube has half-edge at most the covering radius
    of the flowed lattice; the maximum over the grid stands in for the bound
    over all flows.
    """
    profile = covering_profile(b, grid, samples, seed)
    mu = max(m for _, m in profile)
    return (2 * mu) ** b.dim


def hit_box_lattice(b: LatticeBasis, r, tol: float = TAU, cap: int | None = None):
    """First lattice point (lexicographic) in the closed box ``r``, or ``None``."""
    pts = enumerate_lattice(b, r, tol=tol, cap=cap)
    return tuple(pts[0]) if len(pts) else None


def expected_count(b: LatticeBasis, w) -> float:
    lo, hi = _box_bounds(w)
    return float(np.prod(hi - lo)) / b.covolume
