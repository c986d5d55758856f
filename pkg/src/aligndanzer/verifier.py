"""Largest empty aligned box and growth counting.

The emptiness notion is open-interior: a point on the boundary of a box does
not block it.  A maximal empty box has each face on the window or touching a
point, so all candidate face coordinates come from the window bounds and the
point coordinates.

Exact inputs (``int``, ``Fraction``, ``DyadicRational``) are rescaled per axis
to integers, so the search itself runs on plain Python ints and the reported
volume is exact.
"""
from __future__ import annotations

import itertools
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import TooManyPoints
from .geometry import AlignedBox, DyadicRational

MAX_DIM = 4
GRID_CAP = 50_000_000
BRUTE_MAX_POINTS = 200
BRUTE_MAX_DIM = 3

__all__ = [
    "EmptyBoxReport",
    "largest_empty_box",
    "empty_box_bruteforce",
    "growth_count",
]


@dataclass(frozen=True)
class EmptyBoxReport:
    box: AlignedBox
    volume: object
    witness_grid_size: tuple
    point_count: int = 0

    def as_dict(self) -> dict:
        return {
            "lower": [_jsonable(x) for x in self.box.lower],
            "upper": [_jsonable(x) for x in self.box.upper],
            "volume": _jsonable(self.volume),
        }


def _jsonable(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, numbers.Rational):
        f = Fraction(x.numerator, x.denominator)
        return f.numerator if f.denominator == 1 else float(f)
    return float(x)


def _is_exact(x) -> bool:
    return isinstance(x, numbers.Rational) and not isinstance(x, bool)


def _from_scaled(v: int, scale: int):
    if scale & (scale - 1) == 0:
        return DyadicRational(v, -(scale.bit_length() - 1))
    return Fraction(v, scale)


def _window_bounds(w):
    if isinstance(w, AlignedBox):
        return tuple(w.lower), tuple(w.upper)
    lo, hi = w
    return tuple(lo), tuple(hi)


def _prepare(points, w):
    """Restrict to the open window and map to ints (exact) or floats.

    Returns ``(pts, lo, hi, back)`` where ``back(box_lo, box_hi, vol)``
    converts a result to the caller's number type.
    """
    lo, hi = _window_bounds(w)
    d = len(lo)
    pts = [tuple(p) for p in points]
    for p in pts:
        if len(p) != d:
            raise ValueError(f"point {p} does not match window dimension {d}")
    exact = all(_is_exact(x) for x in lo + hi) and all(_is_exact(x) for p in pts for x in p)
    if exact:
        scales = []
        for i in range(d):
            den = {x.denominator for x in (lo[i], hi[i])}
            den.update(p[i].denominator for p in pts)
            scales.append(math.lcm(*den))

        def conv(x, i):
            return x.numerator * (scales[i] // x.denominator)

        lo_s = tuple(conv(x, i) for i, x in enumerate(lo))
        hi_s = tuple(conv(x, i) for i, x in enumerate(hi))
        pts_s = [tuple(conv(x, i) for i, x in enumerate(p)) for p in pts]
        total = math.prod(scales)

        def back(blo, bhi, vol):
            return (
                tuple(_from_scaled(v, s) for v, s in zip(blo, scales)),
                tuple(_from_scaled(v, s) for v, s in zip(bhi, scales)),
                _from_scaled(vol, total),
            )
    else:
        lo_s, hi_s = tuple(float(x) for x in lo), tuple(float(x) for x in hi)
        pts_s = [tuple(float(x) for x in p) for p in pts]

        def back(blo, bhi, vol):
            return blo, bhi, vol

    inside = [p for p in pts_s if all(a < x < b for x, a, b in zip(p, lo_s, hi_s))]
    return inside, lo_s, hi_s, back


class _Best:
    """Running maximum with the tie-break (volume desc, lower asc, upper asc)."""

    __slots__ = ("vol", "lower", "upper")

    def __init__(self):
        self.vol = -1
        self.lower = None
        self.upper = None

    def offer(self, vol, lower, upper):
        if vol > self.vol or (
            vol == self.vol and (lower, upper) < (self.lower, self.upper)
        ):
            self.vol, self.lower, self.upper = vol, lower, upper


def _empty_2d(pts, lo, hi) -> _Best:
    xl, yl = lo
    xh, yh = hi
    best = _Best()
    xs = sorted({p[0] for p in pts})
    edges = [xl] + xs + [xh]
    for a, b in zip(edges, edges[1:]):
        best.offer((b - a) * (yh - yl), (a, yl), (b, yh))
    by_y = sorted(pts, key=lambda p: (p[1], p[0]))

    # boxes whose bottom face rests on a point
    for i, (px, py) in enumerate(by_y):
        left, right = xl, xh
        if (right - left) * (yh - py) < best.vol:
            continue
        blocked = False
        for qx, qy in itertools.islice(by_y, i + 1, None):
            if qy == py or not left < qx < right:
                continue
            best.offer((right - left) * (qy - py), (left, py), (right, qy))
            if qx < px:
                left = qx
            elif qx > px:
                right = qx
            else:
                blocked = True
                break
            if (right - left) * (yh - py) < best.vol:
                blocked = True
                break
        if not blocked:
            best.offer((right - left) * (yh - py), (left, py), (right, yh))

    # boxes whose top face rests on a point
    for i in range(len(by_y) - 1, -1, -1):
        px, py = by_y[i]
        left, right = xl, xh
        if (right - left) * (py - yl) < best.vol:
            continue
        blocked = False
        for j in range(i - 1, -1, -1):
            qx, qy = by_y[j]
            if qy == py or not left < qx < right:
                continue
            best.offer((right - left) * (py - qy), (left, qy), (right, py))
            if qx < px:
                left = qx
            elif qx > px:
                right = qx
            else:
                blocked = True
                break
            if (right - left) * (py - yl) < best.vol:
                blocked = True
                break
        if not blocked:
            best.offer((right - left) * (py - yl), (left, yl), (right, py))
    return best


def _empty_rec(pts, lo, hi) -> _Best:
    d = len(lo)
    if d == 2:
        return _empty_2d(pts, lo, hi)
    best = _Best()
    rest = math.prod(b - a for a, b in zip(lo[1:], hi[1:]))
    cands = sorted({lo[0], hi[0], *(p[0] for p in pts)})
    by_first = sorted(pts)
    for ia, a in enumerate(cands):
        start = 0
        while start < len(by_first) and by_first[start][0] <= a:
            start += 1
        inner = []
        k = start
        for b in cands[ia + 1:]:
            while k < len(by_first) and by_first[k][0] < b:
                inner.append(by_first[k][1:])
                k += 1
            if (b - a) * rest < best.vol:
                continue
            sub = _empty_rec(inner, lo[1:], hi[1:])
            best.offer((b - a) * sub.vol, (a,) + sub.lower, (b,) + sub.upper)
    return best


def largest_empty_box(points, w) -> EmptyBoxReport:
    """Maximum-volume open aligned box inside ``w`` containing no point.

    ``d = 2`` uses an upward/downward sweep from every point plus the
    full-height slabs; ``d = 3, 4`` fix a slab on the first axis and recurse.
    Points outside the open window cannot block any box and are ignored.
    Ties go to the lexicographically smallest lower corner.
    """
    lo, hi = _window_bounds(w)
    d = len(lo)
    if d < 2 or d > MAX_DIM:
        raise ValueError(f"dimension {d} not supported (2 <= d <= {MAX_DIM})")
    pts, lo_s, hi_s, back = _prepare(points, w)
    m = len(pts) + 2
    grid = (m * (m - 1) // 2) ** (d - 2) * m
    if grid > GRID_CAP:
        raise TooManyPoints(f"candidate grid of size {grid} exceeds {GRID_CAP}")
    best = _empty_rec(pts, lo_s, hi_s)
    blo, bhi, vol = back(best.lower, best.upper, best.vol)
    sizes = tuple(len({lo_s[i], hi_s[i], *(p[i] for p in pts)}) for i in range(d))
    return EmptyBoxReport(AlignedBox.open(blo, bhi), vol, sizes, len(pts))


def empty_box_bruteforce(points, w) -> EmptyBoxReport:
    """Exhaustive search over every combination of candidate face coordinates."""
    lo, hi = _window_bounds(w)
    d = len(lo)
    pts = [tuple(p) for p in points]
    if d > BRUTE_MAX_DIM or len(pts) > BRUTE_MAX_POINTS:
        raise TooManyPoints(f"brute force limited to {BRUTE_MAX_POINTS} points, d <= {BRUTE_MAX_DIM}")
    exact = all(_is_exact(x) for x in lo + hi) and all(_is_exact(x) for p in pts for x in p)
    num = (lambda x: Fraction(x.numerator, x.denominator)) if exact else float
    lo = tuple(num(x) for x in lo)
    hi = tuple(num(x) for x in hi)
    pts = [tuple(num(x) for x in p) for p in pts]
    pts = [p for p in pts if all(a < x < b for x, a, b in zip(p, lo, hi))]

    per_axis = []
    for i in range(d):
        cands = sorted({lo[i], hi[i], *(p[i] for p in pts)})
        pairs = []
        for a, b in itertools.combinations(cands, 2):
            mask = 0
            for k, p in enumerate(pts):
                if a < p[i] < b:
                    mask |= 1 << k
            pairs.append((a, b, mask))
        per_axis.append(pairs)

    best = None
    key_best = None
    for combo in itertools.product(*per_axis):
        mask = -1
        for _, _, m in combo:
            mask &= m
        if mask:
            continue
        vol = math.prod(b - a for a, b, _ in combo)
        lower = tuple(a for a, _, _ in combo)
        upper = tuple(b for _, b, _ in combo)
        key = (-vol, lower, upper)
        if key_best is None or key < key_best:
            key_best, best = key, (vol, lower, upper)
    vol, lower, upper = best
    if exact:
        lower = tuple(_maybe_dyadic(x) for x in lower)
        upper = tuple(_maybe_dyadic(x) for x in upper)
        vol = _maybe_dyadic(vol)
    sizes = tuple(len({lo[i], hi[i], *(p[i] for p in pts)}) for i in range(d))
    return EmptyBoxReport(AlignedBox.open(lower, upper), vol, sizes, len(pts))


def _maybe_dyadic(f: Fraction):
    if f.denominator & (f.denominator - 1) == 0:
        return DyadicRational.from_value(f)
    return f


def growth_count(
    source: Callable[[object], object], t_values: Iterable, d: int = 2
) -> list:
    """Count points per size ``T``.

    ``source(T)`` returns either a count or a sized collection of points.
    Returns ``(T, count, count / T**d)`` triples.
    """
    out = []
    for T in t_values:
        got = source(T)
        count = got if isinstance(got, numbers.Integral) else len(got)
        out.append((T, int(count), int(count) / float(T) ** d))
    return out
