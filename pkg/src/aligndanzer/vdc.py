"""The planar bit-reversal point set.

A finitely supported 0/1 sequence ``(a_n)`` indexed by the integers is sent to
``(sum a_n 2**n, sum a_n 2**-n)``; together with the four sign reflections
these points form a set ``D`` that meets every closed aligned box of area at
least 64, while only about ``2 T**2`` of its points fall in ``[-T, T]**2``.
All coordinates are exact :class:`~aligndanzer.geometry.DyadicRational`
values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import OutOfOrthant, VolumeTooSmall
from .geometry import (
    AlignedBox,
    DyadicRational,
    Window,
    box_volume,
    quadrant_pieces,
    reflect,
    reflect_box,
    to_exact,
)

VOLUME_THRESHOLD = 64
POSITIVE_THRESHOLD = 16

__all__ = [
    "VOLUME_THRESHOLD",
    "POSITIVE_THRESHOLD",
    "FiniteBitSequence",
    "encode",
    "decode",
    "in_set",
    "split_index",
    "hit_box_positive",
    "hit_box",
    "enumerate_positive",
    "enumerate_symmetric",
    "count_positive",
    "growth_map_g",
    "asymmetry_gap",
]


@dataclass(frozen=True)
class FiniteBitSequence:
    """Bi-infinite 0/1 sequence stored by the set of indices holding a 1."""

    support: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(int(n) for n in self.support))

    @classmethod
    def from_indices(cls, *indices: int) -> "FiniteBitSequence":
        return cls(frozenset(indices))

    def __getitem__(self, n: int) -> int:
        return 1 if n in self.support else 0

    def __len__(self) -> int:
        return len(self.support)

    def __iter__(self):
        return iter(sorted(self.support))

    def reversed(self) -> "FiniteBitSequence":
        return FiniteBitSequence(frozenset(-n for n in self.support))


def _power_sum(indices) -> DyadicRational:
    indices = list(indices)
    if not indices:
        return DyadicRational(0)
    lo = min(indices)
    return DyadicRational(sum(1 << (n - lo) for n in indices), lo)


def encode(seq: FiniteBitSequence) -> tuple:
    """Map a sequence to its point ``(sum a_n 2**n, sum a_n 2**-n)``."""
    return _power_sum(seq.support), _power_sum(-n for n in seq.support)


def _binary_support(x: DyadicRational) -> frozenset:
    m, e = x.mantissa, x.exponent
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i + e)
        m >>= 1
        i += 1
    return frozenset(out)


def decode(p) -> FiniteBitSequence | None:
    """Recover the sequence behind a point of ``D`` (signs ignored).

    Returns ``None`` when the point is not in ``D``.
    """
    try:
        x = abs(DyadicRational.from_value(to_exact(p[0])))
        y = abs(DyadicRational.from_value(to_exact(p[1])))
    except ValueError:
        return None
    seq = FiniteBitSequence(_binary_support(x))
    return seq if encode(seq) == (x, y) else None


def in_set(p) -> bool:
    return len(p) == 2 and decode(p) is not None


def split_index(width) -> int:
    """Return ``k`` with ``2**k <= width/2 < 2**(k+1)``."""
    half = Fraction(to_exact(width)) / 2
    if half <= 0:
        raise ValueError("width must be positive")
    k = half.numerator.bit_length() - half.denominator.bit_length()
    while Fraction(2) ** k > half:
        k -= 1
    while Fraction(2) ** (k + 1) <= half:
        k += 1
    return k


def _bits_of(j: int, shift: int, step: int) -> list:
    # indices shift + step*i for each set bit i of j
    out = []
    i = 0
    while j:
        if j & 1:
            out.append(shift + step * i)
        j >>= 1
        i += 1
    return out


def hit_box_positive(r: AlignedBox) -> FiniteBitSequence:
    """Digit selection for a box in the closed positive quadrant.

    The box is shrunk to the sub-box with the same lower-left corner, the same
    width ``t`` and height ``16/t``.  With ``2**k <= t/2 < 2**(k+1)`` the bits
    ``n >= k`` spell the least multiple of ``2**k`` above ``x`` and the bits
    ``n < k`` spell the least multiple of ``2**(1-k)`` above ``y``.  The
    low bits add less than ``2**k`` to the first coordinate and the high bits
    less than ``2**(1-k)`` to the second, so the point lands strictly inside.
    """
    if r.dim != 2:
        raise ValueError("bit-reversal boxes are planar")
    x, y = (Fraction(to_exact(c)) for c in r.lower)
    if x < 0 or y < 0:
        raise OutOfOrthant(f"box {r.lower}..{r.upper} leaves the positive quadrant")
    vol = Fraction(to_exact(box_volume(r)))
    if vol < POSITIVE_THRESHOLD:
        raise VolumeTooSmall(f"box volume {vol} < {POSITIVE_THRESHOLD}")
    t = Fraction(to_exact(r.upper[0])) - x
    k = split_index(t)
    step = Fraction(2) ** k
    j_high = math.floor(x / step) + 1
    low_step = Fraction(2) ** (1 - k)
    j_low = math.floor(y / low_step) + 1
    support = _bits_of(j_high, k, 1) + _bits_of(j_low, k - 1, -1)
    return FiniteBitSequence(frozenset(support))


def hit_box(r: AlignedBox) -> tuple:
    """Return a point of ``D`` inside any planar box of volume at least 64."""
    if r.dim != 2:
        raise ValueError("bit-reversal boxes are planar")
    vol = box_volume(r)
    if vol < VOLUME_THRESHOLD:
        raise VolumeTooSmall(f"box volume {vol} < {VOLUME_THRESHOLD}")
    signs, piece = max(quadrant_pieces(r), key=lambda sp: box_volume(sp[1]))
    seq = hit_box_positive(reflect_box(piece, signs))
    return reflect(encode(seq), signs)


def _scan_positive(w: AlignedBox) -> Iterator[tuple]:
    """Depth-first search over bit positions, yielding scaled integer points.

    Yields ``(mask, X, Y, K)`` with ``x = X / 2**K``, ``y = Y / 2**K`` and
    bit ``n`` of the sequence stored at mask position ``n + K``.
    """
    if w.dim != 2:
        raise ValueError("bit-reversal windows are planar")
    xlo, ylo = (Fraction(to_exact(c)) for c in w.lower)
    xhi, yhi = (Fraction(to_exact(c)) for c in w.upper)
    if xlo < 0 or ylo < 0:
        raise OutOfOrthant("window leaves the positive quadrant")
    top = max(xhi, yhi)
    K = max(0, math.ceil(math.log2(top))) if top > 0 else 0
    while Fraction(2) ** K < top:
        K += 1
    scale = 1 << K
    Xhi, Yhi = math.floor(xhi * scale), math.floor(yhi * scale)
    Xlo, Ylo = math.ceil(xlo * scale), math.ceil(ylo * scale)
    two_k1 = 1 << (2 * K + 1)

    stack = [(K, 0, 0, 0)]
    while stack:
        n, X, Y, mask = stack.pop()
        if n < -K:
            if X >= Xlo and Y >= Ylo:
                yield mask, X, Y, K
            continue
        # largest sums still reachable using bits n, n-1, ..., -K
        if X + (1 << (n + K + 1)) - 1 < Xlo or Y + two_k1 - (1 << (K - n)) < Ylo:
            continue
        X1, Y1 = X + (1 << (n + K)), Y + (1 << (K - n))
        if X1 <= Xhi and Y1 <= Yhi:
            stack.append((n - 1, X1, Y1, mask | (1 << (n + K))))
        stack.append((n - 1, X, Y, mask))


def _mask_support(mask: int, K: int) -> frozenset:
    return frozenset(i - K for i in range(mask.bit_length()) if mask >> i & 1)


def enumerate_positive(w: AlignedBox) -> list:
    """All ``(sequence, point)`` pairs of the positive-quadrant set in ``w``.

    ``w`` is treated as a closed box.  Results are sorted by ``(x, y)``.
    """
    rows = sorted(_scan_positive(w), key=lambda r: (r[1], r[2]))
    return [
        (
            FiniteBitSequence(_mask_support(mask, K)),
            (DyadicRational(X, -K), DyadicRational(Y, -K)),
        )
        for mask, X, Y, K in rows
    ]


def count_positive(w: AlignedBox) -> int:
    return sum(1 for _ in _scan_positive(w))


def enumerate_symmetric(w: AlignedBox) -> list:
    """Points of the full signed set ``D`` in a closed planar window."""
    seen = {}
    for signs, piece in quadrant_pieces(AlignedBox.closed(w.lower, w.upper)):
        for _, p in enumerate_positive(reflect_box(piece, signs)):
            q = reflect(p, signs)
            seen.setdefault(q, q)
    return sorted(seen)


def growth_map_g(seq: FiniteBitSequence) -> tuple:
    """Split the two sums at ``n = 0``: ``(sum_{n>=0} a_n 2**n, sum_{n<0} a_n 2**-n)``.

    The image lies in ``N x 2N`` and the map is injective.
    """
    hi = [n for n in seq.support if n >= 0]
    lo = [-n for n in seq.support if n < 0]
    return _power_sum(hi), _power_sum(lo)


def asymmetry_gap(p) -> DyadicRational:
    return abs(p[0] - p[1])
