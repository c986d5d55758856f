"""Points, aligned boxes and exact dyadic scalars shared by every construction.

Points are plain tuples of scalars.  Scalars may be ``int``,
:class:`fractions.Fraction`, :class:`DyadicRational` (exact) or floats
(including numpy extended precision).  All box predicates are written so that
exact inputs give exact answers.
"""
from __future__ import annotations

import itertools
import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Tuple

Point = Tuple

__all__ = [
    "DyadicRational",
    "Point",
    "AlignedBox",
    "Window",
    "as_point",
    "box_volume",
    "contains",
    "quadrant_pieces",
    "reflect",
    "reflect_box",
    "to_exact",
]


class DyadicRational:
    """Exact number ``mantissa * 2**exponent``.

    The canonical form has an odd mantissa, or mantissa 0 with exponent 0.
    Addition, subtraction, negation and multiplication among dyadic values
    never round.  Mixed arithmetic with ``int`` stays dyadic; mixed arithmetic
    with other rationals falls back to :class:`~fractions.Fraction`.
    """

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        mantissa = int(mantissa)
        exponent = int(exponent)
        if mantissa == 0:
            exponent = 0
        else:
            tz = (mantissa & -mantissa).bit_length() - 1
            if tz:
                mantissa >>= tz
                exponent += tz
        self.mantissa = mantissa
        self.exponent = exponent

    @classmethod
    def from_value(cls, value) -> "DyadicRational":
        if isinstance(value, DyadicRational):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a dyadic rational")
        if isinstance(value, numbers.Integral):
            return cls(int(value), 0)
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"non-finite value {value!r}")
            value = Fraction(value)
        if isinstance(value, numbers.Rational):
            den = value.denominator
            if den & (den - 1):
                raise ValueError(f"{value} has a non power-of-two denominator")
            return cls(value.numerator, -(den.bit_length() - 1))
        raise TypeError(f"cannot convert {type(value).__name__} to DyadicRational")

    # numbers.Rational protocol, so Fraction(d) and friends work
    @property
    def numerator(self) -> int:
        return self.mantissa << self.exponent if self.exponent >= 0 else self.mantissa

    @property
    def denominator(self) -> int:
        return 1 if self.exponent >= 0 else 1 << -self.exponent

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return math.ldexp(self.mantissa, self.exponent)

    def __int__(self) -> int:
        if self.exponent >= 0:
            return self.mantissa << self.exponent
        return int(self.to_fraction())

    def __bool__(self) -> bool:
        return self.mantissa != 0

    def __repr__(self) -> str:
        return f"DyadicRational({self.mantissa}, {self.exponent})"

    def __str__(self) -> str:
        return str(self.to_fraction())

    def __hash__(self) -> int:
        if self.exponent >= 0:
            return hash(self.mantissa << self.exponent)
        return hash(self.to_fraction())

    def _align(self, other: "DyadicRational"):
        e = min(self.exponent, other.exponent)
        return self.mantissa << (self.exponent - e), other.mantissa << (other.exponent - e), e

    @staticmethod
    def _coerce(other):
        if isinstance(other, DyadicRational):
            return other
        if isinstance(other, numbers.Integral) and not isinstance(other, bool):
            return DyadicRational(int(other), 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, numbers.Rational):
                return self.to_fraction() + other
            if isinstance(other, numbers.Real):
                return float(self) + other
            return NotImplemented
        a, b, e = self._align(o)
        return DyadicRational(a + b, e)

    __radd__ = __add__

    def __neg__(self):
        return DyadicRational(-self.mantissa, self.exponent)

    def __pos__(self):
        return self

    def __abs__(self):
        return DyadicRational(abs(self.mantissa), self.exponent)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, numbers.Rational):
                return self.to_fraction() - other
            if isinstance(other, numbers.Real):
                return float(self) - other
            return NotImplemented
        a, b, e = self._align(o)
        return DyadicRational(a - b, e)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, numbers.Rational):
                return self.to_fraction() * other
            if isinstance(other, numbers.Real):
                return float(self) * other
            return NotImplemented
        return DyadicRational(self.mantissa * o.mantissa, self.exponent + o.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is not None and o.mantissa in (1, -1):
            return DyadicRational(self.mantissa * o.mantissa, self.exponent - o.exponent)
        if isinstance(other, numbers.Rational):
            return self.to_fraction() / other
        if isinstance(other, numbers.Real):
            return float(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, numbers.Rational):
            return Fraction(other) / self.to_fraction()
        if isinstance(other, numbers.Real):
            return other / float(self)
        return NotImplemented

    def __pow__(self, n):
        if isinstance(n, numbers.Integral) and n >= 0:
            return DyadicRational(self.mantissa ** int(n), self.exponent * int(n))
        return NotImplemented

    def __floor__(self) -> int:
        if self.exponent >= 0:
            return self.mantissa << self.exponent
        return self.mantissa >> -self.exponent

    def __ceil__(self) -> int:
        return -((-self).__floor__())

    def _cmp(self, other):
        o = self._coerce(other)
        if o is not None:
            a, b, _ = self._align(o)
            return (a > b) - (a < b)
        if isinstance(other, numbers.Rational):
            f = self.to_fraction()
            return (f > other) - (f < other)
        if isinstance(other, numbers.Real):
            # exact comparison against a float via its exact rational value
            if math.isnan(other):
                return None
            if math.isinf(other):
                return -1 if other > 0 else 1
            f, g = self.to_fraction(), Fraction(other)
            return (f > g) - (f < g)
        return NotImplemented

    def __eq__(self, other):
        c = self._cmp(other)
        if c is NotImplemented:
            return NotImplemented
        return c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else (c is not None and c < 0)

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else (c is not None and c <= 0)

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else (c is not None and c > 0)

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else (c is not None and c >= 0)


numbers.Rational.register(DyadicRational)


def to_exact(x):
    """Return ``x`` as an exact rational (int/Fraction/DyadicRational kept)."""
    if isinstance(x, (int, Fraction, DyadicRational)):
        return x
    if isinstance(x, numbers.Rational):
        return Fraction(x)
    return Fraction(float(x))


def _is_finite(x) -> bool:
    if isinstance(x, numbers.Rational):
        return True
    return math.isfinite(float(x))


def as_point(coords: Sequence) -> tuple:
    p = tuple(coords)
    if len(p) < 1:
        raise ValueError("point needs at least one coordinate")
    if not all(_is_finite(c) for c in p):
        raise ValueError(f"non-finite coordinate in {p!r}")
    return p


@dataclass(frozen=True)
class AlignedBox:
    """Axis-parallel box with per-face openness.

    ``open_lower[i]`` / ``open_upper[i]`` mark whether the face
    ``x_i = lower[i]`` / ``x_i = upper[i]`` is excluded.  Boxes are closed
    unless stated otherwise.
    """

    lower: tuple
    upper: tuple
    open_lower: tuple = field(default=None)
    open_upper: tuple = field(default=None)

    def __post_init__(self):
        lo, hi = as_point(self.lower), as_point(self.upper)
        if len(lo) != len(hi):
            raise ValueError("lower and upper corners differ in dimension")
        for a, b in zip(lo, hi):
            if a > b:
                raise ValueError(f"lower corner {lo} exceeds upper corner {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        d = len(lo)
        for name in ("open_lower", "open_upper"):
            flags = getattr(self, name)
            flags = (False,) * d if flags is None else tuple(bool(f) for f in flags)
            if len(flags) != d:
                raise ValueError(f"{name} must have {d} flags")
            object.__setattr__(self, name, flags)

    @classmethod
    def closed(cls, lower, upper) -> "AlignedBox":
        return cls(tuple(lower), tuple(upper))

    @classmethod
    def open(cls, lower, upper) -> "AlignedBox":
        d = len(lower)
        return cls(tuple(lower), tuple(upper), (True,) * d, (True,) * d)

    @classmethod
    def from_flat(cls, corners: Sequence) -> "AlignedBox":
        """Build a closed box from ``lo_1 .. lo_d hi_1 .. hi_d``."""
        if len(corners) % 2:
            raise ValueError("need an even number of corner coordinates")
        d = len(corners) // 2
        return cls.closed(corners[:d], corners[d:])

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def sides(self) -> tuple:
        return tuple(b - a for a, b in zip(self.lower, self.upper))

    @property
    def volume(self):
        return box_volume(self)

    def __contains__(self, p) -> bool:
        return contains(self, p)


@dataclass(frozen=True)
class Window(AlignedBox):
    """Closed, bounded region with positive volume used for enumeration."""

    def __post_init__(self):
        super().__post_init__()
        if any(self.open_lower) or any(self.open_upper):
            raise ValueError("windows are closed boxes")
        if not all(b > a for a, b in zip(self.lower, self.upper)):
            raise ValueError("window must have positive volume")


def box_volume(b: AlignedBox):
    vol = 1
    for s in b.sides:
        vol = s * vol
    return vol


def contains(b: AlignedBox, p) -> bool:
    if len(p) != b.dim:
        raise ValueError(f"point of dimension {len(p)} tested against box of dimension {b.dim}")
    for x, lo, hi, olo, ohi in zip(p, b.lower, b.upper, b.open_lower, b.open_upper):
        if x < lo or x > hi:
            return False
        if (olo and x == lo) or (ohi and x == hi):
            return False
    return True


def reflect(p, signs) -> tuple:
    if len(p) != len(signs):
        raise ValueError("sign vector and point differ in dimension")
    return tuple(x if s > 0 else -x for x, s in zip(p, signs))


def reflect_box(b: AlignedBox, signs) -> AlignedBox:
    lo, hi, olo, ohi = [], [], [], []
    for a, c, oa, oc, s in zip(b.lower, b.upper, b.open_lower, b.open_upper, signs):
        if s > 0:
            lo.append(a), hi.append(c), olo.append(oa), ohi.append(oc)
        else:
            lo.append(-c), hi.append(-a), olo.append(oc), ohi.append(oa)
    return AlignedBox(tuple(lo), tuple(hi), tuple(olo), tuple(ohi))


def quadrant_pieces(b: AlignedBox) -> list:
    """Split ``b`` along the coordinate hyperplanes.

    Returns ``(signs, piece)`` pairs in the sign order ``(+,+), (+,-), (-,+),
    (-,-)`` (generalised lexicographically to any dimension).  Cut faces are
    closed.  Pieces that would be flat on an axis where ``b`` is not flat are
    dropped, so piece volumes sum to the volume of ``b``.
    """
    out = []
    for signs in itertools.product((1, -1), repeat=b.dim):
        lo, hi, olo, ohi = [], [], [], []
        ok = True
        for a, c, oa, oc, s in zip(b.lower, b.upper, b.open_lower, b.open_upper, signs):
            if s > 0:
                na, nc = max(a, 0), c
                noa = oa if na == a else False
                noc = oc
            else:
                na, nc = a, min(c, 0)
                noa = oa
                noc = oc if nc == c else False
            if c > a:
                if not nc > na:
                    ok = False
                    break
            else:
                # flat axis: keep it in exactly one orthant
                if (s > 0) != (a >= 0):
                    ok = False
                    break
            lo.append(na), hi.append(nc), olo.append(noa), ohi.append(noc)
        if ok:
            out.append((signs, AlignedBox(tuple(lo), tuple(hi), tuple(olo), tuple(ohi))))
    return out
