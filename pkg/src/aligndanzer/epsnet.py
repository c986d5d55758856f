"""Epsilon-nets for aligned boxes in the unit cube.

A set that meets every aligned box of volume ``s`` gives an eps-net of
``[0, 1]**d`` after restricting to ``[0, L]**d`` with ``L**d >= s / eps`` and
shrinking by ``1/L``.  Its size is about ``density * s / eps``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import vdc
from .errors import EpsTooSmall, WindowTooLarge
from .geometry import DyadicRational, Window
from .lattice import enumerate_lattice
from .numberfield import TAU, LatticeBasis
from .verifier import largest_empty_box

# irrational-looking shift so lattice points avoid the net's box faces
LATTICE_OFFSET = (0.3183098861837907, 0.5772156649015329, 0.1415926535897932, 0.7071067811865476)
MAX_NET_POINTS = 2_000_000

__all__ = ["EpsNet", "build_net", "validate_net", "dyadic_side"]


@dataclass(frozen=True)
class EpsNet:
    eps: float
    points: list = field(repr=False)
    source: str
    side: object
    threshold: float
    claimed_constant: float
    offset: tuple | None = None

    @property
    def dim(self) -> int:
        return len(self.points[0]) if self.points else 2

    def __len__(self) -> int:
        return len(self.points)


def dyadic_side(threshold, eps, d: int = 2, bits: int = 16) -> DyadicRational:
    """Smallest multiple of ``2**-bits`` with ``L**d >= threshold / eps``.

    Exact when both inputs are rational, so dyadic sources keep exact nets.
    """
    target = Fraction(threshold) / Fraction(eps)
    m = math.ceil(float(target) ** (1.0 / d) * (1 << bits))
    while Fraction(m, 1 << bits) ** d < target:
        m += 1
    while m > 1 and Fraction(m - 1, 1 << bits) ** d >= target:
        m -= 1
    return DyadicRational(m, -bits)


def build_net(source, eps, threshold=None, d: int = 2) -> EpsNet:
    """Restrict a hitting set to a cube and rescale it onto ``[0, 1]**d``.

    ``source`` is ``"vdc"`` (threshold 64, planar) or a
    :class:`~aligndanzer.numberfield.LatticeBasis` together with its
    empirical threshold.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if isinstance(source, str) and source == "vdc":
        s = vdc.VOLUME_THRESHOLD if threshold is None else threshold
        L = dyadic_side(s, _as_fraction(eps), 2)
        Lf = L.to_fraction()
        if float(Lf) ** 2 / 2 > MAX_NET_POINTS:
            raise EpsTooSmall(f"eps={eps} needs about {float(Lf) ** 2 / 2:.0f} points")
        pts = [
            (p[0].to_fraction() / Lf, p[1].to_fraction() / Lf)
            for _, p in vdc.enumerate_positive(Window((0, 0), (L, L)))
        ]
        pts = [tuple(_maybe_dyadic(x) for x in p) for p in pts]
        return EpsNet(float(eps), pts, "vdc", L, float(s), len(pts) * float(eps))
    if isinstance(source, LatticeBasis):
        if threshold is None:
            raise ValueError("lattice sources need an explicit threshold")
        dim = source.dim
        L = (float(threshold) / float(eps)) ** (1.0 / dim)
        offset = np.array(LATTICE_OFFSET[:dim]) * source.covolume ** (1.0 / dim)
        try:
            raw = enumerate_lattice(source, (offset, offset + L))
        except WindowTooLarge as exc:
            raise EpsTooSmall(str(exc)) from exc
        scaled = np.clip((raw - offset) / L, 0.0, 1.0)
        pts = [tuple(float(x) for x in row) for row in scaled]
        return EpsNet(
            float(eps), pts, source.label or "lattice", L, float(threshold),
            len(pts) * float(eps), tuple(float(x) for x in offset),
        )
    raise ValueError(f"unknown source {source!r}")


def _as_fraction(x) -> Fraction:
    # 0.1 means 1/10, not the binary float nearest to it
    return Fraction(x).limit_denominator(1 << 30) if isinstance(x, float) else Fraction(x)


def _maybe_dyadic(f: Fraction):
    if f.denominator & (f.denominator - 1) == 0:
        return DyadicRational.from_value(f)
    return f


def validate_net(net: EpsNet, tol: float = TAU) -> dict:
    """Check the largest empty box in the unit cube against ``eps``.

    Exact nets are judged exactly; float nets with slack ``tol``.
    """
    d = net.dim
    unit = ((0,) * d, (1,) * d)
    report = largest_empty_box(net.points, unit)
    vol = report.volume
    exact = net.source == "vdc"
    limit = _as_fraction(net.eps) if exact else net.eps + tol
    valid = vol <= limit
    return {
        "source": net.source,
        "eps": net.eps,
        "side": float(net.side) if not isinstance(net.side, float) else net.side,
        "threshold": net.threshold,
        "size": len(net),
        "constant": net.claimed_constant,
        "offset": list(net.offset) if net.offset is not None else None,
        "max_empty_volume": float(vol),
        "max_empty_box": report.as_dict(),
        "margin": float(net.eps) - float(vol),
        "valid": bool(valid),
    }
