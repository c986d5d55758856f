"""Totally real fields given by a monic integer polynomial, and their lattices.

Roots are isolated exactly with Sturm sequences over the rationals and then
polished with mpmath well past double precision.  The lattice of the order
``Z[alpha]`` is the image of the power basis under the real embeddings,
i.e. the Vandermonde matrix of the roots.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .errors import DegenerateRoots, NotTotallyReal

TAU = 1e-9
WORKING_DPS = 40

PRESETS = {
    2: (1, 0, -2),
    3: (1, 1, -2, -1),
    4: (1, 0, -4, 0, 2),
}


# polynomials are coefficient lists, highest degree first


def _trim(p):
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _derivative(p):
    n = len(p) - 1
    return _trim([c * (n - i) for i, c in enumerate(p[:-1])]) or [Fraction(0)]


def _rem(a, b):
    a = list(a)
    b = _trim(list(b))
    while len(a) >= len(b) and any(a):
        q = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= q * b[i]
        a.pop(0)
    a = _trim(a) if a else [Fraction(0)]
    return a


def _is_zero(p):
    return all(c == 0 for c in p)


def poly_gcd(a, b):
    a, b = [Fraction(c) for c in a], [Fraction(c) for c in b]
    while not _is_zero(b):
        a, b = b, _rem(a, b)
    return _trim(a)


def horner(p, x):
    acc = 0 * x
    for c in p:
        acc = acc * x + c
    return acc


def sturm_sequence(p) -> list:
    p = [Fraction(c) for c in p]
    seq = [p, _derivative(p)]
    while True:
        r = _rem(seq[-2], seq[-1])
        if _is_zero(r):
            return seq
        seq.append([-c for c in r])


def _sign_changes(seq, x) -> int:
    signs = [v for v in (horner(p, x) for p in seq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_real_roots(p, lo=None, hi=None) -> int:
    """Distinct real roots in ``(lo, hi]`` (whole line by default)."""
    seq = sturm_sequence(p)
    if lo is None or hi is None:
        bound = cauchy_bound(p)
        lo, hi = -bound, bound
    return _sign_changes(seq, Fraction(lo)) - _sign_changes(seq, Fraction(hi))


def cauchy_bound(p) -> Fraction:
    lead = Fraction(p[0])
    return 1 + max(abs(Fraction(c) / lead) for c in p[1:]) if len(p) > 1 else Fraction(1)


def isolate_real_roots(p) -> list:
    """Disjoint rational intervals ``(a, b]``, one per distinct real root."""
    seq = sturm_sequence(p)
    bound = cauchy_bound(p)
    todo = [(-bound, bound)]
    out = []
    while todo:
        a, b = todo.pop()
        n = _sign_changes(seq, a) - _sign_changes(seq, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        while horner(seq[0], m) == 0:
            # keep split points off the roots
            m += (b - a) / 7
        todo.extend([(a, m), (m, b)])
    return sorted(out)


def _refine(p, a: Fraction, b: Fraction, dps: int) -> mpmath.mpf:
    """Bisection/Newton hybrid on a bracket known to hold one simple root."""
    # exact bisection first, so the bracket has a sign change at its ends
    fa = horner(p, a)
    if fa == 0:
        a -= (b - a) / 1024
        fa = horner(p, a)
    fb = horner(p, b)
    if fb == 0:
        return mpmath.mpf(b.numerator) / b.denominator
    for _ in range(60):
        m = (a + b) / 2
        fm = horner(p, m)
        if fm == 0:
            return mpmath.mpf(m.numerator) / m.denominator
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    dp = _derivative([Fraction(c) for c in p])
    with mpmath.workdps(dps + 10):
        lo = mpmath.mpf(a.numerator) / a.denominator
        hi = mpmath.mpf(b.numerator) / b.denominator
        pc = [mpmath.mpf(int(c)) for c in p]
        dc = [mpmath.mpf(c.numerator) / c.denominator for c in dp]
        slo = mpmath.sign(mpmath.polyval(pc, lo))
        x = (lo + hi) / 2
        tol = mpmath.mpf(10) ** (-(dps + 5))
        for _ in range(400):
            fx = mpmath.polyval(pc, x)
            if fx == 0:
                break
            if mpmath.sign(fx) == slo:
                lo = x
            else:
                hi = x
            dfx = mpmath.polyval(dc, x)
            nx = x - fx / dfx if dfx != 0 else (lo + hi) / 2
            if not lo < nx < hi:
                nx = (lo + hi) / 2
            if abs(nx - x) < tol or hi - lo < tol:
                x = nx
                break
            x = nx
        return +x


@dataclass(frozen=True)
class TotallyRealField:
    """Field defined by a monic integer polynomial with only real roots."""

    min_poly: tuple
    roots: tuple = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def roots_float(self) -> np.ndarray:
        return np.array([float(r) for r in self.roots])

    @property
    def roots_ld(self) -> np.ndarray:
        return np.array([np.longdouble(mpmath.nstr(r, 30)) for r in self.roots])


def parse_poly(text: str) -> tuple:
    """``"1,0,-2"`` -> ``(1, 0, -2)`` (constant term last)."""
    try:
        coeffs = tuple(int(c) for c in text.replace(" ", "").split(",") if c != "")
    except ValueError as exc:
        raise ValueError(f"bad polynomial {text!r}: integer coefficients expected") from exc
    return coeffs


def build_field(poly: Sequence[int], check_irreducible: bool = True) -> TotallyRealField:
    """Compute all roots of ``poly`` and check the field is totally real.

    Raises
    ------
    NotTotallyReal
        If the polynomial has non-real roots.
    DegenerateRoots
        If two roots coincide or lie within ``TAU`` of each other.
    """
    coeffs = tuple(int(c) for c in poly)
    if len(coeffs) < 3:
        raise ValueError("degree must be at least 2")
    if coeffs[0] != 1:
        raise ValueError("polynomial must be monic")
    d = len(coeffs) - 1
    g = poly_gcd(coeffs, _derivative([Fraction(c) for c in coeffs]))
    if len(g) > 1:
        raise DegenerateRoots(f"polynomial {coeffs} has a repeated root")
    intervals = isolate_real_roots(coeffs)
    if len(intervals) < d:
        raise NotTotallyReal(f"polynomial {coeffs} has {d - len(intervals)} non-real roots")
    if check_irreducible:
        _warn_if_reducible(coeffs)
    roots = sorted((_refine(coeffs, a, b, WORKING_DPS) for a, b in intervals), reverse=True)
    for r1, r2 in zip(roots, roots[1:]):
        if abs(r1 - r2) < TAU:
            raise DegenerateRoots(f"roots {r1} and {r2} closer than {TAU}")
    with mpmath.workdps(WORKING_DPS):
        for r in roots:
            if abs(mpmath.polyval([mpmath.mpf(c) for c in coeffs], r)) >= TAU:
                raise DegenerateRoots(f"root refinement failed near {r}")
    return TotallyRealField(coeffs, tuple(roots))


def _warn_if_reducible(coeffs) -> None:
    import sympy

    x = sympy.Symbol("x")
    if not sympy.Poly(list(coeffs), x, domain="ZZ").is_irreducible:
        warnings.warn(
            f"polynomial {coeffs} is reducible over Q; its lattice need not be admissible",
            stacklevel=3,
        )


@dataclass(frozen=True)
class LatticeBasis:
    """Columns span the lattice.  ``matrix_ld`` keeps extended precision."""

    matrix: np.ndarray = field(repr=False)
    matrix_ld: np.ndarray = field(repr=False)
    covolume: float
    scale: float = 1.0
    label: str = ""

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_matrix(cls, matrix, label: str = "") -> "LatticeBasis":
        ld = np.array(matrix, dtype=np.longdouble)
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("basis must be square")
        cov = abs(float(np.linalg.det(m)))
        if cov <= 0:
            raise ValueError("basis is singular")
        return cls(m, ld, cov, 1.0, label)


def identity_basis(d: int) -> LatticeBasis:
    return LatticeBasis.from_matrix(np.eye(d), label=f"Z^{d}")


def build_basis(f: TotallyRealField, normalize: bool = False) -> LatticeBasis:
    """Vandermonde basis ``matrix[i][j] = roots[i]**j`` of ``Z[alpha]``.

    With ``normalize`` the basis is scaled to covolume one; ``covolume``
    always records the unscaled value.
    """
    d = f.degree
    with mpmath.workdps(WORKING_DPS):
        V = mpmath.matrix(d, d)
        for i, r in enumerate(f.roots):
            for j in range(d):
                V[i, j] = r ** j
        cov = abs(mpmath.det(V))
        scale = cov ** (-mpmath.mpf(1) / d) if normalize else mpmath.mpf(1)
        ld = np.array(
            [[np.longdouble(mpmath.nstr(V[i, j] * scale, 30)) for j in range(d)] for i in range(d)]
        )
        fl = np.array([[float(V[i, j] * scale) for j in range(d)] for i in range(d)])
        label = "Z[alpha] for " + ",".join(map(str, f.min_poly))
        return LatticeBasis(fl, ld, float(cov), float(scale), label)
