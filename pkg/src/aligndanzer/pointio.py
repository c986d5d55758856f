"""Point files and JSON reports.

Point CSV: header ``x1,...,xd`` and one row per point, 17 significant digits.
Exact sidecar (``<name>.exact.csv``): header ``m1,e1,...,md,ed`` with the
integer mantissa/exponent pair of every dyadic coordinate.
"""
from __future__ import annotations

import csv
import json
import numbers
from fractions import Fraction
from pathlib import Path

from .geometry import DyadicRational

SCHEMA_VERSION = 1


def fmt17(x) -> str:
    return format(float(x), ".17g")


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".exact" + path.suffix)


def write_points_csv(path, points, exact: bool = False, dim: int | None = None) -> None:
    points = list(points)
    d = dim if dim is not None else (len(points[0]) if points else 2)
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(d)])
        for p in points:
            w.writerow([fmt17(x) for x in p])
    if exact:
        with sidecar_path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([f"{k}{i + 1}" for i in range(d) for k in ("m", "e")])
            for p in points:
                row = []
                for x in p:
                    q = DyadicRational.from_value(x)
                    row += [q.mantissa, q.exponent]
                w.writerow(row)


def read_points(path, prefer_exact: bool = True) -> tuple:
    """Return ``(points, exact)``; uses the sidecar when present."""
    path = Path(path)
    side = sidecar_path(path)
    if prefer_exact and side.exists():
        with side.open(newline="") as fh:
            rows = list(csv.reader(fh))
        pts = [
            tuple(DyadicRational(int(r[i]), int(r[i + 1])) for i in range(0, len(r), 2))
            for r in rows[1:] if r
        ]
        return pts, True
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not all(h.startswith("x") for h in rows[0]):
        raise ValueError(f"{path}: expected a header x1,...,xd")
    d = len(rows[0])
    pts = []
    for lineno, r in enumerate(rows[1:], start=2):
        if not r:
            continue
        if len(r) != d:
            raise ValueError(f"{path}:{lineno}: expected {d} columns, got {len(r)}")
        try:
            pts.append(tuple(float(x) for x in r))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return pts, False


def jsonable(x):
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, numbers.Rational):
        f = Fraction(x.numerator, x.denominator)
        return f.numerator if f.denominator == 1 else float(f)
    return float(x)


def exact_str(x) -> str:
    if isinstance(x, numbers.Rational):
        return str(Fraction(x.numerator, x.denominator))
    return fmt17(x)


def dumps(obj) -> str:
    payload = {"schema_version": SCHEMA_VERSION, **obj}
    return json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n"


def write_json(obj, path=None, stream=None) -> str:
    text = dumps(obj)
    if path is not None:
        Path(path).write_text(text)
    elif stream is not None:
        stream.write(text)
    return text
