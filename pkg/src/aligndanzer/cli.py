"""Command line front end.

Exit status: 0 success, 1 usage or input error, 2 a construction's hitting
guarantee was contradicted by the computation.
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

import numpy as np

from . import vdc
from .epsnet import build_net, validate_net
from .errors import AlignDanzerError
from .geometry import AlignedBox, Window, box_volume, contains
from .lattice import (
    DiagonalFlowVector,
    danzer_constant_estimate,
    enumerate_lattice,
    flow_grid,
    hit_box_lattice,
    norm_product,
    shortest_vector_under_flow,
)
from .numberfield import PRESETS, TAU, build_basis, build_field, parse_poly
from .pointio import exact_str, read_points, write_json, write_points_csv
from .svg import emit_svg
from .verifier import growth_count, largest_empty_box

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED = 0, 1, 2
PROBE_TOL = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _number(text: str):
    """Parse a coordinate exactly: ``3``, ``-1/4``, ``0.125``."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _box(values, what="box") -> AlignedBox:
    if len(values) % 2 or len(values) < 4:
        raise UsageError(f"--{what} needs lo_1 .. lo_d hi_1 .. hi_d (got {len(values)} numbers)")
    try:
        return AlignedBox.from_flat(values)
    except ValueError as exc:
        raise UsageError(f"--{what}: {exc}") from exc


def _window(values) -> Window:
    b = _box(values, "window")
    try:
        return Window(b.lower, b.upper)
    except ValueError as exc:
        raise UsageError(f"--window: {exc}") from exc


def _basis(args):
    poly = parse_poly(args.poly) if args.poly else PRESETS[args.preset]
    field = build_field(poly)
    return field, build_basis(field, normalize=getattr(args, "normalize", False))


def _add_lattice_args(p):
    p.add_argument("--poly", help="integer coefficients, constant term last, e.g. 1,0,-2")
    p.add_argument("--preset", type=int, choices=sorted(PRESETS), default=2)


def _add_flow_args(p):
    p.add_argument("--flow-bound", type=float, default=3.0)
    p.add_argument("--flow-step", type=float, default=0.25)
    p.add_argument("--samples", type=int, default=10_000)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aligndanzer", description=__doc__)
    parser.add_argument("--threads", type=int, default=1, help="worker count (results do not depend on it)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--timing", action="store_true", help="record runtime_ms in reports")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("gen-vdc", help="enumerate the bit-reversal set in a window")
    p.add_argument("--window", type=_number, nargs="+", default=[0, 0, 64, 64])
    p.add_argument("--out", required=True)
    p.add_argument("--exact", action="store_true", help="also write the mantissa/exponent sidecar")
    p.add_argument("--svg")
    p.add_argument("--svg-scale", type=float, default=8.0)
    p.add_argument("--report")

    p = sub.add_parser("gen-lattice", help="enumerate a number-field lattice in a window")
    _add_lattice_args(p)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--window", type=_number, nargs="+", default=[-10, -10, 10, 10])
    p.add_argument("--out", required=True)
    p.add_argument("--svg")
    p.add_argument("--svg-scale", type=float, default=8.0)
    p.add_argument("--report")

    for name in ("hit", "hit-vdc"):
        p = sub.add_parser(name, help="find a point of a construction inside a box")
        if name == "hit":
            p.add_argument("--construction", choices=["vdc", "lattice"], default="vdc")
        _add_lattice_args(p)
        p.add_argument("--box", type=_number, nargs="+", required=True)
        p.add_argument("--threshold", type=float, help="volume above which a lattice miss is a failure")
        p.add_argument("--report")

    p = sub.add_parser("verify", help="largest empty aligned box of a point file")
    p.add_argument("--points", required=True)
    p.add_argument("--window", type=_number, nargs="+", required=True)
    p.add_argument("--construction", choices=["vdc", "lattice", "custom"], default="vdc")
    p.add_argument("--threshold", type=_number, help="guaranteed volume (default 64 for vdc)")
    p.add_argument("--no-exact", action="store_true", help="ignore the exact sidecar")
    p.add_argument("--svg")
    p.add_argument("--svg-scale", type=float, default=8.0)
    p.add_argument("--report")

    p = sub.add_parser("growth", help="point counts in growing cubes")
    p.add_argument("--construction", choices=["vdc", "lattice"], default="vdc")
    _add_lattice_args(p)
    p.add_argument("--T", dest="t_values", type=int, nargs="+", default=[64, 128, 256, 512])
    p.add_argument("--region", choices=["positive", "symmetric"])
    p.add_argument("--report")

    p = sub.add_parser("epsnet", help="eps-net of the unit cube from a construction")
    p.add_argument("--source", choices=["vdc", "lattice"], default="vdc")
    _add_lattice_args(p)
    _add_flow_args(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--threshold", type=float, help="lattice threshold (estimated when omitted)")
    p.add_argument("--out")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--report")

    p = sub.add_parser("admissibility", help="norm products, flow probes and threshold estimate")
    _add_lattice_args(p)
    _add_flow_args(p)
    p.add_argument("--probes", type=int, default=100)
    p.add_argument("--probe-bound", type=float, default=3.0)
    p.add_argument("--half-width", type=float, default=5.0, help="enumeration cube [-h, h]^d for norm checks")
    p.add_argument("--report")
    return parser


def _runtime(args, start):
    return round((time.perf_counter() - start) * 1000, 3) if args.timing else None


def _emit(args, payload):
    write_json(payload, path=getattr(args, "report", None), stream=sys.stdout)


def _cmd_gen_vdc(args, start):
    w = _window(args.window)
    if all(x >= 0 for x in w.lower):
        pts = [p for _, p in vdc.enumerate_positive(w)]
    else:
        pts = vdc.enumerate_symmetric(w)
    write_points_csv(args.out, pts, exact=args.exact, dim=2)
    if args.svg:
        emit_svg(pts, w, args.svg, scale=args.svg_scale)
    _emit(args, {
        "command": "gen-vdc", "construction": "vdc",
        "window": {"lower": w.lower, "upper": w.upper},
        "point_count": len(pts), "out": args.out, "runtime_ms": _runtime(args, start),
    })
    return EXIT_OK


def _cmd_gen_lattice(args, start):
    w = _window(args.window)
    field, basis = _basis(args)
    pts = enumerate_lattice(basis, w)
    write_points_csv(args.out, pts, dim=basis.dim)
    if args.svg:
        emit_svg(pts, w, args.svg, scale=args.svg_scale)
    _emit(args, {
        "command": "gen-lattice", "construction": "lattice", "poly": field.min_poly,
        "normalized": bool(args.normalize), "covolume": basis.covolume,
        "window": {"lower": w.lower, "upper": w.upper},
        "point_count": int(len(pts)), "out": args.out, "runtime_ms": _runtime(args, start),
    })
    return EXIT_OK


def _cmd_hit(args, start):
    construction = getattr(args, "construction", "vdc")
    box = _box(args.box)
    vol = box_volume(box)
    payload = {
        "command": "hit", "construction": construction,
        "box": {"lower": box.lower, "upper": box.upper}, "volume": vol,
    }
    status = EXIT_OK
    if construction == "vdc":
        p = vdc.hit_box(box)
        seq = vdc.decode(p)
        inside = contains(box, p)
        payload.update({
            "hit": list(p), "hit_exact": [exact_str(x) for x in p],
            "sequence": sorted(seq.support) if seq is not None else None,
            "contained": inside,
        })
        if not inside or seq is None:
            status = EXIT_FALSIFIED
    else:
        field, basis = _basis(args)
        p = hit_box_lattice(basis, box)
        payload.update({"poly": field.min_poly, "hit": list(p) if p is not None else None})
        if p is None and args.threshold is not None and vol >= args.threshold:
            status = EXIT_FALSIFIED
    payload["runtime_ms"] = _runtime(args, start)
    _emit(args, payload)
    return status


def _cmd_verify(args, start):
    w = _window(args.window)
    pts, exact = read_points(args.points, prefer_exact=not args.no_exact)
    threshold = args.threshold
    if threshold is None and args.construction == "vdc":
        threshold = vdc.VOLUME_THRESHOLD
    report = largest_empty_box(pts, w)
    ok = threshold is None or report.volume <= threshold
    if args.svg:
        emit_svg(pts, w, args.svg, scale=args.svg_scale)
    box = report.as_dict()
    box["volume_exact"] = exact_str(report.volume)
    _emit(args, {
        "command": "verify", "construction": args.construction,
        "window": {"lower": w.lower, "upper": w.upper},
        "point_count": len(pts), "exact": exact,
        "max_empty_box": box, "threshold": threshold,
        "within_threshold": bool(ok), "runtime_ms": _runtime(args, start),
    })
    return EXIT_OK if ok else EXIT_FALSIFIED


def _cmd_growth(args, start):
    region = args.region or ("positive" if args.construction == "vdc" else "symmetric")
    if args.construction == "vdc":
        if region == "positive":
            def source(T):
                return vdc.count_positive(Window((0, 0), (T, T)))
        else:
            def source(T):
                return len(vdc.enumerate_symmetric(Window((-T, -T), (T, T))))
        d, extra = 2, {}
    else:
        field, basis = _basis(args)
        d = basis.dim

        def source(T):
            lo = np.zeros(d) if region == "positive" else -np.full(d, float(T))
            return len(enumerate_lattice(basis, (lo, np.full(d, float(T)))))
        extra = {"poly": field.min_poly, "covolume": basis.covolume}
    rows = growth_count(source, args.t_values, d)
    _emit(args, {
        "command": "growth", "construction": args.construction, "region": region, **extra,
        "rows": [{"T": T, "count": c, "ratio": r} for T, c, r in rows],
        "runtime_ms": _runtime(args, start),
    })
    return EXIT_OK


def _estimate_threshold(args, basis):
    grid = flow_grid(basis.dim, args.flow_bound, args.flow_step)
    return danzer_constant_estimate(basis, grid, args.samples, args.seed)


def _cmd_epsnet(args, start):
    extra = {}
    if args.source == "vdc":
        net = build_net("vdc", args.eps)
    else:
        field, basis = _basis(args)
        s = args.threshold if args.threshold is not None else _estimate_threshold(args, basis)
        net = build_net(basis, args.eps, threshold=s)
        extra = {"poly": field.min_poly}
    report = validate_net(net)
    if args.out:
        write_points_csv(args.out, net.points, exact=args.exact and args.source == "vdc", dim=net.dim)
    _emit(args, {"command": "epsnet", **report, **extra, "runtime_ms": _runtime(args, start)})
    return EXIT_OK if report["valid"] else EXIT_FALSIFIED


def _random_flows(d, n, bound, rng):
    out = []
    while len(out) < n:
        free = rng.uniform(-bound, bound, size=d - 1)
        if abs(free.sum()) <= bound:
            out.append(DiagonalFlowVector.from_free(free))
    return out


def _cmd_admissibility(args, start):
    field, basis = _basis(args)
    d = basis.dim
    h = args.half_width
    pts = enumerate_lattice(basis, (np.full(d, -h), np.full(d, h)))
    nz = pts[np.any(pts != 0, axis=1)]
    norms = norm_product(nz)
    dev = np.abs(norms - np.rint(norms))
    norm_ok = bool(len(nz) == 0 or (dev.max() <= TAU and np.rint(norms).min() >= 1))
    rng = np.random.default_rng(args.seed)
    flows = _random_flows(d, args.probes, args.probe_bound, rng)
    shortest = [shortest_vector_under_flow(basis, t) for t in flows]
    probe_ok = all(s >= 1 - PROBE_TOL for s in shortest)
    s_hat = _estimate_threshold(args, basis)
    _emit(args, {
        "command": "admissibility", "poly": field.min_poly, "degree": d,
        "roots": [float(r) for r in field.roots], "covolume": basis.covolume,
        "tolerance": TAU,
        "norm_products": {
            "points": int(len(nz)), "min": float(norms.min()) if len(nz) else None,
            "max_integer_deviation": float(dev.max()) if len(nz) else 0.0, "ok": norm_ok,
        },
        "flow_probes": {
            "count": len(flows), "bound": args.probe_bound,
            "min_shortest": min(shortest) if shortest else None, "ok": probe_ok,
        },
        "s_hat": s_hat, "s_hat_label": "empirical threshold",
        "flow_grid": {"bound": args.flow_bound, "step": args.flow_step, "samples": args.samples},
        "runtime_ms": _runtime(args, start),
    })
    return EXIT_OK if norm_ok and probe_ok else EXIT_FALSIFIED


COMMANDS = {
    "gen-vdc": _cmd_gen_vdc,
    "gen-lattice": _cmd_gen_lattice,
    "hit": _cmd_hit,
    "hit-vdc": _cmd_hit,
    "verify": _cmd_verify,
    "growth": _cmd_growth,
    "epsnet": _cmd_epsnet,
    "admissibility": _cmd_admissibility,
}


def run(argv=None) -> int:
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("aligndanzer: a subcommand is required")
        return COMMANDS[args.command](args, start)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AlignDanzerError as exc:
        print(f"error[{exc.code}] {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
