"""``curvepair`` command line: approx, verify, render."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from .arith import Dyadic
from .oracle import DEFAULT_GRID_DEPTH, DEFAULT_SPLIT_CAP, Inconclusive, certify_intersections, check_smooth_transversal
from .poly import CurvePair, PolynomialSyntaxError
from .subdivision import DEFAULT_MAX_DEPTH
from .svg import render_svg

SCHEMA = 1
EXIT_PIPELINE = 3
EXIT_INPUT = 2

log = logging.getLogger("curvepair")


def exact(v) -> str:
    """Exact text for a coordinate: ``m*2^e`` when dyadic, ``p/q`` otherwise."""
    v = Fraction(v)
    den = v.denominator
    if den & (den - 1) == 0:
        return str(Dyadic.coerce(v))
    return f"{v.numerator}/{v.denominator}"


def parse_exact(text: str) -> Fraction:
    if "/" in text:
        return Fraction(text)
    return Dyadic.parse(text).to_fraction()


def _pts(points):
    return [[float(x), float(y)] for x, y in points], [[exact(x), exact(y)] for x, y in points]


def report_document(result, f_text: str, g_text: str, emit_partition: bool) -> dict:
    doc = {"schema": SCHEMA, "f": f_text, "g": g_text, "region": list(result.rect)}
    if emit_partition:
        boxes = []
        for b, rule in sorted(result.partition.leaves.items()):
            bounds = result.out_box(result.partition.box(b))
            boxes.append({"depth": b.depth, "ix": b.ix, "iy": b.iy, "rule": rule.value, "bounds": [float(v) for v in bounds]})
        doc["boxes"] = boxes
    curves, curves_exact = {}, {}
    for name in ("f", "g"):
        lines = [_pts(pts) for pts, _ in result.polylines(name)]
        curves[name] = [fl for fl, _ in lines]
        curves_exact[name] = [ex for _, ex in lines]
    doc["curves"] = curves
    doc["curves_exact"] = curves_exact
    crossings = []
    for kind, point, hull in result.crossings():
        crossings.append(
            {
                "type": kind,
                "hull": [float(v) for v in hull],
                "hull_exact": [exact(v) for v in hull],
                "point": [float(v) for v in point],
                "point_exact": [exact(v) for v in point],
            }
        )
    doc["crossings"] = crossings
    doc["stats"] = {
        "leaves": len(result.partition),
        "max_depth_used": result.partition.max_depth,
        "snakes": len(result.report.snakes),
    }
    return doc


def error_document(exc: BaseException, stage: str | None = None) -> dict:
    err = {"type": type(exc).__name__, "stage": getattr(exc, "stage", stage), "message": str(exc)}
    box = getattr(exc, "box", None) or getattr(exc, "head", None)
    if box is not None:
        err["box"] = box.address()
    if isinstance(exc, PolynomialSyntaxError):
        err["position"] = exc.position
    if isinstance(exc, Inconclusive):
        err["cells"] = len(exc.cells)
    return {"schema": SCHEMA, "error": err}


def _dump(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _fail(exc, stage=None, code=EXIT_PIPELINE) -> int:
    sys.stdout.write(_dump(error_document(exc, stage)))
    return code


def _parse_pair(args):
    try:
        return CurvePair.from_text(args.f, args.g)
    except PolynomialSyntaxError as exc:
        raise SystemExit(_fail(exc, "parse", EXIT_INPUT))


def _check_region(parser, region):
    x0, y0, x1, y1 = region
    if not (x0 < x1 and y0 < y1):
        parser.error("--region needs x0 < x1 and y0 < y1")


def cmd_approx(args, parser) -> int:
    from .pipeline import solve

    _check_region(parser, args.region)
    if args.max_depth < 1:
        parser.error("--max-depth must be >= 1")
    pair = _parse_pair(args)
    try:
        result = solve(pair, args.region, max_depth=args.max_depth, min_depth=args.min_depth)
    except Exception as exc:  # every pipeline failure becomes an error object
        log.debug("pipeline failed", exc_info=True)
        return _fail(exc)

    doc = report_document(result, args.f, args.g, emit_partition=True)
    svg = render_svg(doc) if args.format in ("svg", "both") else None
    if not args.emit_partition:
        del doc["boxes"]
    if args.format == "svg":
        _write(svg, args.out)
        return 0
    _write(_dump(doc), args.out)
    if svg is not None:
        svg_path = _svg_path(args.out)
        _write(svg, svg_path)
    return 0


def _svg_path(out):
    if out in (None, "-"):
        return "curvepair.svg"
    root, ext = os.path.splitext(out)
    return root + ".svg" if ext != ".svg" else root + ".out.svg"


def cmd_verify(args, parser) -> int:
    _check_region(parser, args.region)
    pair = _parse_pair(args)
    try:
        roots = certify_intersections(pair, args.region, args.grid_depth, args.split_cap)
        smooth = check_smooth_transversal(pair, args.region, args.grid_depth, args.split_cap)
    except Inconclusive as exc:
        return _fail(exc, "oracle")
    doc = {
        "schema": SCHEMA,
        "f": args.f,
        "g": args.g,
        "region": list(args.region),
        "roots": [
            {
                "box": [float(v) for v in r.box.bounds()],
                "box_exact": [str(v) for v in r.box.bounds()],
                "point": [float(v) for v in r.midpoint],
                "point_exact": [str(v) for v in r.midpoint],
            }
            for r in roots
        ],
        "smooth_transversal": smooth,
    }
    _write(_dump(doc), args.out)
    return 0


def cmd_render(args, parser) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        return _fail(exc, "render", EXIT_INPUT)
    if "error" in doc:
        return _fail(ValueError("input is an error report"), "render", EXIT_INPUT)
    _write(render_svg(doc), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curvepair", description="Certified approximation of two plane curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    def curve_args(p):
        p.add_argument("--f", required=True, help='first polynomial, e.g. "x^2+y^2-4"')
        p.add_argument("--g", required=True, help="second polynomial")
        p.add_argument("--region", required=True, nargs=4, type=int, metavar=("X0", "Y0", "X1", "Y1"))
        p.add_argument("--out", default=None, help="output path (default stdout)")

    ap = sub.add_parser("approx", help="run the subdivision pipeline")
    curve_args(ap)
    ap.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
    ap.add_argument("--min-depth", type=int, default=0, help="uniform pre-subdivision depth")
    ap.add_argument("--format", choices=("json", "svg", "both"), default="json")
    ap.add_argument("--emit-partition", action="store_true", help="include leaf boxes in the JSON")
    ap.set_defaults(func=cmd_approx)

    vp = sub.add_parser("verify", help="certify the intersections with the interval Newton oracle")
    curve_args(vp)
    vp.add_argument("--grid-depth", type=int, default=DEFAULT_GRID_DEPTH)
    vp.add_argument("--split-cap", type=int, default=DEFAULT_SPLIT_CAP)
    vp.set_defaults(func=cmd_verify)

    rp = sub.add_parser("render", help="draw a JSON report as SVG")
    rp.add_argument("input")
    rp.add_argument("--out", default=None)
    rp.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("CURVEPAIR_LOG")
    if level:
        logging.basicConfig(
            level=getattr(logging, level.upper(), logging.INFO),
            stream=sys.stderr,
            format="%(name)s %(levelname)s %(message)s",
        )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1


if __name__ == "__main__":
    sys.exit(main())
