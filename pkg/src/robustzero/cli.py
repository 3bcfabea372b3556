"""Command-line front end.

Exit codes: 0 success, 1 verification failure or inconclusive
certification, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import sys

from . import catalog
from .certificate import check_document, dumps, load_document, write_certificate
from .charfn import char_poly, eval_point, load_distribution, make_distribution
from .enclosure import Box2
from .errors import RobustZeroError
from .miranda import SearchConfig, certified_margin, certify_miranda, make_affine_map, search_box
from .report import fmt, verify_paper
from .winding import PolyPath, winding_number, zero_search

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_NAMES = {"pi": math.pi, "tau": math.tau, "e": math.e}


class UsageError(Exception):
    pass


def parse_number(text: str) -> float:
    """Float literal or arithmetic over numbers and ``pi``, e.g. ``-7*pi/8``."""
    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        raise UsageError(f"cannot parse number {text!r}")

    try:
        return walk(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc


def parse_list(text: str, n: int | None = None, what: str = "value") -> list[float]:
    vals = [parse_number(p) for p in text.split(",")]
    if n is not None and len(vals) != n:
        raise UsageError(f"{what} needs {n} comma-separated numbers, got {len(vals)}")
    return vals


def _distribution(args):
    if getattr(args, "dist", None):
        dist = load_distribution(args.dist)
    else:
        name = getattr(args, "builtin", None) or "paper-mu"
        try:
            dist = catalog.BUILTIN_DISTRIBUTIONS[name]()
        except KeyError:
            raise UsageError(f"unknown built-in distribution {name!r}; "
                             f"choose from {', '.join(catalog.BUILTIN_DISTRIBUTIONS)}") from None
    if getattr(args, "weights", None):
        ws = args.weights.split(",")
        dist = make_distribution(dist.dim, dist.atoms, ws)
    return dist


def _map(args):
    if args.map:
        v = parse_list(args.map, 6, "--map")
        return make_affine_map(v[0:2], v[2:4], v[4:6])
    name = args.builtin_map or "paper-psi"
    try:
        return catalog.BUILTIN_MAPS[name]()
    except KeyError:
        raise UsageError(f"unknown built-in map {name!r}; "
                         f"choose from {', '.join(catalog.BUILTIN_MAPS)}") from None


def _box(args, default=(-math.pi, math.pi, -math.pi, math.pi)) -> Box2:
    v = parse_list(args.box, 4, "--box") if args.box else list(default)
    return Box2.from_bounds(*v)


def _positive(name):
    def conv(text):
        v = parse_number(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return v
    return conv


def _depth(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("--max-depth must be >= 0")
    return v


# -- commands ---------------------------------------------------------------

def cmd_eval(args) -> int:
    dist = _distribution(args)
    pt = parse_list(args.point, what="--point")
    z = eval_point(char_poly(dist), pt)
    print(fmt(z))
    return EXIT_OK


def cmd_zeros(args) -> int:
    poly = char_poly(_distribution(args))
    box = _box(args)
    clusters = zero_search(poly, box, args.tol)
    if not clusters:
        print("no zeros")
    for k, c in enumerate(clusters):
        cx, cy = c.center
        print(f"cluster {k}: center ({cx:.17g}, {cy:.17g}) "
              f"box [{c.x.lo:.17g}, {c.x.hi:.17g}] x [{c.y.lo:.17g}, {c.y.hi:.17g}]")
    if args.grid:
        if not args.out:
            raise UsageError("--grid needs --out")
        write_grid(poly, box, args.grid, args.out)
    return EXIT_OK


def write_grid(poly, box: Box2, n: int, path) -> None:
    """Comma-separated ``x,y,re,im,abs`` on an n-by-n lattice over the box."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,y,re,im,abs\n")
        for i in range(n):
            x = box.x.lo + (box.x.hi - box.x.lo) * (i / (n - 1) if n > 1 else 0.5)
            for j in range(n):
                y = box.y.lo + (box.y.hi - box.y.lo) * (j / (n - 1) if n > 1 else 0.5)
                z = eval_point(poly, (x, y))
                fh.write(f"{x:.17g},{y:.17g},{z.real:.17g},{z.imag:.17g},{abs(z):.17g}\n")


def cmd_miranda(args) -> int:
    poly = char_poly(_distribution(args))
    amap = _map(args)
    if args.eps is None:
        eps = certified_margin(poly, amap, args.max_depth)
        if eps == 0.0:
            print("INCONCLUSIVE: no margin certifies")
            return EXIT_FAIL
    else:
        eps = args.eps
    cert = certify_miranda(poly, amap, eps, args.max_depth)
    if not cert:
        print(f"INCONCLUSIVE: margin {eps:.17g}: {cert.reason}")
        return EXIT_FAIL
    if args.out:
        write_certificate(cert, args.out)
    print(f"PASS margin {eps:.17g} orientation {cert.orientation.label()} "
          f"depth {cert.depth_used}")
    return EXIT_OK


def cmd_winding(args) -> int:
    poly = char_poly(_distribution(args))
    if args.box:
        path = PolyPath.box_boundary(_box(args))
    else:
        path = PolyPath(tuple(_map(args).corners()), closed=True)
    cert = winding_number(poly, path, args.max_depth)
    if not cert:
        print(f"INCONCLUSIVE: {cert.reason}")
        return EXIT_FAIL
    if args.out:
        write_certificate(cert, args.out)
    print(f"winding {cert.winding} modulus_floor {cert.modulus_floor:.17g}")
    return EXIT_OK


def cmd_search(args) -> int:
    poly = char_poly(_distribution(args))
    config = SearchConfig(max_depth=args.max_depth)
    try:
        amap = search_box(poly, _box(args), config)
    except RobustZeroError as exc:
        print(f"NOT FOUND: {exc}")
        return EXIT_FAIL
    m = certified_margin(poly, amap, config.max_depth)
    print("map " + ",".join(f"{c:.17g}" for c in (*amap.base, *amap.u, *amap.v))
          + f" margin {m:.17g}")
    return EXIT_OK


def cmd_check(args) -> int:
    res = check_document(load_document(args.certificate))
    for msg in res.messages:
        print(msg)
    print("VALID" if res.ok else "INVALID")
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_verify_paper(args) -> int:
    dist = _distribution(args)
    rep = verify_paper(dist, args.max_depth)
    print(rep.table())
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps(rep.to_document()))
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustzero",
        description="Certified zeros of characteristic functions of discrete distributions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_dist(p, weights=False):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--dist", metavar="PATH", help="distribution document (JSON)")
        g.add_argument("--builtin", metavar="NAME",
                       help=f"built-in distribution ({', '.join(catalog.BUILTIN_DISTRIBUTIONS)})")
        if weights:
            p.add_argument("--weights", metavar="W1,W2,...",
                           help="replace the weights (numbers or p/q), keeping the atoms")

    def add_map(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--map", metavar="BASE_X,BASE_Y,UX,UY,VX,VY")
        g.add_argument("--builtin-map", metavar="NAME",
                       help=f"built-in map ({', '.join(catalog.BUILTIN_MAPS)}); default paper-psi")

    p = sub.add_parser("eval", help="evaluate the characteristic function at a point")
    add_dist(p)
    p.add_argument("--point", required=True, metavar="X,Y")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("zeros", help="branch-and-prune zero isolation")
    add_dist(p)
    p.add_argument("--box", metavar="XLO,XHI,YLO,YHI")
    p.add_argument("--tol", type=_positive("--tol"), default=1e-6)
    p.add_argument("--grid", type=int, metavar="N", help="also write an N x N value grid")
    p.add_argument("--out", metavar="PATH", help="grid output file")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("miranda", help="Poincare-Miranda robust-zero certificate")
    add_dist(p)
    add_map(p)
    p.add_argument("--eps", type=_positive("--eps"),
                   help="margin to certify; omitted: search for the best margin")
    p.add_argument("--max-depth", type=_depth, default=14)
    p.add_argument("--out", metavar="PATH", help="certificate output file")
    p.set_defaults(func=cmd_miranda)

    p = sub.add_parser("winding", help="certified winding number along a box or mapped square")
    add_dist(p)
    add_map(p)
    p.add_argument("--box", metavar="XLO,XHI,YLO,YHI")
    p.add_argument("--max-depth", type=_depth, default=16)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_winding)

    p = sub.add_parser("search", help="heuristic search for a certifiable square")
    add_dist(p)
    p.add_argument("--box", metavar="XLO,XHI,YLO,YHI")
    p.add_argument("--max-depth", type=_depth, default=10)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("check", help="re-check a certificate document")
    p.add_argument("certificate", metavar="PATH")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify-paper", help="run the full reproduction suite")
    add_dist(p, weights=True)
    p.add_argument("--max-depth", type=_depth, default=None)
    p.add_argument("--out", metavar="PATH", help="write the report and all certificates")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, RobustZeroError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
