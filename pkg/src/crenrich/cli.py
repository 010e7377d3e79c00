"""Command-line front end.

Exit codes: 0 success, 1 numeric failure, 2 configuration error,
3 mesh parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import CrenrichError, DomainError, MeshParseError
from .experiments import ErrorReport, convergence_study, error_table, renka, table_emit
from .meshkit import read_triangle_mesh, uniform_grid_mesh, write_triangle_mesh
from .operators import Scheme
from .quadrature import TriangleRuleConfig
from .verify import run_verification

EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG, EXIT_PARSE = 0, 1, 2, 3

DEFAULT_SCHEMES = "cr,c-alpha:1,e-beta:1"
DEFAULT_FUNCTIONS = "f1..f6"


class ConfigError(CrenrichError):
    pass


def parse_functions(text: str) -> list[str]:
    """``f1..f6``, ``f2,f5``, ``all`` or any comma-separated mix."""
    out = []
    for part in filter(None, (p.strip().lower() for p in text.split(","))):
        if part == "all":
            part = "f1..f6"
        if ".." in part:
            lo, hi = part.split("..", 1)
            try:
                a, b = int(lo.lstrip("f")), int(hi.lstrip("f"))
            except ValueError:
                raise ConfigError(f"bad function range {part!r}") from None
            ids = [f"f{i}" for i in range(a, b + 1)]
            if not ids:
                raise ConfigError(f"empty function range {part!r}")
        else:
            ids = [part]
        for fid in ids:
            renka(fid)
            if fid not in out:
                out.append(fid)
    if not out:
        raise ConfigError("no test functions given")
    return out


def parse_schemes(text: str, quad_order: int) -> list[Scheme]:
    schemes = [Scheme.parse(p, quad_order) for p in text.split(",") if p.strip()]
    if not schemes:
        raise ConfigError("no schemes given")
    return schemes


def parse_grids(text: str) -> list[int]:
    try:
        grids = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError(f"bad grid list {text!r}") from None
    if len(grids) < 2:
        raise ConfigError("a convergence study needs at least two grid sizes")
    if any(n < 1 for n in grids) or any(b <= a for a, b in zip(grids, grids[1:])):
        raise ConfigError(f"grid sizes must be positive and strictly increasing, got {grids}")
    return grids


def _add_quadrature_flags(p):
    p.add_argument("--quad-order", type=int, default=16, metavar="K", help="nodes per DoF line rule (default 16)")
    p.add_argument("--subdiv", type=int, default=2, metavar="K", help="triangle refinement level 4^K (default 2)")
    p.add_argument("--base-degree", type=int, default=8, metavar="D", help="degree of the base triangle rule (default 8)")


def _add_output_flags(p, default_format="md"):
    p.add_argument("--format", choices=("csv", "md"), default=default_format)
    p.add_argument("--out", type=Path, metavar="PATH", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crenrich", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="L1 errors of several schemes and functions on one mesh")
    src = t.add_mutually_exclusive_group()
    src.add_argument("--grid", type=int, metavar="N", help="uniform n x n grid of 2n^2 triangles (default 19)")
    src.add_argument("--mesh", nargs=2, type=Path, metavar=("NODE", "ELE"), help="Triangle .node and .ele files")
    t.add_argument("--diagonal", choices=("anti", "main"), default="anti", help="cell diagonal of --grid meshes")
    t.add_argument("--schemes", default=DEFAULT_SCHEMES, help=f"comma list (default {DEFAULT_SCHEMES})")
    t.add_argument("--functions", default=DEFAULT_FUNCTIONS, help=f"e.g. f1..f6 or f2,f5 (default {DEFAULT_FUNCTIONS})")
    _add_quadrature_flags(t)
    _add_output_flags(t)

    c = sub.add_parser("converge", help="observed convergence orders on uniform grids")
    c.add_argument("--grids", default="9,19,39", help="strictly increasing grid sizes (default 9,19,39)")
    c.add_argument("--diagonal", choices=("anti", "main"), default="anti")
    c.add_argument("--schemes", "--scheme", dest="schemes", default=DEFAULT_SCHEMES)
    c.add_argument("--functions", "--function", dest="functions", default="f5")
    _add_quadrature_flags(c)
    _add_output_flags(c, "csv")

    v = sub.add_parser("verify", help="run the numeric verification battery")
    v.add_argument("--alpha", type=float, default=1.0)
    v.add_argument("--beta", type=float, default=1.0)
    v.add_argument("--triangles", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-sigma-error", type=float, default=0.0, help=argparse.SUPPRESS)

    m = sub.add_parser("mesh", help="write a uniform grid as Triangle .node/.ele files")
    m.add_argument("--grid", type=int, default=19, metavar="N")
    m.add_argument("--diagonal", choices=("anti", "main"), default="anti")
    m.add_argument("--base", type=int, choices=(0, 1), default=1, help="index base of the written files")
    m.add_argument("--out", type=Path, required=True, metavar="PREFIX")
    return parser


def _rule(args) -> TriangleRuleConfig:
    return TriangleRuleConfig(args.base_degree, args.subdiv)


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_table(args) -> int:
    cfg = _rule(args)
    schemes = parse_schemes(args.schemes, args.quad_order)
    functions = parse_functions(args.functions)
    if args.mesh:
        node, ele = args.mesh
        mesh = read_triangle_mesh(node, ele)
        label = node.stem
    else:
        n = 19 if args.grid is None else args.grid
        mesh = uniform_grid_mesh(n, args.diagonal)
        label = f"grid{n}"
    report = error_table(mesh, schemes, functions, cfg, label)
    _emit(table_emit(report, args.format), args.out)
    return EXIT_OK


def cmd_converge(args) -> int:
    cfg = _rule(args)
    grids = parse_grids(args.grids)
    schemes = parse_schemes(args.schemes, args.quad_order)
    functions = parse_functions(args.functions)
    rows = []
    for fid in functions:
        for sc in schemes:
            rows += convergence_study(grids, sc, fid, cfg, diagonal=args.diagonal).rows
    _emit(table_emit(ErrorReport(rows), args.format), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_verification(args.alpha, args.beta, args.triangles, args.seed, args.inject_sigma_error)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} of {len(results)} checks failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"all {len(results)} checks passed (alpha={args.alpha:g}, beta={args.beta:g})")
    return EXIT_OK


def cmd_mesh(args) -> int:
    mesh = uniform_grid_mesh(args.grid, args.diagonal)
    node, ele = write_triangle_mesh(mesh, args.out, args.base)
    print(f"wrote {node} and {ele} ({mesh.N} triangles)")
    return EXIT_OK


COMMANDS = {"table": cmd_table, "converge": cmd_converge, "verify": cmd_verify, "mesh": cmd_mesh}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (MeshParseError, OSError) as exc:
        print(f"crenrich: mesh error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, DomainError) as exc:
        print(f"crenrich: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CrenrichError, FloatingPointError, ArithmeticError) as exc:
        print(f"crenrich: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
