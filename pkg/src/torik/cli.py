"""Command-line front end.

    torik check FILE [--svg PATH]
    torik roots FILE
    torik invariants FILE [--pl loewy|socle|PLFILE] [--direction dec|inc]
    torik loewy-socle FILE
    torik filtration FILE --degree D [--kind loewy|socle] [--engine derivation|closed-form|both]
    torik fixtures list | run [ID]

FILE is a JSON polytope file or a built-in fixture id such as ``paper:fig2``.
Exit codes: 0 success, 1 mathematical negative (not reflexive, mismatch,
unsupported structure), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import errors
from .filtration import FiltrationKind, FiltrationTable, closed_form_membership, filtration, section_module
from .fixtures import FIXTURES, Fixture, run_fixture
from .plfunc import Mode, plfunction_from_dict
from .polytope import LatticePolytope, Polytope, is_reflexive, lattice_points, polytope_from_dict
from .roots import (
    TRIVIAL_NOTICE,
    RootKind,
    enumerate_roots,
    loewy_function,
    loewy_socle_invariants,
    normalize_unique_unipotent,
    socle_function,
)
from .toric_kstab import Direction, invariants

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2
DEFAULT_MAX_DEGREE = 6


class UsageError(Exception):
    pass


def _q(x) -> str:
    return str(Fraction(x))


def _point(v) -> list[int]:
    return [int(x) for x in v]


def _emit(args, data: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print(text)


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise errors.ParseError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise errors.ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise UsageError(f"unknown fixture {name!r}; try 'torik fixtures list'") from None


def load_polytope(source: str) -> LatticePolytope:
    if source.startswith("paper:"):
        fx = _fixture(source)
        if fx.polytope is None:
            raise UsageError(f"fixture {source} has no polytope")
        return fx.polytope
    return polytope_from_dict(_read_json(source))


def max_degree() -> int:
    raw = os.environ.get("TORIK_MAX_DEGREE", str(DEFAULT_MAX_DEGREE))
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"TORIK_MAX_DEGREE must be an integer, got {raw!r}") from None


# --- svg -----------------------------------------------------------------------


def polygon_svg(p: Polytope, scale: int = 60) -> str:
    """A static sketch of a lattice polygon with its lattice points."""
    if p.dim != 2:
        raise errors.UnsupportedDimension("--svg needs a 2-dimensional polytope")
    cx = sum(v[0] for v in p.vertices) / len(p.vertices)
    cy = sum(v[1] for v in p.vertices) / len(p.vertices)
    ring = sorted(p.vertices, key=lambda v: math.atan2(v[1] - cy, v[0] - cx))
    pts = lattice_points(p, 1)
    xs = [int(v[0]) for v in p.vertices]
    ys = [int(v[1]) for v in p.vertices]
    lo_x, hi_y = min(xs) - 1, max(ys) + 1
    width = (max(xs) - min(xs) + 2) * scale
    height = (max(ys) - min(ys) + 2) * scale

    def at(v) -> str:
        return f"{(int(v[0]) - lo_x) * scale},{(hi_y - int(v[1])) * scale}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<polygon points="{" ".join(at(v) for v in ring)}" fill="#dde7f3" stroke="#234" stroke-width="2"/>',
    ]
    for u in pts:
        x, y = at(u).split(",")
        fill = "#c22" if not any(u) else "#234"
        lines.append(f'<circle cx="{x}" cy="{y}" r="4" fill="{fill}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# --- commands ------------------------------------------------------------------


def cmd_check(args) -> int:
    p = load_polytope(args.file)
    rep = is_reflexive(p)
    data = {
        "name": p.name,
        "dim": p.dim,
        "vertices": [_point(v) for v in p.vertices],
        "facets": [{"normal": _point(f.normal), "rhs": _q(f.rhs)} for f in p.facets],
        "reflexive": rep.reflexive,
        "origin_interior": rep.origin_interior,
        "offending_facets": [{"normal": _point(f.normal), "rhs": _q(f.rhs)} for f in rep.offending_facets],
    }
    lines = [f"{p.name or args.file}: {'reflexive' if rep.reflexive else 'not reflexive'}"]
    if not rep.origin_interior:
        lines.append("  origin is not an interior point")
    for f in p.facets:
        mark = "  <- rhs is not -1" if f in rep.offending_facets else ""
        lines.append(f"  <u, {tuple(_point(f.normal))}> >= {_q(f.rhs)}{mark}")
    _emit(args, data, "\n".join(lines))
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(polygon_svg(p))
    return EXIT_OK if rep.reflexive else EXIT_NEGATIVE


def cmd_roots(args) -> int:
    p = load_polytope(args.file)
    roots = enumerate_roots(p)
    semi = [r for r in roots if r.kind is RootKind.SEMISIMPLE]
    unip = [r for r in roots if r.kind is RootKind.UNIPOTENT]
    data = {
        "roots": [{"point": list(r.point), "kind": r.kind.value, "facet": r.facet_index} for r in roots],
        "semisimple": len(semi),
        "unipotent": len(unip),
    }
    if not roots:
        text = "no roots (Aut reductive torus)"
    else:
        head = f"{len(semi)} semisimple, {len(unip)} unipotent"
        if unip:
            head += " " + " ".join("(" + ",".join(map(str, r.point)) + ")" for r in unip)
        text = "\n".join([head] + [f"  {r.point}  {r.kind.value}  facet {r.facet_index}" for r in roots])
    _emit(args, data, text)
    return EXIT_OK


def cmd_invariants(args) -> int:
    p = load_polytope(args.file)
    if args.pl in ("loewy", "socle"):
        try:
            np_ = normalize_unique_unipotent(p)
        except errors.NoUnipotentRoot:
            _emit(args, {"trivial": True, "notice": TRIVIAL_NOTICE}, TRIVIAL_NOTICE)
            return EXIT_OK
        target = np_.polytope
        f = loewy_function(np_) if args.pl == "loewy" else socle_function(np_)
        default = Direction.DECREASING if args.pl == "loewy" else Direction.INCREASING
    else:
        target = p
        f = plfunction_from_dict(_read_json(args.pl))
        default = Direction.DECREASING if f.mode is Mode.MIN else Direction.INCREASING
    direction = Direction.parse(args.direction) if args.direction else default
    rep = invariants(target, f, direction)
    _emit(args, rep.to_dict(), rep.render(f"{p.name or args.file} ({args.pl})"))
    return EXIT_OK


def _verdict(df: Fraction) -> str:
    if df > 0:
        return "does not destabilize"
    if df < 0:
        return "destabilizes"
    return "DF = 0 (product type not checked)"


def cmd_loewy_socle(args) -> int:
    p = load_polytope(args.file)
    rep = loewy_socle_invariants(p)
    if rep.trivial:
        _emit(args, rep.to_dict(), TRIVIAL_NOTICE)
        return EXIT_OK
    pres = rep.presentation
    lines = [
        f"{p.name or args.file}: unipotent root {pres.root.point}",
        rep.loewy.render("Loewy"),
        f"  -> Loewy DF {rep.loewy.df} {'> 0' if rep.loewy.df > 0 else '<= 0'}: {_verdict(rep.loewy.df)}",
        rep.socle.render("Socle"),
        f"  -> Socle DF {rep.socle.df}: {_verdict(rep.socle.df)}",
    ]
    data = rep.to_dict()
    data["loewy_df_positive"] = rep.loewy.df > 0
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def _tables(args, kind: FiltrationKind, d: int) -> dict[str, FiltrationTable]:
    out = {}
    fx = FIXTURES.get(args.file)
    if fx is not None and fx.module is not None:
        if args.engine in ("derivation", "both"):
            out["derivation"] = filtration(fx.module(d), kind)
        if args.engine in ("closed-form", "both"):
            out["closed-form"] = fx.closed_form(d, kind)
        return out
    np_ = normalize_unique_unipotent(load_polytope(args.file))
    if args.engine in ("derivation", "both"):
        out["derivation"] = filtration(section_module(np_, d), kind)
    if args.engine in ("closed-form", "both"):
        out["closed-form"] = closed_form_membership(np_, d, kind)
    return out


def cmd_filtration(args) -> int:
    d = args.degree
    if d < 0:
        raise UsageError("--degree must be non-negative")
    cap = max_degree()
    if d > cap:
        raise UsageError(f"--degree {d} exceeds TORIK_MAX_DEGREE={cap}")
    kinds = [FiltrationKind(args.kind)] if args.kind else list(FiltrationKind)
    try:
        results = {k: _tables(args, k, d) for k in kinds}
    except errors.NoUnipotentRoot:
        _emit(args, {"trivial": True, "notice": TRIVIAL_NOTICE}, TRIVIAL_NOTICE)
        return EXIT_OK
    status = EXIT_OK
    data, lines = {"degree": d, "filtrations": {}}, [f"{args.file}, degree {d}"]
    for kind, tables in results.items():
        entry = {engine: t.to_dict()["dims"] for engine, t in tables.items()}
        if len(tables) == 2:
            a, b = tables.values()
            agree = a.basis == b.basis and a.monomial_table() == b.monomial_table()
            entry["engines_agree"] = agree
            if not agree:
                status = EXIT_NEGATIVE
        data["filtrations"][kind.value] = entry
        sym = "F^L" if kind is FiltrationKind.LOEWY else "G^S"
        lines.append(f"{kind.value}:")
        lines.append("  i   " + "  ".join(f"{e:>11}" for e in tables))
        for i in range(max(len(t.steps) for t in tables.values())):
            cells = "  ".join(f"{t.step(i).dim:>11}" for t in tables.values())
            lines.append(f"  {i:<3} {cells}   dim {sym}_{i}")
        if "engines_agree" in entry:
            lines.append("  engines agree" if entry["engines_agree"] else "  ENGINES DISAGREE")
    _emit(args, data, "\n".join(lines))
    return status


def _render_value(v) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(str(x) for x in v) + ")"
    return str(v)


def cmd_fixtures(args) -> int:
    if args.action == "list":
        data = {fid: fx.description for fid, fx in FIXTURES.items()}
        _emit(args, data, "\n".join(f"{fid:<22} {desc}" for fid, desc in data.items()))
        return EXIT_OK
    ids = [args.id] if args.id else list(FIXTURES)
    results = [run_fixture(_fixture(fid)) for fid in ids]
    data, lines = {}, []
    for res in results:
        data[res.id] = {
            "passed": res.passed,
            "checks": [
                {"name": n, "expected": _render_value(w), "actual": _render_value(g), "provenance": pv, "ok": ok}
                for n, w, g, pv, ok in res.rows
            ],
        }
        lines.append(f"{'PASS' if res.passed else 'FAIL'} {res.id}")
        for n, w, g, pv, ok in res.rows:
            if ok:
                lines.append(f"   ok  {n} = {_render_value(g)}  [{pv}]")
            else:
                lines.append(f"   --  {n}: expected {_render_value(w)}, got {_render_value(g)}  [{pv}]")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if all(r.passed for r in results) else EXIT_NEGATIVE


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "json"], default="table")

    parser = argparse.ArgumentParser(prog="torik", description="Exact K-stability invariants of toric Fano varieties.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="reflexivity and facet diagnostics")
    p.add_argument("file")
    p.add_argument("--svg", metavar="PATH", help="write a sketch of a 2-dimensional polytope")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("roots", parents=[common], help="list roots with kind and facet")
    p.add_argument("file")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("invariants", parents=[common], help="DF and Ding of a PL function")
    p.add_argument("file")
    p.add_argument("--pl", default="loewy", help="'loewy', 'socle' or a PL function file (default: loewy)")
    p.add_argument("--direction", choices=["dec", "inc", "decreasing", "increasing"])
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("loewy-socle", parents=[common], help="invariants of both canonical filtrations")
    p.add_argument("file")
    p.set_defaults(func=cmd_loewy_socle)

    p = sub.add_parser("filtration", parents=[common], help="dimension tables of the filtrations of R_d")
    p.add_argument("file")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--kind", choices=[k.value for k in FiltrationKind])
    p.add_argument("--engine", choices=["derivation", "closed-form", "both"], default="derivation")
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("fixtures", parents=[common], help="list or run the built-in fixtures")
    p.add_argument("action", choices=["list", "run"])
    p.add_argument("id", nargs="?")
    p.set_defaults(func=cmd_fixtures)
    return parser


NEGATIVE_ERRORS = (
    errors.NotReflexive,
    errors.ModeMismatch,
    errors.UnsupportedAutomorphismStructure,
    errors.UnsupportedDimension,
    errors.DegenerateInput,
    errors.ShapeError,
)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (errors.ParseError, UsageError) as exc:
        print(f"torik: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NEGATIVE_ERRORS as exc:
        print(f"torik: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
