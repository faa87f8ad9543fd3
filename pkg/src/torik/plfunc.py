"""Piecewise-linear functions given as a min (concave) or max (convex) of
affine pieces, their domains of linearity, and the radical-affineness test."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import exact_linear as el
from .errors import DegenerateInput, ParseError, ShapeError, UnsupportedDimension
from .polytope import FacetIneq, Polytope


class Mode(str, Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class AffinePiece:
    """``u -> <gradient, u> + offset``."""

    gradient: tuple[Fraction, ...]
    offset: Fraction

    def __call__(self, u: Sequence) -> Fraction:
        return el.dot(self.gradient, u) + self.offset

    def __neg__(self) -> "AffinePiece":
        return AffinePiece(tuple(-g for g in self.gradient), -self.offset)

    def shifted(self, c) -> "AffinePiece":
        return AffinePiece(self.gradient, self.offset + c)

    def compose(self, a: Sequence[Sequence], b: Sequence) -> "AffinePiece":
        """The piece ``w -> self(a w + b)``."""
        grad = tuple(el.dot(self.gradient, col) for col in zip(*a)) if a else ()
        return AffinePiece(grad, self(b))


def piece(gradient: Sequence, offset) -> AffinePiece:
    return AffinePiece(el.vec(gradient), el.to_fraction(offset))


@dataclass(frozen=True)
class PLFunction:
    mode: Mode
    pieces: tuple[AffinePiece, ...]

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a PL function needs at least one piece")
        n = len(self.pieces[0].gradient)
        if any(len(p.gradient) != n for p in self.pieces):
            raise ShapeError("pieces have different dimensions")
        unique = tuple(dict.fromkeys(self.pieces))
        object.__setattr__(self, "pieces", unique)
        object.__setattr__(self, "mode", Mode(self.mode))

    @classmethod
    def min_of(cls, *pieces: AffinePiece) -> "PLFunction":
        return cls(Mode.MIN, tuple(pieces))

    @classmethod
    def max_of(cls, *pieces: AffinePiece) -> "PLFunction":
        return cls(Mode.MAX, tuple(pieces))

    @classmethod
    def affine(cls, gradient: Sequence, offset) -> "PLFunction":
        return cls(Mode.MIN, (piece(gradient, offset),))

    @classmethod
    def constant(cls, c, dim: int) -> "PLFunction":
        return cls.affine([0] * dim, c)

    @property
    def dim(self) -> int:
        return len(self.pieces[0].gradient)

    @property
    def is_affine(self) -> bool:
        return len(self.pieces) == 1

    def __call__(self, u: Sequence) -> Fraction:
        if len(u) != self.dim:
            raise ShapeError(f"point of dimension {len(u)} for a function on R^{self.dim}")
        vals = (p(u) for p in self.pieces)
        return min(vals) if self.mode is Mode.MIN else max(vals)

    def __neg__(self) -> "PLFunction":
        flipped = Mode.MAX if self.mode is Mode.MIN else Mode.MIN
        return PLFunction(flipped, tuple(-p for p in self.pieces))

    def shifted(self, c) -> "PLFunction":
        return PLFunction(self.mode, tuple(p.shifted(c) for p in self.pieces))

    def compose(self, a: Sequence[Sequence], b: Sequence) -> "PLFunction":
        """``w -> self(a w + b)``; stays concave/convex since the map is affine."""
        return PLFunction(self.mode, tuple(p.compose(a, b) for p in self.pieces))

    def scaled_argument(self, s) -> "PLFunction":
        """``u -> self(s u)``."""
        s = el.to_fraction(s)
        return PLFunction(self.mode, tuple(AffinePiece(el.vscale(s, p.gradient), p.offset) for p in self.pieces))

    def as_concave(self) -> "PLFunction":
        """Min-mode version of self (self if concave, -self if convex)."""
        return self if self.mode is Mode.MIN else -self


def eval_pl(f: PLFunction, u: Sequence) -> Fraction:
    return f(u)


@dataclass(frozen=True)
class Cell:
    polytope: Polytope
    label: tuple[int, ...]


@dataclass(frozen=True)
class Subdivision:
    domain: Polytope
    cells: tuple[Cell, ...]

    def vertices(self) -> list[tuple[Fraction, ...]]:
        return sorted({v for c in self.cells for v in c.polytope.vertices})


def linearity_cells(f: PLFunction, p: Polytope) -> Subdivision:
    """Cells ``p ∩ {piece_k is the active piece}``; lower-dimensional ones dropped."""
    if f.dim != p.dim:
        raise ShapeError("function and polytope dimensions differ")
    if f.is_affine:
        return Subdivision(p, (Cell(p, (0,)),))
    cells = []
    for k, pk in enumerate(f.pieces):
        ineqs = list(p.facets)
        feasible = True
        for j, pj in enumerate(f.pieces):
            if j == k:
                continue
            # MIN: pk <= pj  <=>  <gj - gk, u> >= ck - cj ; MAX reversed
            normal = el.vsub(pj.gradient, pk.gradient)
            rhs = pk.offset - pj.offset
            if f.mode is Mode.MAX:
                normal, rhs = tuple(-x for x in normal), -rhs
            if not any(normal):
                if rhs > 0:
                    feasible = False
                    break
                continue
            prim = el.primitive(normal)
            scale = next(Fraction(a) / b for a, b in zip(normal, prim) if b)
            ineqs.append(FacetIneq(prim, rhs / scale))
        if not feasible:
            continue
        try:
            cell = Polytope.from_inequalities(ineqs, p.dim)
        except DegenerateInput:
            continue
        cells.append(Cell(cell, (k,)))
    return Subdivision(p, tuple(cells))


def overlay(s1: Subdivision, s2: Subdivision) -> Subdivision:
    """Common refinement: all full-dimensional pairwise intersections."""
    if s1.domain != s2.domain:
        raise ValueError("subdivisions of different domains")
    cells = []
    for c1 in s1.cells:
        for c2 in s2.cells:
            ineqs = list(c1.polytope.facets) + list(c2.polytope.facets)
            try:
                poly = Polytope.from_inequalities(ineqs, s1.domain.dim)
            except DegenerateInput:
                continue
            cells.append(Cell(poly, c1.label + c2.label))
    return Subdivision(s1.domain, tuple(cells))


def is_radically_affine(f: PLFunction, p: Polytope) -> bool:
    """Whether ``f(tu) - f(0) = t (f(u) - f(0))`` for all ``u`` in ∂p, t in [0, 1].

    For concave ``f`` the defect ``F(u) = f(u/2) - (f(0) + f(u))/2`` is
    non-negative and piecewise linear on each facet; it vanishes identically
    iff it vanishes at every vertex of the common refinement of the linearity
    cells of ``f`` and of ``u -> f(u/2)`` restricted to that facet.
    """
    if f.dim != p.dim:
        raise ShapeError("function and polytope dimensions differ")
    origin = (Fraction(0),) * p.dim
    if not p.interior_contains(origin):
        raise DegenerateInput("origin is not an interior point of the domain")
    if f.is_affine:
        return True
    if p.dim < 2:
        raise UnsupportedDimension("radical affineness test needs dimension >= 2")
    # the property is unchanged by f -> -f and by adding constants
    g = f.as_concave()
    g = g.shifted(-g(origin))
    return _radically_affine_concave(PLFunction(g.mode, tuple(sorted(g.pieces, key=_piece_key))), p)


def _piece_key(p: AffinePiece) -> tuple:
    return (p.gradient, p.offset)


@lru_cache(maxsize=4096)
def _radically_affine_concave(g: PLFunction, p: Polytope) -> bool:
    """``g`` concave with ``g(0) = 0``."""
    origin = (Fraction(0),) * p.dim
    half = g.scaled_argument(Fraction(1, 2))
    g0 = g(origin)
    for j in range(len(p.facets)):
        chart = p.facet_chart(j)
        facet = p.facet_in_chart(j)
        a, b = chart.matrix, chart.origin
        g_here = g.compose(a, b)
        half_here = half.compose(a, b)
        # cheap rejection at the facet's own vertices before refining
        if any(half_here(w) - (g0 + g_here(w)) / 2 != 0 for w in facet.vertices):
            return False
        refined = overlay(linearity_cells(g_here, facet), linearity_cells(half_here, facet))
        for w in refined.vertices():
            if half_here(w) - (g0 + g_here(w)) / 2 != 0:
                return False
    return True


# --- file format -------------------------------------------------------------


def _parse_rational(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"{x!r} is not an exact rational (use an integer or a \"p/q\" string)")
    try:
        return el.to_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {x!r}: {exc}") from exc


def plfunction_from_dict(data: dict) -> PLFunction:
    if not isinstance(data, dict):
        raise ParseError("PL function file must contain an object")
    mode = data.get("mode")
    if mode not in ("min", "max"):
        raise ParseError(f"mode must be \"min\" or \"max\", got {mode!r}")
    pieces = data.get("pieces")
    if not isinstance(pieces, list) or not pieces:
        raise ParseError("pieces must be a non-empty array")
    out = []
    for item in pieces:
        if not isinstance(item, dict) or "gradient" not in item or "offset" not in item:
            raise ParseError(f"bad piece {item!r}")
        if not isinstance(item["gradient"], list):
            raise ParseError("gradient must be an array")
        out.append(AffinePiece(tuple(_parse_rational(x) for x in item["gradient"]), _parse_rational(item["offset"])))
    try:
        return PLFunction(Mode(mode), tuple(out))
    except (ShapeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def _fmt(x: Fraction):
    return str(x)


def plfunction_to_dict(f: PLFunction) -> dict:
    return {
        "mode": f.mode.value,
        "pieces": [{"gradient": [_fmt(g) for g in p.gradient], "offset": _fmt(p.offset)} for p in f.pieces],
    }
