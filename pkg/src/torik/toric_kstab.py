"""Donaldson-Futaki and Ding invariants of toric test configurations.

A concave PL function ``f`` on a reflexive polytope ``P`` induces a
decreasing filtration, a convex ``g`` an increasing one.  With ``n = dim P``
and averages taken for ``du`` on ``P`` and the lattice measure ``dσ`` on ∂P::

    DF(f)   = n (avg_P f - avg_∂P f)        Ding(f) = f(0) - avg_P f
    DF(g)   = n (avg_∂P g - avg_P g)        Ding(g) = avg_P g - g(0)
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import InternalInvariantError, ModeMismatch, NotReflexive, ShapeError
from .plfunc import Mode, PLFunction, is_radically_affine, linearity_cells
from .polytope import Polytope, is_reflexive


class Direction(str, Enum):
    DECREASING = "decreasing"
    INCREASING = "increasing"

    @classmethod
    def parse(cls, s: str) -> "Direction":
        aliases = {"dec": cls.DECREASING, "inc": cls.INCREASING}
        return aliases.get(s) or cls(s)


@dataclass(frozen=True)
class InvariantReport:
    df: Fraction
    ding: Fraction
    vol_p: Fraction
    vol_boundary: Fraction
    integral_p: Fraction
    integral_boundary: Fraction
    direction: Direction
    radically_affine: bool

    def to_dict(self) -> dict:
        return {
            "df": str(self.df),
            "ding": str(self.ding),
            "vol_p": str(self.vol_p),
            "vol_boundary": str(self.vol_boundary),
            "integral_p": str(self.integral_p),
            "integral_boundary": str(self.integral_boundary),
            "direction": self.direction.value,
            "radically_affine": self.radically_affine,
        }

    def render(self, title: str = "") -> str:
        rows = [
            ("direction", self.direction.value),
            ("DF", str(self.df)),
            ("Ding", str(self.ding)),
            ("vol(P)", str(self.vol_p)),
            ("vol(∂P)", str(self.vol_boundary)),
            ("∫_P", str(self.integral_p)),
            ("∫_∂P", str(self.integral_boundary)),
            ("radically affine", "yes" if self.radically_affine else "no"),
        ]
        width = max(len(k) for k, _ in rows)
        lines = [title] if title else []
        lines += [f"  {k.ljust(width)}  {v}" for k, v in rows]
        return "\n".join(lines)


def _integrate(f: PLFunction, p: Polytope) -> Fraction:
    total = Fraction(0)
    for cell in linearity_cells(f, p).cells:
        active = f.pieces[cell.label[0]]
        for simplex in cell.polytope.triangulation:
            total += simplex.volume() * active(simplex.barycenter())
    return total


def integral_over_polytope(f: PLFunction, p: Polytope) -> Fraction:
    """Exact ``∫_P f du``: the integral of an affine function over a simplex is
    its volume times the value at the barycenter."""
    if f.dim != p.dim:
        raise ShapeError("function and polytope dimensions differ")
    return _integrate(f, p)


def integral_over_boundary(f: PLFunction, p: Polytope) -> Fraction:
    """Exact ``∫_∂P f dσ``, facet by facet through lattice charts."""
    if f.dim != p.dim:
        raise ShapeError("function and polytope dimensions differ")
    total = Fraction(0)
    for j in range(len(p.facets)):
        chart = p.facet_chart(j)
        total += _integrate(f.compose(chart.matrix, chart.origin), p.facet_in_chart(j))
    return total


def _check_direction(f: PLFunction, direction: Direction) -> None:
    if f.is_affine:
        return
    if direction is Direction.DECREASING and f.mode is not Mode.MIN:
        raise ModeMismatch("a decreasing filtration needs a concave (min-mode) function")
    if direction is Direction.INCREASING and f.mode is not Mode.MAX:
        raise ModeMismatch("an increasing filtration needs a convex (max-mode) function")


def invariants(p: Polytope, f: PLFunction, direction: Direction | str) -> InvariantReport:
    direction = Direction.parse(direction) if isinstance(direction, str) else direction
    if f.dim != p.dim:
        raise ShapeError("function and polytope dimensions differ")
    if not is_reflexive(p).reflexive:
        raise NotReflexive(f"{p!r} is not reflexive")
    _check_direction(f, direction)
    n = p.dim
    vol, vol_b = p.volume, p.boundary_volume
    ip = integral_over_polytope(f, p)
    ib = integral_over_boundary(f, p)
    f0 = f((Fraction(0),) * n)
    if direction is Direction.DECREASING:
        df = n * (ip / vol - ib / vol_b)
        ding = f0 - ip / vol
    else:
        df = n * (ib / vol_b - ip / vol)
        ding = ip / vol - f0
    rad = is_radically_affine(f, p)
    if df < ding:
        raise InternalInvariantError(f"DF {df} < Ding {ding}")
    if (df == ding) != rad:
        raise InternalInvariantError(
            f"DF == Ding is {df == ding} but the radical-affineness test says {rad}"
        )
    return InvariantReport(df, ding, vol, vol_b, ip, ib, direction, rad)


def df_ding_gap_witness(p: Polytope, f: PLFunction, direction: Direction | str) -> Fraction:
    r = invariants(p, f, direction)
    return r.df - r.ding
