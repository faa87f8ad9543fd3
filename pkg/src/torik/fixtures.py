"""Built-in examples with their expected exact values.

Every expected value is tagged: ``paper`` for numbers printed in the source
example, ``derived`` for values computed independently by hand (lattice
point counts, dimension tables).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .filtration import FiltrationKind, FiltrationTable, Subspace, UModule, filtration, polynomial_module
from .plfunc import PLFunction, piece
from .polytope import LatticePolytope
from .roots import RootKind, assemble, enumerate_roots, loewy_socle_invariants

PAPER, DERIVED = "paper", "derived"


def _fig2() -> LatticePolytope:
    # F' = [-1, 1], h(x) = 1 - |x|
    base = LatticePolytope.from_vertices([(-1,), (1,)])
    h = PLFunction.min_of(piece([-1], 1), piece([1], 1))
    return assemble(base, h, "paper:fig2")


def _smooth3fold() -> LatticePolytope:
    # F' = conv((1,1), (0,1), (-2,-1), (1,-1)), h(x, y) = min(1, 1 + y)
    base = LatticePolytope.from_vertices([(1, 1), (0, 1), (-2, -1), (1, -1)])
    h = PLFunction.min_of(piece([0, 0], 1), piece([0, 1], 1))
    return assemble(base, h, "paper:smooth3fold")


def _sing3fold() -> LatticePolytope:
    # hexagon F', h = 1 - 2x for x >= 0 and 1 - x for x <= 0
    base = LatticePolytope.from_vertices([(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)])
    h = PLFunction.min_of(piece([-2, 0], 1), piece([-1, 0], 1))
    return assemble(base, h, "paper:sing3fold")


def _degree7_polytope() -> LatticePolytope:
    # exponents (a, b) of X^a Y^b Z^(3-a-b), 0 <= a, b <= 2, a + b <= 3, shifted by (-1, -1)
    return LatticePolytope.from_vertices([(-1, -1), (1, -1), (1, 0), (0, 1), (-1, 1)], "paper:degree7-blowup")


def degree7_monomials(d: int) -> list[tuple[int, int, int]]:
    return [(a, b, 3 * d - a - b) for a in range(2 * d + 1) for b in range(2 * d + 1) if a + b <= 3 * d]


def degree7_module(d: int) -> UModule:
    """``R_d`` of the blow-up of P^2 in two points, with ``X -> X + aZ``,
    ``Y -> Y + bZ``."""
    return polynomial_module("XYZ", degree7_monomials, [{"X": "Z"}, {"Y": "Z"}], d)


def degree7_closed_form(d: int, kind: FiltrationKind | str) -> FiltrationTable:
    """``F^L_i``: ``a + b <= 3d - i``; ``G^S_i``: ``a + b <= min(i, 3d)``."""
    kind = FiltrationKind(kind)
    m = degree7_module(d)
    n = m.dim
    steps = []
    for i in range(3 * d + (2 if kind is FiltrationKind.LOEWY else 1)):
        bound = 3 * d - i if kind is FiltrationKind.LOEWY else min(i, 3 * d)
        steps.append(Subspace.coordinate(n, [k for k, x in enumerate(m.basis) if x.exponent[0] + x.exponent[1] <= bound]))
    return FiltrationTable(kind, m.basis, tuple(steps))


def vn_module(n: int) -> UModule:
    """Polynomials of degree <= n in x, translated by ``x -> x + a``."""
    return polynomial_module("x", lambda N: [(k,) for k in range(N + 1)], [{"x": {(0,): 1}}], n)


def vn_closed_form(n: int, kind: FiltrationKind | str) -> FiltrationTable:
    """``F^L_i``: degree <= n - i; ``G^S_i``: degree <= i."""
    kind = FiltrationKind(kind)
    m = vn_module(n)
    steps = []
    for i in range(n + (2 if kind is FiltrationKind.LOEWY else 1)):
        bound = n - i if kind is FiltrationKind.LOEWY else i
        steps.append(Subspace.coordinate(m.dim, [k for k, x in enumerate(m.basis) if x.exponent[0] <= bound]))
    return FiltrationTable(kind, m.basis, tuple(steps))


@dataclass(frozen=True)
class Fixture:
    id: str
    description: str
    expected: dict
    provenance: dict
    polytope: LatticePolytope | None = None
    module: Callable[[int], UModule] | None = None
    closed_form: Callable[[int, FiltrationKind], FiltrationTable] | None = None
    compute: Callable[[], dict] = field(default=None, repr=False)


def _polytope_values(p: LatticePolytope) -> dict:
    roots = enumerate_roots(p)
    out = {
        "volume": p.volume,
        "boundary_volume": p.boundary_volume,
        "lattice_points_1": len(p.lattice_points(1)),
        "semisimple_roots": sum(r.kind is RootKind.SEMISIMPLE for r in roots),
        "unipotent_roots": sum(r.kind is RootKind.UNIPOTENT for r in roots),
    }
    if out["unipotent_roots"] == 1:
        rep = loewy_socle_invariants(p)
        q = rep.presentation.polytope
        out.update(
            loewy_df=rep.loewy.df,
            loewy_ding=rep.loewy.ding,
            socle_df=rep.socle.df,
            socle_ding=rep.socle.ding,
            loewy_ding_integral=rep.loewy.ding * q.volume,
            socle_t_integral=rep.socle.ding * q.volume,
        )
    return out


def _module_values(module: Callable[[int], UModule], d: int) -> dict:
    m = module(d)
    return {
        f"dim_R{d}": m.dim,
        f"loewy_dims_d{d}": filtration(m, "loewy").dims(),
        f"socle_dims_d{d}": filtration(m, "socle").dims(),
    }


def _build() -> dict[str, Fixture]:
    fig2 = _fig2()
    s3 = _smooth3fold()
    h3 = _sing3fold()
    d7 = _degree7_polytope()
    fixtures = [
        Fixture(
            "paper:fig2",
            "singular degree-6 del Pezzo surface, F' = [-1,1], h = 1 - |x|",
            {
                "volume": Fraction(3),
                "boundary_volume": Fraction(6),
                "lattice_points_1": 7,
                "unipotent_roots": 1,
                "loewy_df": Fraction(2, 9),
                "loewy_ding": Fraction(2, 9),
                "socle_df": Fraction(-2, 9),
                "socle_ding": Fraction(-2, 9),
                "loewy_ding_integral": Fraction(2, 3),
            },
            {
                "volume": DERIVED,
                "boundary_volume": DERIVED,
                "lattice_points_1": DERIVED,
                "unipotent_roots": DERIVED,
                "loewy_df": PAPER,
                "loewy_ding": PAPER,
                "socle_df": PAPER,
                "socle_ding": PAPER,
                "loewy_ding_integral": DERIVED,
            },
            polytope=fig2,
            compute=lambda: _polytope_values(fig2),
        ),
        Fixture(
            "paper:smooth3fold",
            "blow-up of Sigma_1 x P^1 along C x {p}; h = min(1, 1 + y)",
            {
                "volume": Fraction(20, 3),
                "semisimple_roots": 2,
                "unipotent_roots": 1,
                "loewy_ding_integral": Fraction(7, 8),
                "socle_t_integral": Fraction(-7, 8),
                "loewy_df": Fraction(21, 160),
                "loewy_ding": Fraction(21, 160),
                "socle_df": Fraction(-21, 160),
                "socle_ding": Fraction(-21, 160),
            },
            dict.fromkeys(
                ["volume", "semisimple_roots", "unipotent_roots", "loewy_ding_integral", "socle_t_integral",
                 "loewy_df", "loewy_ding", "socle_df", "socle_ding"],
                PAPER,
            ),
            polytope=s3,
            compute=lambda: _polytope_values(s3),
        ),
        Fixture(
            "paper:sing3fold",
            "Gorenstein toric Fano 3-fold over a hexagon; h = 1 - 2x (x >= 0), 1 - x (x <= 0)",
            {
                "volume": Fraction(16, 3),
                "unipotent_roots": 1,
                "loewy_ding_integral": Fraction(-3, 8),
                "socle_t_integral": Fraction(3, 8),
                "loewy_df": Fraction(-9, 128),
                "socle_df": Fraction(9, 128),
                "socle_ding": Fraction(9, 128),
            },
            dict.fromkeys(
                ["volume", "unipotent_roots", "loewy_ding_integral", "socle_t_integral", "loewy_df", "socle_df",
                 "socle_ding"],
                PAPER,
            ),
            polytope=h3,
            compute=lambda: _polytope_values(h3),
        ),
        Fixture(
            "paper:degree7-blowup",
            "P^2 blown up at two points; polynomial module X -> X + aZ, Y -> Y + bZ",
            {
                "lattice_points_1": 8,
                "unipotent_roots": 2,
                "dim_R1": 8,
                "loewy_dims_d1": (8, 6, 3, 1, 0),
                "socle_dims_d1": (1, 3, 6, 8),
            },
            {
                "lattice_points_1": DERIVED,
                "unipotent_roots": PAPER,
                "dim_R1": DERIVED,
                "loewy_dims_d1": DERIVED,
                "socle_dims_d1": DERIVED,
            },
            polytope=d7,
            module=degree7_module,
            closed_form=degree7_closed_form,
            compute=lambda: {**_polytope_values(d7), **_module_values(degree7_module, 1)},
        ),
        Fixture(
            "paper:vn-example",
            "polynomials of degree <= 5 under x -> x + a",
            {
                "dim_R5": 6,
                "loewy_dims_d5": (6, 5, 4, 3, 2, 1, 0),
                "socle_dims_d5": (1, 2, 3, 4, 5, 6),
            },
            dict.fromkeys(["dim_R5", "loewy_dims_d5", "socle_dims_d5"], PAPER),
            module=vn_module,
            closed_form=vn_closed_form,
            compute=lambda: _module_values(vn_module, 5),
        ),
    ]
    return {f.id: f for f in fixtures}


FIXTURES: dict[str, Fixture] = _build()


@dataclass(frozen=True)
class FixtureResult:
    id: str
    rows: tuple  # (name, expected, actual, provenance, ok)

    @property
    def passed(self) -> bool:
        return all(r[-1] for r in self.rows)


def run_fixture(fx: Fixture, expected: dict | None = None) -> FixtureResult:
    """Compare every expected value exactly; ``expected`` overrides the fixture's."""
    expected = fx.expected if expected is None else expected
    actual = fx.compute()
    rows = []
    for name, want in expected.items():
        got = actual.get(name)
        rows.append((name, want, got, fx.provenance.get(name, ""), got == want))
    return FixtureResult(fx.id, tuple(rows))
