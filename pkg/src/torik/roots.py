"""Roots of reflexive polytopes and the unique-unipotent-root normal form.

When ``P`` has exactly one unipotent root ``m`` there is a unimodular change of
coordinates after which ``m = (0, ..., 0, -1)`` and

    P = {(u', t) : u' in F', -1 <= t <= h(u')}

for a lattice polytope ``F'`` and a concave PL height function ``h``.  The
Loewy filtration is then induced by ``h(u') - t`` and the Socle filtration
by ``t + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import exact_linear as el
from .errors import (
    InternalInvariantError,
    NoUnipotentRoot,
    NotReflexive,
    UnsupportedAutomorphismStructure,
)
from .plfunc import AffinePiece, Mode, PLFunction
from .polytope import FacetIneq, LatticePolytope, Polytope, is_reflexive, lattice_points, vertices_of_inequalities
from .toric_kstab import Direction, InvariantReport, integral_over_polytope, invariants


class RootKind(str, Enum):
    SEMISIMPLE = "semisimple"
    UNIPOTENT = "unipotent"


@dataclass(frozen=True)
class Root:
    point: tuple[int, ...]
    facet_index: int
    kind: RootKind


def _require_reflexive(p: Polytope) -> None:
    if not is_reflexive(p).reflexive:
        raise NotReflexive(f"{p!r} is not reflexive")


def _root_facet(p: Polytope, m) -> int | None:
    vals = [el.dot(f.normal, m) for f in p.facets]
    minus = [i for i, v in enumerate(vals) if v == -1]
    if len(minus) == 1 and all(v >= 0 for i, v in enumerate(vals) if i != minus[0]):
        return minus[0]
    return None


def enumerate_roots(p: Polytope) -> list[Root]:
    """Lattice points ``m`` with ``<m, v_i> = -1`` for one facet normal and
    ``>= 0`` for all the others, sorted lexicographically."""
    _require_reflexive(p)
    found = {}
    for m in lattice_points(p, 1):
        i = _root_facet(p, m)
        if i is not None:
            found[m] = i
    return [
        Root(m, i, RootKind.SEMISIMPLE if tuple(-x for x in m) in found else RootKind.UNIPOTENT)
        for m, i in sorted(found.items())
    ]


def unipotent_roots(p: Polytope) -> list[Root]:
    return [r for r in enumerate_roots(p) if r.kind is RootKind.UNIPOTENT]


@dataclass(frozen=True)
class NormalizedPresentation:
    transform: tuple[tuple[int, ...], ...]
    root: Root
    base_polytope: LatticePolytope
    height: PLFunction
    polytope: LatticePolytope
    original: Polytope

    @property
    def dim(self) -> int:
        return self.polytope.dim

    @property
    def root_image(self) -> tuple[int, ...]:
        return (0,) * (self.dim - 1) + (-1,)

    def height_at(self, u_prime) -> Fraction:
        return self.height(u_prime)

    def dilated_height_floor(self, d: int, u_prime) -> int:
        """``floor(d h(u'/d))``, the top of the fibre of ``dP`` over ``u'``."""
        val = min(el.dot(p.gradient, u_prime) + d * p.offset for p in self.height.pieces)
        return val.numerator // val.denominator

    def valuation_vector(self) -> dict[str, tuple[int, ...]]:
        """The toric valuation induced by the Socle filtration, in normalised and
        original coordinates of the dual lattice."""
        w = (0,) * (self.dim - 1) + (-1,)
        orig = tuple(sum(self.transform[i][j] * w[i] for i in range(self.dim)) for j in range(self.dim))
        return {"normalized": w, "original": orig}


def normalize_unique_unipotent(p: Polytope) -> NormalizedPresentation:
    _require_reflexive(p)
    unip = unipotent_roots(p)
    if not unip:
        raise NoUnipotentRoot("no unipotent root: the automorphism group is reductive")
    if len(unip) > 1:
        pts = ", ".join(str(r.point) for r in unip)
        raise UnsupportedAutomorphismStructure(f"{len(unip)} unipotent roots ({pts}); exactly one is supported")
    root = unip[0]
    n = p.dim
    v_f = p.facets[root.facet_index].normal
    # rows: a lattice basis of m^perp in N, then the facet normal; A m = (0,...,0,-1)
    rows = [list(r) for r in el.kernel_basis([list(root.point)])] + [list(v_f)]
    a = tuple(tuple(int(x) for x in r) for r in rows)
    if not el.unimodular(a) or el.matvec(a, root.point) != (0,) * (n - 1) + (-1,):
        raise InternalInvariantError("normalising transform is not unimodular")
    q = p.transform(a, p.name)
    q = LatticePolytope(q.dim, q.vertices, q.facets, q.name)

    bottom = [v for v in q.vertices if v[-1] == -1]
    base = LatticePolytope.from_vertices([v[:-1] for v in bottom])
    pieces = []
    for f in q.facets:
        w_last = f.normal[-1]
        if w_last > 0 and f.normal != (0,) * (n - 1) + (1,):
            raise InternalInvariantError(f"unexpected lower facet {f} in normalised polytope")
        if w_last < 0:
            pieces.append(
                AffinePiece(tuple(Fraction(-x, w_last) for x in f.normal[:-1]), Fraction(f.rhs) / w_last)
            )
    height = PLFunction(Mode.MIN, tuple(pieces))

    if any(height(v) < -1 for v in base.vertices):
        raise InternalInvariantError("height function drops below the bottom facet")
    if assemble(base, height).vertices != q.vertices:
        raise InternalInvariantError("normalised polytope is not {(u',t): -1 <= t <= h(u')}")
    return NormalizedPresentation(a, root, base, height, q, p)


def assemble(base: Polytope, height: PLFunction, name: str | None = None) -> LatticePolytope:
    """The polytope ``{(u', t) : u' in base, -1 <= t <= height(u')}``."""
    n = base.dim + 1
    ineqs = [FacetIneq(f.normal + (0,), f.rhs) for f in base.facets]
    ineqs.append(FacetIneq((0,) * (n - 1) + (1,), Fraction(-1)))
    for pc in height.pieces:
        prim = el.primitive(tuple(pc.gradient) + (Fraction(-1),))
        ineqs.append(FacetIneq(prim, pc.offset * prim[-1]))
    return LatticePolytope.from_vertices(vertices_of_inequalities(ineqs, n), name)


def loewy_function(np_: NormalizedPresentation) -> PLFunction:
    """``(u', t) -> h(u') - t``."""
    return PLFunction(
        Mode.MIN,
        tuple(AffinePiece(pc.gradient + (Fraction(-1),), pc.offset) for pc in np_.height.pieces),
    )


def socle_function(np_: NormalizedPresentation) -> PLFunction:
    """``(u', t) -> t + 1``."""
    n = np_.dim
    grad = (Fraction(0),) * (n - 1) + (Fraction(1),)
    return PLFunction(Mode.MAX, (AffinePiece(grad, Fraction(1)),))


TRIVIAL_NOTICE = "filtrations trivial: F^L_0 = R, F^L_1 = 0; G^S_0 = R"


@dataclass(frozen=True)
class LoewySocleReport:
    """Paired reports; all three fields are None when there is no unipotent
    root, in which case both filtrations are trivial."""

    loewy: InvariantReport | None
    socle: InvariantReport | None
    presentation: NormalizedPresentation | None

    @property
    def trivial(self) -> bool:
        return self.presentation is None

    def to_dict(self) -> dict:
        if self.trivial:
            return {"trivial": True, "notice": TRIVIAL_NOTICE}
        pres = self.presentation
        return {
            "trivial": False,
            "unipotent_root": list(pres.root.point),
            "transform": [list(r) for r in pres.transform],
            "loewy": self.loewy.to_dict(),
            "socle": self.socle.to_dict(),
            "loewy_destabilizes": self.loewy.df < 0,
            "socle_destabilizes": self.socle.df < 0,
        }


def loewy_socle_invariants(p: Polytope) -> LoewySocleReport:
    """DF/Ding of the Loewy and Socle test configurations.

    Besides the generic formulas, the Loewy Ding invariant is recomputed from
    the integrand ``h(0) - h(u') + t`` and the Socle one from ``t``; any
    disagreement raises.
    """
    try:
        np_ = normalize_unique_unipotent(p)
    except NoUnipotentRoot:
        return LoewySocleReport(None, None, None)
    q = np_.polytope
    n = q.dim
    loewy = invariants(q, loewy_function(np_), Direction.DECREASING)
    socle = invariants(q, socle_function(np_), Direction.INCREASING)

    h0 = np_.height((Fraction(0),) * (n - 1))
    integrand = PLFunction(
        Mode.MAX,
        tuple(AffinePiece(tuple(-g for g in pc.gradient) + (Fraction(1),), h0 - pc.offset) for pc in np_.height.pieces),
    )
    if integral_over_polytope(integrand, q) / q.volume != loewy.ding:
        raise InternalInvariantError("Loewy Ding disagrees with the direct h(0) - h + t integral")
    t_only = PLFunction.affine([0] * (n - 1) + [1], 0)
    avg_t = integral_over_polytope(t_only, q) / q.volume
    if not (avg_t == socle.ding == socle.df):
        raise InternalInvariantError("Socle DF/Ding disagree with the average of t")
    return LoewySocleReport(loewy, socle, np_)
