"""Exact convex polytopes and lattice polytopes.

A :class:`Polytope` carries both descriptions: its vertices and its facet
inequalities ``<u, normal> >= rhs`` with primitive integer normals.  Rational
vertices are allowed (linearity cells of PL functions need them);
:class:`LatticePolytope` adds the integrality requirement and the reflexive
polytope machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from operator import mul
from typing import Iterable, Sequence

from . import exact_linear as el
from .errors import DegenerateInput, NotReflexive, ParseError, UnsupportedDimension

MAX_DIM = 6


@dataclass(frozen=True)
class FacetIneq:
    """The half-space ``<u, normal> >= rhs``."""

    normal: tuple[int, ...]
    rhs: Fraction

    def slack(self, u: Sequence) -> Fraction:
        return el.dot(self.normal, u) - self.rhs

    def contains(self, u: Sequence) -> bool:
        return self.slack(u) >= 0


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def volume(self) -> Fraction:
        v0 = self.vertices[0]
        edges = [el.vsub(v, v0) for v in self.vertices[1:]]
        return abs(el.det(edges)) / math.factorial(self.dim)

    def barycenter(self) -> tuple[Fraction, ...]:
        k = len(self.vertices)
        return tuple(sum(c, Fraction(0)) / k for c in zip(*self.vertices))


@dataclass(frozen=True)
class ReflexivityReport:
    reflexive: bool
    origin_interior: bool
    offending_facets: tuple[FacetIneq, ...]


def _check_dim(dim: int) -> None:
    if dim < 1:
        raise DegenerateInput(f"dimension must be positive, got {dim}")
    if dim > MAX_DIM:
        raise UnsupportedDimension(f"dimension {dim} exceeds the supported maximum {MAX_DIM}")


def _hull(points: Sequence[tuple], dim: int) -> tuple[tuple, tuple[FacetIneq, ...]]:
    """Extreme points and facets of conv(points).

    Every affinely independent ``dim``-subset spans a candidate hyperplane;
    it supports a facet iff all points lie on one side.  Fine for the
    desk-scale inputs this package targets (tens of points, dim <= 4).
    """
    pts = sorted(set(points))
    if not pts:
        raise DegenerateInput("empty point set")
    if el.affine_rank(pts) != dim:
        raise DegenerateInput("points are not full-dimensional")
    # scale to integer points so hyperplanes come from integer cofactors
    scale = math.lcm(*(Fraction(x).denominator for p in pts for x in p))
    ipts = [tuple(int(x * scale) for x in p) for p in pts]
    found: set[FacetIneq] = set()
    seen: set[tuple] = set()
    for combo in combinations(range(len(ipts)), dim):
        base = ipts[combo[0]]
        diffs = [[a - b for a, b in zip(ipts[i], base)] for i in combo[1:]]
        normal = [
            (-1) ** c * _int_det([row[:c] + row[c + 1:] for row in diffs]) if dim > 1 else 1 for c in range(dim)
        ]
        if not any(normal):
            continue
        normal = el.primitive(normal)
        rhs = sum(map(mul, normal, base))
        if (normal, rhs) in seen:
            continue
        seen.add((normal, rhs))
        vals = [sum(map(mul, normal, p)) for p in ipts]
        if all(v >= rhs for v in vals):
            found.add(FacetIneq(normal, Fraction(rhs, scale)))
        elif all(v <= rhs for v in vals):
            found.add(FacetIneq(tuple(-x for x in normal), Fraction(-rhs, scale)))
    facets = tuple(sorted(found, key=lambda f: (f.normal, f.rhs)))
    verts = []
    for p in pts:
        tight = [f.normal for f in facets if f.slack(p) == 0]
        if tight and el.rank(tight) == dim:
            verts.append(p)
    return tuple(verts), facets


def _int_det(m: list[list[int]]) -> int:
    """Bareiss determinant of an integer matrix, staying in integers."""
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _integer_rows(ineqs: Sequence[FacetIneq]) -> list[tuple[list[int], int]]:
    """Each ``<u, n> >= b`` scaled by the denominator of ``b``."""
    out = []
    for q in ineqs:
        b = Fraction(q.rhs)
        out.append(([int(x) * b.denominator for x in q.normal], b.numerator))
    return out


def _int_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    a = [r[:] for r in rows if any(r)]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        p = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        piv = a[rank]
        for i in range(rank + 1, len(a)):
            if a[i][c]:
                f = a[i][c]
                a[i] = [x * piv[c] - f * y for x, y in zip(a[i], piv)]
        rank += 1
    return rank


def _basic_solutions(rows: list[tuple[list[int], int]], dim: int) -> list[tuple[tuple[int, ...], int]]:
    """Feasible basic solutions of integer rows ``<n, u> >= b`` as
    ``(numerators, denominator)`` with a positive common denominator."""
    found = {}
    for combo in combinations(rows, dim):
        d = _int_det([r for r, _ in combo])
        if d == 0:
            continue
        nums = [_int_det([r[:c] + [b] + r[c + 1:] for r, b in combo]) for c in range(dim)]
        if d < 0:
            d, nums = -d, [-x for x in nums]
        if all(sum(map(mul, r, nums)) >= b * d for r, b in rows):
            g = math.gcd(d, *nums)
            key = (tuple(x // g for x in nums), d // g)
            found[key] = None
    return list(found)


def vertices_of_inequalities(ineqs: Sequence[FacetIneq], dim: int) -> list[tuple]:
    """Vertices of ``{u : <u, n_k> >= b_k}`` by brute-force basis enumeration.

    Each candidate is solved by Cramer's rule in integer arithmetic and kept
    if it satisfies every inequality.
    """
    sols = _basic_solutions(_integer_rows([q for q in ineqs if any(q.normal)]), dim)
    return sorted(tuple(Fraction(x, d) for x in nums) for nums, d in sols)


def _polytope_parts(ineqs: Sequence[FacetIneq], dim: int):
    """Vertices and primitive facets of a full-dimensional ``{<u, n_k> >= b_k}``,
    or None if it is empty or flat."""
    useful = [q for q in ineqs if any(q.normal)]
    rows = _integer_rows(useful)
    sols = _basic_solutions(rows, dim)
    if len(sols) <= dim:
        return None
    lcm = math.lcm(*(d for _, d in sols))
    pts = [tuple(x * (lcm // d) for x in nums) for nums, d in sols]
    base = pts[0]
    if _int_rank([[a - b for a, b in zip(p, base)] for p in pts[1:]]) != dim:
        return None
    found = set()
    for q, (r, b) in zip(useful, rows):
        tight = [p for p in pts if sum(map(mul, r, p)) == b * lcm]
        if len(tight) < dim:
            continue
        t0 = tight[0]
        if _int_rank([[a - c for a, c in zip(p, t0)] for p in tight[1:]]) != dim - 1:
            continue
        prim = el.primitive(q.normal)
        scale = next(Fraction(a) / c for a, c in zip(q.normal, prim) if c)
        found.add(FacetIneq(prim, Fraction(q.rhs) / scale))
    verts = sorted(tuple(Fraction(x, lcm) for x in p) for p in pts)
    return tuple(verts), tuple(sorted(found, key=lambda f: (f.normal, f.rhs)))


@dataclass(frozen=True, eq=False)
class Polytope:
    """A full-dimensional convex polytope with rational vertices."""

    dim: int
    vertices: tuple[tuple[Fraction, ...], ...]
    facets: tuple[FacetIneq, ...]
    name: str | None = field(default=None, compare=False)

    @classmethod
    def from_points(cls, points: Iterable[Sequence], dim: int | None = None, name: str | None = None):
        pts = [el.vec(p) for p in points]
        if not pts:
            raise DegenerateInput("empty point set")
        if dim is None:
            dim = len(pts[0])
        _check_dim(dim)
        if any(len(p) != dim for p in pts):
            raise DegenerateInput("points of mixed dimension")
        verts, facets = _hull(pts, dim)
        return cls(dim, verts, facets, name)

    @classmethod
    def from_inequalities(cls, ineqs: Sequence[FacetIneq], dim: int, name: str | None = None):
        """Bounded intersection of half-spaces; DegenerateInput if empty or flat."""
        _check_dim(dim)
        for q in ineqs:
            if not any(q.normal) and q.rhs > 0:
                raise DegenerateInput("infeasible constant inequality")
        parts = _polytope_parts(ineqs, dim)
        if parts is None:
            raise DegenerateInput("inequalities do not cut out a full-dimensional polytope")
        # every basic feasible solution is a vertex of a full-dimensional polyhedron
        return cls(dim, parts[0], parts[1], name)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.dim == other.dim and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.dim, self.vertices))

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return f"{type(self).__name__}({label}dim={self.dim}, {len(self.vertices)} vertices, {len(self.facets)} facets)"

    def contains(self, u: Sequence) -> bool:
        return all(f.contains(u) for f in self.facets)

    def interior_contains(self, u: Sequence) -> bool:
        return all(f.slack(u) > 0 for f in self.facets)

    def facet_vertices(self, index: int) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(self.vertices[i] for i in sorted(self._tight_sets[index]))

    def transform(self, a: Sequence[Sequence], name: str | None = None):
        """Image under the linear map ``u -> a u``."""
        return type(self).from_points([el.matvec(a, v) for v in self.vertices], self.dim, name or self.name)

    @cached_property
    def _tight_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(
            frozenset(i for i, v in enumerate(self.vertices) if f.slack(v) == 0) for f in self.facets
        )

    @cached_property
    def triangulation(self) -> tuple[Simplex, ...]:
        """Pulling triangulation: cone from the lexicographically first vertex
        over a recursive triangulation of the faces not containing it."""
        rank_cache: dict[frozenset, int] = {}
        tri_cache: dict[frozenset, list[tuple[int, ...]]] = {}

        def face_dim(face: frozenset) -> int:
            if face not in rank_cache:
                rank_cache[face] = el.affine_rank([self.vertices[i] for i in sorted(face)])
            return rank_cache[face]

        def tri(face: frozenset, k: int) -> list[tuple[int, ...]]:
            if face in tri_cache:
                return tri_cache[face]
            if k == 0:
                out = [(min(face),)]
            else:
                v0 = min(face)
                subfaces = set()
                for tight in self._tight_sets:
                    g = face & tight
                    if v0 not in g and len(g) >= k and g != face and face_dim(g) == k - 1:
                        subfaces.add(g)
                out = []
                for g in sorted(subfaces, key=sorted):
                    out.extend((v0,) + s for s in tri(g, k - 1))
            tri_cache[face] = out
            return out

        whole = frozenset(range(len(self.vertices)))
        return tuple(Simplex(tuple(self.vertices[i] for i in s)) for s in tri(whole, self.dim))

    def triangulate(self) -> tuple[Simplex, ...]:
        return self.triangulation

    @cached_property
    def volume(self) -> Fraction:
        return sum((s.volume() for s in self.triangulation), Fraction(0))

    def facet_chart(self, index: int) -> "AffineChart":
        """Lattice chart of the facet's affine hull.

        The chart sends ``Z^(n-1)`` onto the affine lattice parallel to
        ``M ∩ normal^perp``, so Euclidean measure in chart coordinates is the
        lattice-normalised facet measure.
        """
        return self._charts[index]

    def facet_in_chart(self, index: int) -> "Polytope":
        return self._facets_in_charts[index]

    @cached_property
    def _charts(self) -> tuple["AffineChart", ...]:
        out = []
        for j, f in enumerate(self.facets):
            origin = self.facet_vertices(j)[0]
            out.append(AffineChart(origin, tuple(el.kernel_basis([list(f.normal)]))))
        return tuple(out)

    @cached_property
    def _facets_in_charts(self) -> tuple["Polytope", ...]:
        return tuple(
            Polytope.from_points([chart.to_chart(v) for v in self.facet_vertices(j)], self.dim - 1)
            for j, chart in enumerate(self._charts)
        )

    @cached_property
    def boundary_volume(self) -> Fraction:
        if self.dim < 2:
            raise UnsupportedDimension("boundary measure needs dimension >= 2")
        return sum((self.facet_in_chart(j).volume for j in range(len(self.facets))), Fraction(0))


@dataclass(frozen=True)
class AffineChart:
    """``w -> origin + sum_i w_i basis[i]`` with a lattice basis."""

    origin: tuple
    basis: tuple[tuple[int, ...], ...]

    @property
    def matrix(self) -> list:
        """Ambient-by-chart matrix whose columns are the basis vectors."""
        return el.transpose([list(map(Fraction, b)) for b in self.basis])

    def to_ambient(self, w: Sequence) -> tuple:
        return el.vadd(self.origin, el.matvec(self.matrix, w))

    def to_chart(self, u: Sequence) -> tuple:
        w = el.solve(self.matrix, el.vsub(u, self.origin))
        if w is None or self.to_ambient(w) != tuple(map(Fraction, u)):
            raise ValueError(f"{u} is not on the chart's affine hull")
        return w


class LatticePolytope(Polytope):
    """A full-dimensional polytope with vertices in ``Z^n``."""

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence], name: str | None = None) -> "LatticePolytope":
        pts = [el.vec(p) for p in points]
        if not pts:
            raise DegenerateInput("empty vertex list")
        if not all(el.is_integral(p) for p in pts):
            raise DegenerateInput("lattice polytope vertices must be integral")
        return cls.from_points(pts, len(pts[0]), name)

    def lattice_points(self, d: int = 1) -> list[tuple[int, ...]]:
        return lattice_points(self, d)

    def is_reflexive(self) -> ReflexivityReport:
        return is_reflexive(self)

    def dual(self) -> "LatticePolytope":
        return dual(self)


def from_vertices(points: Iterable[Sequence], name: str | None = None) -> LatticePolytope:
    return LatticePolytope.from_vertices(points, name)


def is_reflexive(p: Polytope) -> ReflexivityReport:
    origin = (Fraction(0),) * p.dim
    interior = p.interior_contains(origin)
    offending = tuple(f for f in p.facets if f.rhs != -1)
    return ReflexivityReport(interior and not offending, interior, offending)


def dual(p: LatticePolytope) -> LatticePolytope:
    if not is_reflexive(p).reflexive:
        raise NotReflexive(f"{p!r} is not reflexive; its dual is not a lattice polytope")
    name = f"dual of {p.name}" if p.name else None
    return LatticePolytope.from_vertices([f.normal for f in p.facets], name)


def lattice_points(p: Polytope, d: int = 1) -> list[tuple[int, ...]]:
    """All of ``dP ∩ Z^n`` in lexicographic order."""
    if d < 0:
        raise ValueError("dilation factor must be non-negative")
    if d == 0:
        return [(0,) * p.dim]
    ranges = []
    for coords in zip(*p.vertices):
        ranges.append(range(math.ceil(min(coords) * d), math.floor(max(coords) * d) + 1))
    # <n, u> >= r with integral left side is <n, u> >= ceil(r)
    checks = [(tuple(int(x) for x in f.normal), math.ceil(f.rhs * d)) for f in p.facets]
    flat = [(n[:-1], r) for n, r in checks if n[-1] == 0]
    sloped = [(n[:-1], n[-1], r) for n, r in checks if n[-1] != 0]
    out = []
    for prefix in product(*ranges[:-1]):
        if any(sum(map(mul, n, prefix)) < r for n, r in flat):
            continue
        lo, hi = ranges[-1].start, ranges[-1].stop - 1
        for n, last, r in sloped:
            rest = r - sum(map(mul, n, prefix))
            if last > 0:
                lo = max(lo, -(-rest // last))
            else:
                hi = min(hi, rest // last)
        out.extend(prefix + (x,) for x in range(lo, hi + 1))
    return out


def triangulate(p: Polytope) -> tuple[Simplex, ...]:
    return p.triangulation


def volume(p: Polytope) -> Fraction:
    return p.volume


def facet_chart(p: Polytope, index: int) -> AffineChart:
    return p.facet_chart(index)


def boundary_volume(p: Polytope) -> Fraction:
    return p.boundary_volume


# --- file format -------------------------------------------------------------


def polytope_to_dict(p: Polytope) -> dict:
    verts = [[int(x) if x.denominator == 1 else str(x) for x in v] for v in p.vertices]
    return {"name": p.name or "", "dim": p.dim, "vertices": verts}


def polytope_from_dict(data: dict) -> LatticePolytope:
    if not isinstance(data, dict):
        raise ParseError("polytope file must contain an object")
    missing = {"dim", "vertices"} - set(data)
    if missing:
        raise ParseError(f"polytope file is missing {sorted(missing)}")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"bad dim {dim!r}")
    verts = data["vertices"]
    if not isinstance(verts, list) or not verts:
        raise ParseError("vertices must be a non-empty array")
    for v in verts:
        if not isinstance(v, list) or len(v) != dim:
            raise ParseError(f"vertex {v!r} does not have {dim} coordinates")
        for x in v:
            if isinstance(x, bool) or not isinstance(x, int):
                raise ParseError(f"vertex coordinate {x!r} is not an integer")
    name = data.get("name") or None
    if name is not None and not isinstance(name, str):
        raise ParseError("name must be a string")
    try:
        return LatticePolytope.from_vertices(verts, name)
    except DegenerateInput as exc:
        raise ParseError(str(exc)) from exc
