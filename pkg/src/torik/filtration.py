"""Loewy and Socle filtrations of modules over a unipotent group.

A module is one graded piece ``R_d`` with a monomial basis and a finite list
of commuting nilpotent derivations (the Lie algebra action).  Then

* Loewy: ``F_0 = V`` and ``F_i = span{D w : D a generator, w in F_{i-1}}``,
  since a quotient is semisimple exactly when the action on it is trivial;
* Socle: ``G_i = {x : D_{i+1} ... D_1 x = 0 for all generators}``, computed
  as the iterated preimage ``G_i = {x : D x in G_{i-1} for all D}``.

Subspaces are stored as canonical sparse RREF bases over the monomial basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping, Sequence

from . import exact_linear as el
from .errors import InvalidInput, InvalidMonomial, InvalidUAction
from .polytope import lattice_points
from .roots import NormalizedPresentation


class FiltrationKind(str, Enum):
    LOEWY = "loewy"
    SOCLE = "socle"


@dataclass(frozen=True, order=True)
class Monomial:
    degree: int
    exponent: tuple[int, ...]

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.degree + other.degree, tuple(a + b for a, b in zip(self.exponent, other.exponent)))

    def to_dict(self) -> dict:
        return {"degree": self.degree, "exponent": list(self.exponent)}


# sparse operators: column j -> {row i: coefficient}, i.e. D(basis_j) = sum_i c basis_i
SparseOp = dict


def _apply(op: SparseOp, v: Mapping[int, Fraction]) -> dict:
    out: dict[int, Fraction] = {}
    for j, x in v.items():
        for i, c in op.get(j, {}).items():
            y = out.get(i, 0) + c * x
            if y:
                out[i] = y
            else:
                out.pop(i, None)
    return out


def _transpose(op: SparseOp) -> SparseOp:
    out: dict[int, dict] = {}
    for j, col in op.items():
        for i, c in col.items():
            out.setdefault(i, {})[j] = c
    return out


def _row_times(op_t: SparseOp, y: Mapping[int, Fraction]) -> dict:
    """The functional ``x -> y . (op x)`` as a sparse row; takes the transpose."""
    return _apply(op_t, y)


@dataclass(frozen=True)
class Subspace:
    """Canonical RREF basis; ``rows`` is a tuple of ``(pivot, ((col, value), ...))``."""

    ambient: int
    rows: tuple

    @classmethod
    def span(cls, ambient: int, vectors: Iterable[Mapping[int, Fraction]]) -> "Subspace":
        ech = el.sparse_rref(vectors)
        return cls(ambient, tuple((p, tuple(sorted(r.items()))) for p, r in ech))

    @classmethod
    def coordinate(cls, ambient: int, indices: Iterable[int]) -> "Subspace":
        return cls(ambient, tuple((i, ((i, Fraction(1)),)) for i in sorted(set(indices))))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def vectors(self) -> list[dict]:
        return [dict(r) for _, r in self.rows]

    def coordinate_indices(self) -> frozenset[int] | None:
        """Index set if this is spanned by basis monomials, else None."""
        if all(len(r) == 1 for _, r in self.rows):
            return frozenset(p for p, _ in self.rows)
        return None

    def annihilator(self) -> list[dict]:
        """Rows of a matrix whose kernel is this subspace."""
        pivots = {p for p, _ in self.rows}
        by_col: dict[int, list] = {}
        for p, r in self.rows:
            for c, x in r:
                if c != p:
                    by_col.setdefault(c, []).append((p, x))
        out = []
        for f in range(self.ambient):
            if f in pivots:
                continue
            y = {f: Fraction(1)}
            for p, x in by_col.get(f, ()):
                y[p] = -x
            out.append(y)
        return out

    def contains(self, v: Mapping[int, Fraction]) -> bool:
        return Subspace.span(self.ambient, self.vectors() + [dict(v)]).dim == self.dim

    def issubspace(self, other: "Subspace") -> bool:
        return Subspace.span(self.ambient, other.vectors() + self.vectors()).dim == other.dim


@dataclass(frozen=True)
class UModule:
    basis: tuple[Monomial, ...]
    derivations: tuple[SparseOp, ...]
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {m: i for i, m in enumerate(self.basis)})
        n = len(self.basis)
        for k, d in enumerate(self.derivations):
            if any(not 0 <= j < n or not all(0 <= i < n for i in col) for j, col in d.items()):
                raise InvalidUAction(f"derivation {k} leaves the basis")
        for a, b in itertools.combinations(self.derivations, 2):
            for j in range(n):
                e = {j: Fraction(1)}
                if _apply(a, _apply(b, e)) != _apply(b, _apply(a, e)):
                    raise InvalidUAction("derivations do not commute")
        for k, d in enumerate(self.derivations):
            for j in range(n):
                v: dict = {j: Fraction(1)}
                for _ in range(n):
                    v = _apply(d, v)
                    if not v:
                        break
                if v:
                    raise InvalidUAction(f"derivation {k} is not nilpotent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, m: Monomial) -> int:
        return self._index[m]

    def dense(self, k: int) -> list[list[Fraction]]:
        """Dense matrix of derivation ``k`` (columns are images of basis vectors)."""
        n = self.dim
        out = [[Fraction(0)] * n for _ in range(n)]
        for j, col in self.derivations[k].items():
            for i, c in col.items():
                out[i][j] = c
        return out


@dataclass(frozen=True)
class FiltrationTable:
    """Steps ``0..top`` of a Loewy (decreasing) or Socle (increasing) filtration.

    Outside the stored range the usual conventions apply: Loewy steps are
    everything for ``i < 0`` and zero past the end, Socle steps are zero for
    ``i < 0`` and everything past the end.
    """

    kind: FiltrationKind
    basis: tuple[Monomial, ...]
    steps: tuple[Subspace, ...]

    @property
    def top(self) -> int:
        return len(self.steps) - 1

    def step(self, i: int) -> Subspace:
        n = len(self.basis)
        full, zero = Subspace.coordinate(n, range(n)), Subspace(n, ())
        if i < 0:
            return full if self.kind is FiltrationKind.LOEWY else zero
        if i > self.top:
            return zero if self.kind is FiltrationKind.LOEWY else full
        return self.steps[i]

    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.steps)

    def monomials(self, i: int) -> frozenset[Monomial]:
        idx = self.step(i).coordinate_indices()
        if idx is None:
            raise ValueError(f"step {i} is not spanned by monomials")
        return frozenset(self.basis[k] for k in idx)

    def monomial_table(self) -> tuple[frozenset[Monomial], ...]:
        return tuple(self.monomials(i) for i in range(len(self.steps)))

    def without(self, i: int, m: Monomial) -> "FiltrationTable":
        """Copy with monomial ``m`` removed from step ``i`` (negative controls)."""
        k = self.basis.index(m)
        idx = set(self.step(i).coordinate_indices()) - {k}
        steps = list(self.steps)
        steps[i] = Subspace.coordinate(len(self.basis), idx)
        return replace(self, steps=tuple(steps))

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "dims": list(self.dims())}


# --- module constructors ------------------------------------------------------


def section_module(np_: NormalizedPresentation, d: int) -> UModule:
    """``R_d`` with the infinitesimal root action.

    In normalised coordinates the root acts on the fibre over ``u'`` by
    ``chi_l -> sum_j binom(l+d, j) a^j chi_(l-j)``; its derivative at ``a = 0``
    is ``D chi_l = (l + d) chi_(l-1)``.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    basis = tuple(Monomial(d, u) for u in lattice_points(np_.polytope, d))
    index = {m.exponent: i for i, m in enumerate(basis)}
    op: SparseOp = {}
    for j, m in enumerate(basis):
        *up, l = m.exponent
        if l + d:
            op[j] = {index[tuple(up) + (l - 1,)]: Fraction(l + d)}
    return UModule(basis, (op,))


Polynomial = Mapping[tuple[int, ...], object]


def polynomial_module(
    variables: Sequence[str],
    monomials: Callable[[int], Iterable[Sequence[int]]],
    derivations: Sequence[Mapping[str, Polynomial | str]],
    d: int,
) -> UModule:
    """Degree-``d`` piece of a polynomial ring under derivations.

    ``monomials(d)`` lists the admissible exponent vectors.  Each derivation is
    given by the images of the variables, i.e. the coefficient of ``a`` in a
    substitution such as ``X -> X + a Z``; an image is either a variable name
    or a polynomial ``{exponent: coefficient}``.  Variables not mentioned are
    killed.
    """
    nv = len(variables)
    basis = tuple(Monomial(d, tuple(e)) for e in monomials(d))
    index = {m.exponent: i for i, m in enumerate(basis)}
    ops = []
    for rule in derivations:
        images: dict[int, dict] = {}
        for var, img in rule.items():
            if var not in variables:
                raise InvalidUAction(f"unknown variable {var!r}")
            if isinstance(img, str):
                e = [0] * nv
                e[variables.index(img)] = 1
                img = {tuple(e): 1}
            images[variables.index(var)] = {tuple(k): el.to_fraction(c) for k, c in img.items()}
        op: SparseOp = {}
        for j, m in enumerate(basis):
            col: dict[tuple, Fraction] = {}
            for v, img in images.items():
                a = m.exponent[v]
                if not a:
                    continue
                rest = list(m.exponent)
                rest[v] -= 1
                for e, c in img.items():
                    key = tuple(x + y for x, y in zip(rest, e))
                    col[key] = col.get(key, 0) + a * c
            col = {k: c for k, c in col.items() if c}
            if not col:
                continue
            try:
                op[j] = {index[k]: c for k, c in col.items()}
            except KeyError as exc:
                raise InvalidUAction(f"derivation maps {m.exponent} outside the module") from exc
        ops.append(op)
    return UModule(basis, tuple(ops))


# --- filtrations -------------------------------------------------------------


def loewy_filtration(m: UModule) -> FiltrationTable:
    n = m.dim
    steps = [Subspace.coordinate(n, range(n))]
    while steps[-1].dim:
        prev = steps[-1].vectors()
        images = (_apply(op, v) for op in m.derivations for v in prev)
        nxt = Subspace.span(n, images)
        if nxt.dim == steps[-1].dim:
            raise InvalidUAction("Loewy series does not terminate; action is not unipotent")
        steps.append(nxt)
    return FiltrationTable(FiltrationKind.LOEWY, m.basis, tuple(steps))


def socle_filtration(m: UModule) -> FiltrationTable:
    n = m.dim
    steps: list[Subspace] = []
    prev = Subspace(n, ())
    transposed = [_transpose(op) for op in m.derivations]
    while prev.dim < n or not steps:
        ann = prev.annihilator()
        rows = [r for op_t in transposed for y in ann if (r := _row_times(op_t, y))]
        cur = Subspace.span(n, el.sparse_nullspace(rows, n))
        if steps and cur.dim == prev.dim:
            raise InvalidUAction("Socle series does not terminate; action is not unipotent")
        steps.append(cur)
        prev = cur
    return FiltrationTable(FiltrationKind.SOCLE, m.basis, tuple(steps))


def filtration(m: UModule, kind: FiltrationKind | str) -> FiltrationTable:
    kind = FiltrationKind(kind)
    return loewy_filtration(m) if kind is FiltrationKind.LOEWY else socle_filtration(m)


def closed_form_membership(np_: NormalizedPresentation, d: int, kind: FiltrationKind | str) -> FiltrationTable:
    """Tables straight from the membership rules: ``chi_(u',l)`` lies in
    ``F^L_i`` iff ``l <= floor(d h(u'/d)) - i`` and in ``G^S_i`` iff ``l <= i - d``."""
    kind = FiltrationKind(kind)
    basis = tuple(Monomial(d, u) for u in lattice_points(np_.polytope, d))
    n = len(basis)
    if kind is FiltrationKind.LOEWY:
        tops = [np_.dilated_height_floor(d, m.exponent[:-1]) for m in basis]
        steps = []
        i = 0
        while True:
            idx = [k for k, m in enumerate(basis) if m.exponent[-1] <= tops[k] - i]
            steps.append(Subspace.coordinate(n, idx))
            if not idx:
                break
            i += 1
    else:
        steps = []
        i = 0
        while True:
            idx = [k for k, m in enumerate(basis) if m.exponent[-1] <= i - d]
            steps.append(Subspace.coordinate(n, idx))
            if len(idx) == n:
                break
            i += 1
    return FiltrationTable(kind, basis, tuple(steps))


def jordan_block_sizes(matrix: Sequence[Sequence]) -> list[int]:
    """Jordan block sizes of a nilpotent matrix, from ranks of its powers."""
    n = len(matrix)
    op: SparseOp = {}
    for i, row in enumerate(matrix):
        for j, x in enumerate(row):
            if x:
                op.setdefault(j, {})[i] = Fraction(x)
    ranks = [n]
    cols = [{j: Fraction(1)} for j in range(n)]
    while ranks[-1]:
        cols = [c for c in (_apply(op, v) for v in cols) if c]
        ranks.append(len(el.sparse_rref(cols)))
        if len(ranks) > n + 1:
            raise ValueError("matrix is not nilpotent")
    # blocks of size >= k: rank(N^(k-1)) - rank(N^k)
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k, cnt in enumerate(at_least, start=1):
        nxt = at_least[k] if k < len(at_least) else 0
        sizes += [k] * (cnt - nxt)
    return sorted(sizes, reverse=True)


# --- iota and the induced valuation ---------------------------------------


def iota(np_: NormalizedPresentation, mono: Monomial) -> int:
    """Smallest ``i`` with the monomial in ``G^S_i``, which is ``l + d``."""
    d, u = mono.degree, mono.exponent
    if d < 0 or len(u) != np_.dim:
        raise InvalidMonomial(f"{mono} is not a monomial of the section ring")
    if not all(sum(a * b for a, b in zip(f.normal, u)) >= d * f.rhs for f in np_.polytope.facets):
        raise InvalidMonomial(f"{u} is not in {d}P")
    return u[-1] + d


def valuation(np_: NormalizedPresentation, x: Monomial, y: Monomial) -> int:
    """``v(x/y) = iota(y) - iota(x)`` for monomials of equal degree."""
    if x.degree != y.degree:
        raise InvalidInput(f"degrees differ: {x.degree} vs {y.degree}")
    return iota(np_, y) - iota(np_, x)


@dataclass(frozen=True)
class MultiplicativityResult:
    holds: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_multiplicative(tables: Mapping[int, FiltrationTable], max_degree: int) -> MultiplicativityResult:
    """Check ``step_i(R_a) . step_j(R_b) ⊆ step_(i+j)(R_(a+b))`` on monomials.

    ``tables`` maps degree to a monomial filtration table; all pairs with
    ``a + b <= max_degree`` are checked for ``i, j >= 0``.  The witness on
    failure is ``(x, i, y, j, xy)``.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    if not tables:
        raise ValueError("no tables given")
    kind = next(iter(tables.values())).kind
    sets = {d: [t.monomials(i) for i in range(t.top + 1)] for d, t in tables.items()}

    def members(d: int, i: int) -> frozenset:
        s = sets[d]
        if i <= len(s) - 1:
            return s[i]
        return frozenset() if kind is FiltrationKind.LOEWY else frozenset(tables[d].basis)

    for a in range(max_degree + 1):
        for b in range(a, max_degree + 1 - a):
            if a not in tables or b not in tables or a + b not in tables:
                continue
            for i in range(len(sets[a])):
                for j in range(len(sets[b])):
                    target = members(a + b, i + j)
                    for x in sets[a][i]:
                        for y in sets[b][j]:
                            if x * y not in target:
                                return MultiplicativityResult(False, (x, i, y, j, x * y))
    return MultiplicativityResult(True)


def section_tables(np_: NormalizedPresentation, max_degree: int, kind: FiltrationKind | str, engine: str = "derivation") -> dict[int, FiltrationTable]:
    kind = FiltrationKind(kind)
    if engine == "derivation":
        return {d: filtration(section_module(np_, d), kind) for d in range(max_degree + 1)}
    if engine == "closed-form":
        return {d: closed_form_membership(np_, d, kind) for d in range(max_degree + 1)}
    raise ValueError(f"unknown engine {engine!r}")


def fiber_degree(np_: NormalizedPresentation, d: int, u_prime: Sequence[int]) -> int:
    """``floor(d h(u'/d)) + d``: the fibre over ``u'`` is isomorphic to the
    polynomials of at most this degree under ``d/dx``."""
    return np_.dilated_height_floor(d, tuple(u_prime)) + d


def binomial_action(np_: NormalizedPresentation, d: int, alpha: Fraction) -> dict:
    """The group element ``y_m(alpha)`` on ``R_d``: basis index -> image vector."""
    basis = [Monomial(d, u) for u in lattice_points(np_.polytope, d)]
    index = {m.exponent: i for i, m in enumerate(basis)}
    out = {}
    for k, m in enumerate(basis):
        *up, l = m.exponent
        out[k] = {index[tuple(up) + (l - j,)]: comb(l + d, j) * alpha**j for j in range(l + d + 1)}
    return out
