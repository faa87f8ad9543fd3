"""Exact rational linear algebra and integer lattice algorithms.

Scalars are :class:`fractions.Fraction` (or plain ``int`` where the value is
known to be integral).  Vectors are tuples, matrices are lists of row lists.
Nothing in here ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from operator import mul
from math import gcd
from typing import Iterable, Sequence

from .errors import ShapeError

Rational = Fraction
RatVec = tuple  # tuple[Fraction, ...]
RatMat = list  # list[list[Fraction]]


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: a float has already lost the exact value.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if any(c in s for c in ".eE"):
            raise ValueError(f"decimal notation is not accepted: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def vec(xs: Iterable) -> tuple:
    return tuple(to_fraction(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> list:
    return [[to_fraction(x) for x in row] for row in rows]


def identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ShapeError(f"dot of vectors of length {len(u)} and {len(v)}")
    return Fraction(sum(map(mul, u, v)))


def vadd(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u) -> tuple:
    return tuple(c * a for a in u)


def transpose(m: Sequence[Sequence]) -> list:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    if a and len(a[0]) != len(b):
        raise ShapeError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x?")
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in a)


def is_integral(xs: Iterable) -> bool:
    return all(Fraction(x).denominator == 1 for x in xs)


def primitive(v: Sequence) -> tuple:
    """Smallest positive rational multiple of ``v`` that is a primitive integer vector."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive multiple")
    return tuple(x // g for x in ints)


def det(m: Sequence[Sequence]) -> Fraction:
    """Determinant by Bareiss fraction-free elimination."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ShapeError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rref(m: Sequence[Sequence]) -> tuple[list, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(m: Sequence[Sequence]) -> int:
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Basis of the right kernel ``{x : m x = 0}`` over the rationals."""
    if ncols is None:
        if not m:
            raise ShapeError("ncols required for an empty matrix")
        ncols = len(m[0])
    rows, pivots = rref(m) if m else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> tuple | None:
    """One solution of ``a x = b`` or None if inconsistent."""
    if not a:
        return None
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    rows, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(rows, pivots):
        x[p] = row[n]
    return tuple(x)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull; -1 for no points."""
    if not points:
        return -1
    p0 = points[0]
    diffs = [vsub(p, p0) for p in points[1:]]
    return rank(diffs) if diffs else 0


# --- integer lattice algorithms ------------------------------------------


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _as_int_matrix(m: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in m:
        r = []
        for x in row:
            fx = Fraction(x)
            if fx.denominator != 1:
                raise ValueError("integer matrix required")
            r.append(int(fx))
        out.append(r)
    return out


def hnf(m: Sequence[Sequence]) -> tuple[list[list[int]], list[list[int]]]:
    """Hermite normal form ``h = u @ m`` with ``u`` unimodular.

    ``h`` is in row echelon form with positive pivots; entries above each
    pivot lie in ``[0, pivot)``.  Zero rows come last.
    """
    a = _as_int_matrix(m)
    r = len(a)
    c = len(a[0]) if a else 0
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    pr = 0
    for col in range(c):
        if pr == r:
            break
        for i in range(pr + 1, r):
            if a[i][col] == 0:
                continue
            p, q = a[pr][col], a[i][col]
            g, x, y = _egcd(p, q)
            s, t = -q // g, p // g
            a[pr], a[i] = (
                [x * e + y * f for e, f in zip(a[pr], a[i])],
                [s * e + t * f for e, f in zip(a[pr], a[i])],
            )
            u[pr], u[i] = (
                [x * e + y * f for e, f in zip(u[pr], u[i])],
                [s * e + t * f for e, f in zip(u[pr], u[i])],
            )
        if a[pr][col] == 0:
            continue
        if a[pr][col] < 0:
            a[pr] = [-e for e in a[pr]]
            u[pr] = [-e for e in u[pr]]
        piv = a[pr][col]
        for i in range(pr):
            q = a[i][col] // piv
            if q:
                a[i] = [e - q * f for e, f in zip(a[i], a[pr])]
                u[i] = [e - q * f for e, f in zip(u[i], u[pr])]
        pr += 1
    return a, u


def kernel_basis(m: Sequence[Sequence], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Basis of the saturated integer kernel ``{x in Z^n : m x = 0}``.

    The basis vectors are returned as a list (they are the columns of the
    kernel matrix), in Hermite normal form so the result is canonical.
    """
    if ncols is None:
        if not m:
            raise ShapeError("ncols required for an empty matrix")
        ncols = len(m[0])
    if not m:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    h, u = hnf(transpose(_as_int_matrix(m)))
    rk = sum(1 for row in h if any(row))
    kern = u[rk:]
    if not kern:
        return []
    canon, _ = hnf(kern)
    return [tuple(row) for row in canon if any(row)]


def integer_solution(row: Sequence[int], rhs: int) -> tuple[int, ...]:
    """Some ``x in Z^n`` with ``<row, x> = rhs``; ``row`` must be primitive."""
    h, u = hnf([[int(x)] for x in row])
    if h[0][0] != 1:
        raise ValueError(f"{tuple(row)} is not primitive")
    return tuple(rhs * e for e in u[0])


def unimodular(m: Sequence[Sequence]) -> bool:
    return abs(det(m)) == 1


def inverse(m: Sequence[Sequence]) -> list:
    n = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in rows]


# --- sparse exact echelon forms -------------------------------------------
#
# The filtration engine works with modules of a few hundred monomials whose
# operators have one nonzero per column; dense elimination would be cubic.


def sparse_rref(rows: Iterable[dict]) -> list[tuple[int, dict]]:
    """Canonical RREF of sparse rows ``{col: Fraction}``.

    Returns ``[(pivot, row), ...]`` sorted by pivot, each row normalised to
    pivot entry 1 and reduced against every other pivot.
    """
    piv: dict[int, dict] = {}
    for r in rows:
        v = {k: Fraction(x) for k, x in r.items() if x != 0}
        while v:
            c = min(v)
            if c in piv:
                f = v[c]
                for k, x in piv[c].items():
                    y = v.get(k, 0) - f * x
                    if y:
                        v[k] = y
                    else:
                        v.pop(k, None)
            else:
                inv = 1 / v[c]
                piv[c] = {k: x * inv for k, x in v.items()}
                break
    for c in sorted(piv, reverse=True):
        row = piv[c]
        for c2, row2 in piv.items():
            if c2 < c and c in row2:
                f = row2[c]
                for k, x in row.items():
                    y = row2.get(k, 0) - f * x
                    if y:
                        row2[k] = y
                    else:
                        row2.pop(k, None)
    return sorted(piv.items())


def sparse_nullspace(rows: Iterable[dict], ncols: int) -> list[dict]:
    """Kernel basis of a sparse matrix, one vector per free column."""
    echelon = sparse_rref(rows)
    pivots = {p for p, _ in echelon}
    by_col: dict[int, list[tuple[int, Fraction]]] = {}
    for p, row in echelon:
        for k, x in row.items():
            if k != p:
                by_col.setdefault(k, []).append((p, x))
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = {f: Fraction(1)}
        for p, x in by_col.get(f, ()):
            v[p] = -x
        basis.append(v)
    return basis
