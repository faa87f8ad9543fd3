import itertools
import math
import random
from fractions import Fraction

import pytest

from torik import exact_linear as el
from torik.errors import InvalidInput, InvalidMonomial, InvalidUAction
from torik.filtration import (
    FiltrationKind,
    Monomial,
    MultiplicativityResult,
    Subspace,
    UModule,
    binomial_action,
    check_multiplicative,
    closed_form_membership,
    fiber_degree,
    filtration,
    iota,
    jordan_block_sizes,
    polynomial_module,
    section_module,
    section_tables,
    valuation,
)
from torik.fixtures import degree7_closed_form, degree7_module, vn_closed_form, vn_module
from torik.polytope import lattice_points
from torik.roots import normalize_unique_unipotent

from conftest import PAPER_POLYTOPES, fixture_polytope

LOEWY, SOCLE = FiltrationKind.LOEWY, FiltrationKind.SOCLE


def presentation(name):
    return normalize_unique_unipotent(fixture_polytope(name))


def test_section_module_fig2():
    np_ = presentation("paper:fig2")
    m = section_module(np_, 1)
    assert m.dim == 7
    fibre = {l: m.index(Monomial(1, (0, l))) for l in (-1, 0, 1)}
    op = m.derivations[0]
    assert op[fibre[1]] == {fibre[0]: 2}
    assert op[fibre[0]] == {fibre[-1]: 1}
    assert fibre[-1] not in op


def test_section_module_degree_zero():
    m = section_module(presentation("paper:smooth3fold"), 0)
    assert m.dim == 1 and m.derivations == ({},)


def test_section_module_smooth3fold_fibre():
    m = section_module(presentation("paper:smooth3fold"), 1)
    assert sorted(x.exponent[2] for x in m.basis if x.exponent[:2] == (0, 1)) == [-1, 0, 1]


def test_polynomial_module():
    m = degree7_module(1)
    assert m.dim == 8
    d_alpha = m.derivations[0]
    src, dst = m.index(Monomial(1, (2, 0, 1))), m.index(Monomial(1, (1, 0, 2)))
    assert d_alpha[src] == {dst: 2}
    m2 = degree7_module(2)
    a, b = m2.dense(0), m2.dense(1)
    assert el.matmul(a, b) == el.matmul(b, a)


def test_module_validation():
    basis = (Monomial(1, (0,)), Monomial(1, (1,)))
    with pytest.raises(InvalidUAction):
        UModule(basis, ({0: {1: Fraction(1)}, 1: {0: Fraction(1)}},))
    with pytest.raises(InvalidUAction):
        UModule(basis, ({0: {5: Fraction(1)}},))
    with pytest.raises(InvalidUAction):
        UModule(basis, ({1: {0: Fraction(1)}}, {0: {1: Fraction(1)}}))
    with pytest.raises(InvalidUAction):
        polynomial_module("xy", lambda d: [(1, 0)], [{"x": "y"}], 1)


def test_vn_example():
    for n in range(7):
        m = vn_module(n)
        lo, so = filtration(m, LOEWY), filtration(m, SOCLE)
        for i in range(n + 2):
            assert {x.exponent[0] for x in lo.monomials(i)} == set(range(n - i + 1))
            assert {x.exponent[0] for x in so.monomials(i)} == set(range(min(i, n) + 1))
        assert lo.monomial_table() == vn_closed_form(n, LOEWY).monomial_table()
        assert so.monomial_table() == vn_closed_form(n, SOCLE).monomial_table()


def test_degree7_example():
    lo = filtration(degree7_module(1), LOEWY)
    assert lo.step(2).dim == 3
    for d in (1, 2, 3):
        so = filtration(degree7_module(d), SOCLE)
        assert so.monomials(1) == {
            Monomial(d, (1, 0, 3 * d - 1)),
            Monomial(d, (0, 1, 3 * d - 1)),
            Monomial(d, (0, 0, 3 * d)),
        }


@pytest.mark.parametrize("d", [1, 2, 3])
def test_degree7_closed_forms_and_shift(d):
    m = degree7_module(d)
    lo, so = filtration(m, LOEWY), filtration(m, SOCLE)
    assert lo.monomial_table() == degree7_closed_form(d, LOEWY).monomial_table()
    assert so.monomial_table() == degree7_closed_form(d, SOCLE).monomial_table()
    for i in range(-2, 3 * d + 3):
        assert so.step(i) == lo.step(3 * d - i)


def test_trivial_action():
    basis = tuple(Monomial(1, (k,)) for k in range(3))
    m = UModule(basis, ({},))
    assert filtration(m, LOEWY).step(1).dim == 0
    assert filtration(m, SOCLE).step(0).dim == 3


def test_closed_form_examples():
    np_ = presentation("paper:fig2")
    so = closed_form_membership(np_, 1, SOCLE)
    assert {x.exponent for x in so.monomials(0)} == {(-1, -1), (0, -1), (1, -1)}
    full = frozenset(so.basis)
    assert so.monomials(50) == full
    assert closed_form_membership(np_, 1, LOEWY).monomials(-1) == full


@pytest.mark.parametrize("name", PAPER_POLYTOPES)
def test_engine_matches_closed_form(name):
    np_ = presentation(name)
    for kind in (LOEWY, SOCLE):
        engine = section_tables(np_, 4, kind, "derivation")
        closed = section_tables(np_, 4, kind, "closed-form")
        for d in range(5):
            assert engine[d].dims() == closed[d].dims()
            assert engine[d].monomial_table() == closed[d].monomial_table()


@pytest.mark.parametrize("name", PAPER_POLYTOPES)
def test_fibres_are_polynomial_modules(name):
    """Jordan blocks of D on R_d are the fibre sizes floor(d h(u'/d)) + d + 1."""
    np_ = presentation(name)
    for d in (1, 2):
        m = section_module(np_, d)
        fibres = {x.exponent[:-1] for x in m.basis}
        expected = sorted((fiber_degree(np_, d, u) + 1 for u in fibres), reverse=True)
        assert jordan_block_sizes(m.dense(0)) == expected


def test_jordan_block_sizes_vn():
    for n in range(5):
        assert jordan_block_sizes(vn_module(n).dense(0)) == [n + 1]


def _check_stability(m, lo, so):
    n = m.dim
    for op in m.derivations:
        for i in range(lo.top + 1):
            images = [{r: c for r, c in _apply_dense(op, v).items()} for v in lo.step(i).vectors()]
            assert Subspace.span(n, images).issubspace(lo.step(i + 1))
        for i in range(so.top + 1):
            images = [_apply_dense(op, v) for v in so.step(i).vectors()]
            assert Subspace.span(n, images).issubspace(so.step(i))
    assert lo.step(n + 1).dim == 0 and so.step(n + 1).dim == n


def _apply_dense(op, v):
    out = {}
    for j, c in v.items():
        for i, a in op.get(j, {}).items():
            out[i] = out.get(i, 0) + a * c
    return {i: c for i, c in out.items() if c}


@pytest.mark.parametrize("name", PAPER_POLYTOPES)
def test_exhaustive_and_stable(name):
    np_ = presentation(name)
    for d in (1, 2):
        m = section_module(np_, d)
        _check_stability(m, filtration(m, LOEWY), filtration(m, SOCLE))
    m = degree7_module(2)
    _check_stability(m, filtration(m, LOEWY), filtration(m, SOCLE))


def _int_matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _words(mats, length):
    """Products of ``length`` derivation matrices; they commute, so one per
    exponent vector suffices."""
    n = len(mats[0])
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    for combo in itertools.combinations_with_replacement(range(len(mats)), length):
        prod = ident
        for k in combo:
            prod = _int_matmul(prod, mats[k])
        yield prod


def _int_dense(m, k):
    return [[int(x) for x in row] for row in m.dense(k)]


def test_socle_against_products_of_derivations():
    """G^S_i is the joint kernel of all products of i + 1 derivations."""
    for d in (1, 2):
        m = degree7_module(d)
        so = filtration(m, SOCLE)
        mats = [_int_dense(m, k) for k in range(len(m.derivations))]
        for i in range(so.top + 1):
            stacked = [row for prod in _words(mats, i + 1) for row in prod if any(row)]
            kernel = el.nullspace(stacked, m.dim) if stacked else [
                tuple(int(a == b) for b in range(m.dim)) for a in range(m.dim)
            ]
            assert len(kernel) == so.step(i).dim
            assert Subspace.span(m.dim, [dict(enumerate(v)) for v in kernel]) == so.step(i)


def test_loewy_against_products_of_derivations():
    """F^L_i is the span of the images of all products of i derivations."""
    m = degree7_module(2)
    lo = filtration(m, LOEWY)
    mats = [_int_dense(m, k) for k in range(len(m.derivations))]
    for i in range(1, lo.top + 2):
        cols = [col for prod in _words(mats, i) for col in zip(*prod) if any(col)]
        assert (el.rank(cols) if cols else 0) == lo.step(i).dim


def test_exponential_of_derivation():
    """exp(a D) equals the root action on characters."""
    np_ = presentation("paper:fig2")
    alpha = Fraction(3, 2)
    for d in (1, 2):
        m = section_module(np_, d)
        dmat = m.dense(0)
        n = m.dim
        expo = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        power = expo
        for k in range(1, n + 1):
            power = el.matmul(power, dmat)
            expo = [[a + alpha**k / math.factorial(k) * b for a, b in zip(r1, r2)] for r1, r2 in zip(expo, power)]
        action = binomial_action(np_, d, alpha)
        for j in range(n):
            col = {i: expo[i][j] for i in range(n) if expo[i][j]}
            assert col == {i: c for i, c in action[j].items() if c}


def test_iota_examples():
    np_ = presentation("paper:fig2")
    assert iota(np_, Monomial(1, (0, -1))) == 0
    for d in (1, 2, 3):
        for u in lattice_points(np_.polytope, d):
            if u[-1] == -d:
                assert iota(np_, Monomial(d, u)) == 0
    with pytest.raises(InvalidMonomial):
        iota(np_, Monomial(1, (0, 5)))


@pytest.mark.parametrize("name", PAPER_POLYTOPES)
def test_iota_additive(name):
    np_ = presentation(name)
    monos = {d: [Monomial(d, u) for u in lattice_points(np_.polytope, d)] for d in range(3)}
    for a, b in [(0, 1), (1, 1), (1, 2), (2, 2)]:
        for x in monos[a]:
            for y in monos[b]:
                assert iota(np_, x * y) == iota(np_, x) + iota(np_, y)


def test_valuation_examples():
    np_ = presentation("paper:fig2")
    x, y = Monomial(1, (0, 1)), Monomial(1, (0, -1))
    assert valuation(np_, x, x) == 0
    assert valuation(np_, x, y) == -2
    assert valuation(np_, x * x, y * x) == valuation(np_, x, y)
    with pytest.raises(InvalidInput):
        valuation(np_, x, x * x)


def test_valuation_well_defined_random():
    np_ = presentation("paper:smooth3fold")
    rng = random.Random(4)
    pts = {d: [Monomial(d, u) for u in lattice_points(np_.polytope, d)] for d in (1, 2)}
    for _ in range(200):
        x, y = rng.choice(pts[1]), rng.choice(pts[1])
        z = rng.choice(pts[rng.choice((1, 2))])
        assert valuation(np_, x * z, y * z) == valuation(np_, x, y)


def test_multiplicativity():
    np_ = presentation("paper:fig2")
    tables = section_tables(np_, 4, SOCLE)
    assert check_multiplicative(tables, 4).holds
    d7 = {d: filtration(degree7_module(d), SOCLE) for d in range(4)}
    assert check_multiplicative(d7, 3).holds


def test_multiplicativity_negative_control():
    np_ = presentation("paper:fig2")
    tables = section_tables(np_, 2, SOCLE)
    victim = Monomial(2, (0, 0))
    i = iota(np_, victim)
    tables[2] = tables[2].without(i, victim)
    res = check_multiplicative(tables, 2)
    assert not res.holds
    x, i1, y, j1, xy = res.witness
    assert xy == x * y == victim and i1 + j1 == i


def test_loewy_multiplicativity_hook():
    """Reported, not asserted either way."""
    tables = section_tables(presentation("paper:fig2"), 3, LOEWY)
    assert isinstance(check_multiplicative(tables, 3), MultiplicativityResult)


def test_table_dict():
    t = filtration(vn_module(3), SOCLE)
    assert t.to_dict() == {"kind": "socle", "dims": [1, 2, 3, 4]}
