import random
from fractions import Fraction

import pytest

from torik import exact_linear as el
from torik.errors import NotReflexive, UnsupportedAutomorphismStructure
from torik.fixtures import FIXTURES
from torik.plfunc import piece
from torik.polytope import LatticePolytope
from torik.roots import (
    TRIVIAL_NOTICE,
    RootKind,
    assemble,
    enumerate_roots,
    loewy_function,
    loewy_socle_invariants,
    normalize_unique_unipotent,
    socle_function,
)

from conftest import PAPER_POLYTOPES, fixture_polytope, random_unimodular

CROSS = LatticePolytope.from_vertices([(1, 0), (-1, 0), (0, 1), (0, -1)])


def kinds(p):
    roots = enumerate_roots(p)
    return sorted((r.kind.value, r.point) for r in roots)


def test_roots_examples(fig2, smooth3fold):
    assert kinds(smooth3fold) == [
        ("semisimple", (-1, 0, 0)),
        ("semisimple", (1, 0, 0)),
        ("unipotent", (0, 0, -1)),
    ]
    assert enumerate_roots(CROSS) == []
    assert kinds(fig2) == [("unipotent", (0, -1))]


def test_root_facet_pairing(paper_polytope):
    for r in enumerate_roots(paper_polytope):
        vals = [el.dot(f.normal, r.point) for f in paper_polytope.facets]
        assert vals[r.facet_index] == -1
        assert all(v >= 0 for i, v in enumerate(vals) if i != r.facet_index)


def test_root_kind_symmetry(paper_polytope):
    roots = enumerate_roots(paper_polytope)
    points = {r.point for r in roots}
    for r in roots:
        neg = tuple(-x for x in r.point)
        assert (r.kind is RootKind.SEMISIMPLE) == (neg in points)


def test_not_reflexive():
    with pytest.raises(NotReflexive):
        enumerate_roots(LatticePolytope.from_vertices([(2, 0), (-2, 0), (0, 1), (0, -1)]))


def test_normalize_smooth3fold(smooth3fold):
    np_ = normalize_unique_unipotent(smooth3fold)
    assert np_.transform == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert np_.base_polytope == LatticePolytope.from_vertices([(1, 1), (0, 1), (-2, -1), (1, -1)])
    for u in np_.base_polytope.lattice_points(1):
        assert np_.height(u) == min(1, 1 + u[1])


def test_normalize_fig2(fig2):
    np_ = normalize_unique_unipotent(fig2)
    assert np_.base_polytope == LatticePolytope.from_vertices([(-1,), (1,)])
    assert np_.height.mode.value == "min"
    assert set(np_.height.pieces) == {piece([-1], 1), piece([1], 1)}
    assert np_.root_image == (0, -1)


def test_normalize_sheared_fig2(fig2):
    sheared = fig2.transform([[1, 1], [0, 1]])
    np_ = normalize_unique_unipotent(sheared)
    assert np_.transform != ((1, 0), (0, 1))
    base = np_.base_polytope
    assert base.volume == 2
    # F' is [-1, 1] up to x -> -x, and h is 1 - |x| in either orientation
    assert sorted(v[0] for v in base.vertices) == [-1, 1]
    for x in (-1, 0, 1):
        assert np_.height((x,)) == 1 - abs(x)


@pytest.mark.parametrize("name", PAPER_POLYTOPES)
def test_normalization_soundness(name):
    p = fixture_polytope(name)
    np_ = normalize_unique_unipotent(p)
    assert el.unimodular(np_.transform)
    assert el.matvec(np_.transform, np_.root.point) == np_.root_image
    assert assemble(np_.base_polytope, np_.height).vertices == np_.polytope.vertices
    bottom = {v[:-1] for v in np_.polytope.vertices if v[-1] == -1}
    assert bottom == set(np_.base_polytope.vertices)
    assert np_.polytope == p.transform(np_.transform)


def test_loewy_and_socle_functions(fig2, smooth3fold):
    f = loewy_function(normalize_unique_unipotent(fig2))
    assert set(f.pieces) == {piece([-1, -1], 1), piece([1, -1], 1)}
    f3 = loewy_function(normalize_unique_unipotent(smooth3fold))
    assert set(f3.pieces) == {piece([0, 0, -1], 1), piece([0, 1, -1], 1)}
    for name in PAPER_POLYTOPES:
        np_ = normalize_unique_unipotent(fixture_polytope(name))
        n = np_.dim
        zero = (0,) * n
        assert loewy_function(np_)(zero) == np_.height(zero[:-1])
        g = socle_function(np_)
        assert g.pieces[0].gradient == (0,) * (n - 1) + (1,) and g.pieces[0].offset == 1
        assert g(zero) == 1
        assert all(g(v) == 0 for v in np_.polytope.vertices if v[-1] == -1)


@pytest.mark.parametrize(
    "name, loewy, socle",
    [
        ("paper:fig2", Fraction(2, 9), Fraction(-2, 9)),
        ("paper:smooth3fold", Fraction(21, 160), Fraction(-21, 160)),
        ("paper:sing3fold", Fraction(-9, 128), Fraction(9, 128)),
    ],
)
def test_loewy_socle_values(name, loewy, socle):
    rep = loewy_socle_invariants(fixture_polytope(name))
    assert rep.loewy.df == loewy and rep.socle.df == socle
    assert rep.socle.df == rep.socle.ding
    # h is radically affine on all three examples
    assert rep.loewy.df == rep.loewy.ding and rep.loewy.radically_affine


def test_reductive_case_is_a_report():
    rep = loewy_socle_invariants(CROSS)
    assert rep.trivial
    assert rep.to_dict() == {"trivial": True, "notice": TRIVIAL_NOTICE}


def test_several_unipotent_roots_rejected():
    p = FIXTURES["paper:degree7-blowup"].polytope
    assert [r.kind for r in enumerate_roots(p)].count(RootKind.UNIPOTENT) == 2
    with pytest.raises(UnsupportedAutomorphismStructure):
        normalize_unique_unipotent(p)


@pytest.mark.parametrize("name", PAPER_POLYTOPES)
def test_report_invariant_under_gl_n_z(name):
    p = fixture_polytope(name)
    base = loewy_socle_invariants(p)
    rng = random.Random(17)
    for _ in range(5):
        q = p.transform(random_unimodular(p.dim, rng))
        rep = loewy_socle_invariants(q)
        assert rep.loewy == base.loewy and rep.socle == base.socle


def test_valuation_vector(fig2):
    np_ = normalize_unique_unipotent(fig2)
    assert np_.valuation_vector()["normalized"] == (0, -1)


def test_to_dict_is_exact(smooth3fold):
    d = loewy_socle_invariants(smooth3fold).to_dict()
    assert d["loewy"]["df"] == "21/160" and d["socle"]["df"] == "-21/160"
    assert d["unipotent_root"] == [0, 0, -1]
