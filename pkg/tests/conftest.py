import random

import pytest

from torik import exact_linear as el
from torik.fixtures import FIXTURES
from torik.polytope import LatticePolytope

PAPER_POLYTOPES = ["paper:fig2", "paper:smooth3fold", "paper:sing3fold"]


def fixture_polytope(name: str) -> LatticePolytope:
    return FIXTURES[name].polytope


def random_unimodular(n: int, rng: random.Random, steps: int = 6) -> list[list[int]]:
    """Product of random elementary matrices and sign flips."""
    a = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            a[i][k] += c * a[j][k]
    if rng.random() < 0.5:
        i = rng.randrange(n)
        a[i] = [-x for x in a[i]]
    if rng.random() < 0.5:
        i, j = rng.sample(range(n), 2)
        a[i], a[j] = a[j], a[i]
    assert el.unimodular(a)
    return a


@pytest.fixture(params=PAPER_POLYTOPES)
def paper_polytope(request):
    return fixture_polytope(request.param)


@pytest.fixture
def fig2():
    return fixture_polytope("paper:fig2")


@pytest.fixture
def smooth3fold():
    return fixture_polytope("paper:smooth3fold")


@pytest.fixture
def sing3fold():
    return fixture_polytope("paper:sing3fold")
