"""Shared polytopes and fans."""

import random

import pytest

from pytoricoda.families.projective import ProjectiveFamily
from pytoricoda.polytope import hull
from pytoricoda.toric import ToricLineBundle, blowup, hirzebruch, product, projective_space


def simplex(dim: int, k: int = 1):
    origin = (0,) * dim
    units = [tuple(k * int(i == j) for j in range(dim)) for i in range(dim)]
    return hull([origin] + units)


def box(*sides):
    corners = [[]]
    for side in sides:
        corners = [c + [x] for c in corners for x in (0, side)]
    return hull(corners)


def random_polytope(rng: random.Random, dim: int, count: int = 6, bound: int = 5):
    """Hull of random lattice points, retried until full-dimensional."""
    while True:
        points = [tuple(rng.randint(-bound, bound) for _ in range(dim)) for _ in range(count)]
        polytope = hull(points)
        if polytope.is_full_dimensional:
            return polytope


def nef_classes(fan, bound: int) -> list:
    """Nonzero nef bundles with coefficients up to bound that vanish on the first cone."""
    return [ToricLineBundle(fan, coeffs) for coeffs in ProjectiveFamily(max_coeff=bound).bundles(fan)]


@pytest.fixture
def triangle():
    return simplex(2)


@pytest.fixture
def double_triangle():
    return simplex(2, 2)


@pytest.fixture
def unit_square():
    return box(1, 1)


@pytest.fixture
def unit_cube():
    return box(1, 1, 1)


@pytest.fixture
def pentagon():
    """Smooth pentagon whose fan has the blow-down ray (-1, -1)."""
    return hull([(0, 0), (2, 2), (2, 3), (1, 4), (0, 4)])


@pytest.fixture
def p1():
    return projective_space(1)


@pytest.fixture
def p2():
    return projective_space(2)


@pytest.fixture
def p1xp1():
    return product(projective_space(1), projective_space(1))


@pytest.fixture
def f1():
    return hirzebruch(1)


@pytest.fixture
def p1xp2():
    return product(projective_space(1), projective_space(2))


@pytest.fixture
def blown_up_p3():
    return blowup(projective_space(3), 0)


@pytest.fixture
def rng():
    return random.Random(20240611)
