"""Tests for exact polytopes, cones and polyhedra."""

import itertools
import math
from fractions import Fraction

import pytest

from conftest import box, random_polytope, simplex
from pytoricoda.lattice import DimensionError
from pytoricoda.polytope import (
    Cone,
    PolytopeError,
    edge_ratio_min,
    edges,
    faces,
    facets,
    finite_boundary,
    from_halfspaces,
    hull,
    intersect,
    lattice_length_min,
    lattice_points,
    max_translation,
    minkowski_difference,
    minkowski_sum,
    parse_polyhedron,
    parse_polytope,
    polyhedron_lattice_points_truncated,
    polyhedron_sum,
    same_normal_fan,
)


def test_hull_drops_interior_points(triangle):
    polytope = hull([(0, 0), (2, 0), (0, 2), (1, 1), (Fraction(1, 2), Fraction(1, 2))])
    assert polytope.vertices == ((0, 0), (0, 2), (2, 0))
    assert polytope.dim == 2
    assert polytope.is_lattice
    assert polytope.contains((1, 1))
    assert not polytope.contains((Fraction(3, 2), 1))


def test_hull_lower_dimensional():
    segment = hull([(0, 0, 0), (2, 2, 0), (1, 1, 0)])
    assert segment.dim == 1
    assert segment.ambient == 3
    assert len(segment.equations) == 2
    assert segment.contains((1, 1, 0))
    assert not segment.contains((1, 0, 0))


def test_hull_rejects_mixed_dimensions():
    with pytest.raises(DimensionError):
        hull([(0, 0), (1, 0, 0)])
    with pytest.raises(PolytopeError):
        hull([])


def test_from_halfspaces(unit_square):
    square = from_halfspaces([((1, 0), 0), ((0, 1), 0), ((-1, 0), 1), ((0, -1), 1)])
    assert square == unit_square
    assert from_halfspaces([((1, 0), -2), ((-1, 0), 1)], ambient=2) is None
    with pytest.raises(PolytopeError):
        from_halfspaces([((1, 0), 0), ((0, 1), 0)])


def test_halfspaces_are_normalized():
    square = from_halfspaces([((2, 0), 0), ((0, 3), 0), ((Fraction(-1, 2), 0), 1), ((0, -1), 1)])
    assert ((1, 0), 0) in square.halfspaces
    assert ((-1, 0), 2) in square.halfspaces
    assert square.vertices[-1] == (2, 1)


def test_intersect(triangle, unit_square):
    assert intersect(triangle, unit_square) == triangle
    assert intersect(triangle, unit_square.translate((2, 2))) is None
    corner = intersect(triangle, unit_square.translate((1, 0)))
    assert corner.dim == 0
    assert corner.vertices == ((1, 0),)


def test_minkowski_sum(triangle, unit_square):
    total = minkowski_sum(triangle, unit_square)
    assert total.vertices == ((0, 0), (0, 2), (1, 2), (2, 0), (2, 1))
    assert minkowski_sum(triangle, triangle) == simplex(2, 2)


def test_minkowski_difference(triangle, double_triangle, unit_square):
    assert minkowski_difference(double_triangle, triangle) == triangle
    assert minkowski_difference(triangle, double_triangle) is None
    assert minkowski_difference(box(3, 3), unit_square) == box(2, 2)


def test_minkowski_difference_cancels_sums(rng):
    for _ in range(5):
        first, second = random_polytope(rng, 2), random_polytope(rng, 2)
        assert minkowski_difference(minkowski_sum(first, second), second) == first


def test_minkowski_difference_lower_dimensional():
    segment = hull([(0, 0), (3, 0)])
    assert minkowski_difference(segment, hull([(0, 0), (1, 0)])) == hull([(0, 0), (2, 0)])
    assert minkowski_difference(segment, hull([(0, 0), (0, 1)])) is None


def test_max_translation(triangle, double_triangle):
    assert max_translation(triangle, double_triangle, (1, 0)) == 1
    assert max_translation(triangle, double_triangle, (1, 1)) == Fraction(1, 2)
    assert max_translation(triangle.translate((5, 5)), double_triangle, (1, 0)) is None
    with pytest.raises(PolytopeError):
        max_translation(triangle, double_triangle, (0, 0))


def test_lattice_points(triangle, unit_cube):
    assert lattice_points(simplex(2, 2)) == {(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2)}
    assert len(lattice_points(unit_cube)) == 8
    assert lattice_points(hull([(Fraction(1, 3), 0), (Fraction(2, 3), 0)])) == set()
    assert len(lattice_points(simplex(3, 3))) == 20


def test_lattice_polytopes_are_hulls_of_their_points(rng):
    for dim in (2, 3):
        for _ in range(4):
            polytope = random_polytope(rng, dim, bound=3)
            assert hull(lattice_points(polytope)) == polytope


def test_lattice_points_follow_pick(rng):
    for _ in range(25):
        polygon = random_polytope(rng, 2)
        cx, cy = polygon.barycenter
        area, boundary = Fraction(0), Fraction(0)
        for edge in edges(polygon):
            (sx, sy), (ex, ey) = edge.endpoints
            area += abs((sx - cx) * (ey - cy) - (sy - cy) * (ex - cx)) / 2
            boundary += edge.lattice_length
        assert len(lattice_points(polygon)) == area + boundary / 2 + 1


def test_edges_and_facets(triangle, double_triangle):
    found = edges(double_triangle)
    assert len(found) == 3
    assert {e.lattice_length for e in found} == {2}
    assert lattice_length_min(double_triangle) == 2
    hypotenuse = next(e for e in found if set(e.endpoints) == {(0, 2), (2, 0)})
    assert hypotenuse.primitive_direction in {(1, -1), (-1, 1)}
    assert len(facets(triangle)) == 3
    assert {f.normal for f in facets(triangle)} == {(1, 0), (0, 1), (-1, -1)}


def test_faces_of_cube(unit_cube):
    assert len(faces(unit_cube, 0)) == 8
    assert len(faces(unit_cube, 1)) == 12
    assert len(faces(unit_cube, 2)) == 6
    assert len(faces(unit_cube)) == 27


def test_same_normal_fan(triangle, double_triangle, unit_square):
    assert same_normal_fan(triangle, double_triangle)
    assert not same_normal_fan(triangle, unit_square)
    assert same_normal_fan(unit_square, box(2, 5))
    assert edge_ratio_min(triangle, double_triangle) == Fraction(1, 2)
    assert edge_ratio_min(unit_square, box(2, 5)) == Fraction(1, 5)
    with pytest.raises(PolytopeError):
        edge_ratio_min(triangle, unit_square)


def test_translate_and_scale(triangle):
    moved = triangle.translate((1, 2))
    assert moved.vertices == ((1, 2), (1, 3), (2, 2))
    assert triangle.scale(Fraction(1, 2)).vertices == ((0, 0), (0, Fraction(1, 2)), (Fraction(1, 2), 0))
    assert not triangle.scale(Fraction(1, 2)).is_lattice
    with pytest.raises(PolytopeError):
        triangle.scale(0)


def test_support_and_barycenter(double_triangle):
    assert double_triangle.support((-1, -1)) == -2
    assert double_triangle.barycenter == (Fraction(2, 3), Fraction(2, 3))


def test_cone():
    quadrant = Cone.create([(2, 0), (0, 1), (1, 1)])
    assert quadrant.generators == ((0, 1), (1, 0))
    assert quadrant.is_pointed
    assert quadrant.is_full_dimensional
    assert quadrant.contains((3, 5))
    assert not quadrant.contains((-1, 5))
    assert quadrant.dual() == quadrant
    covector = quadrant.interior_covector()
    assert all(sum(a * b for a, b in zip(g, covector)) > 0 for g in quadrant.generators)


def test_half_plane_is_not_pointed():
    half = Cone.create([(1, 0), (0, 1), (-1, 0)])
    assert not half.is_pointed
    with pytest.raises(PolytopeError):
        half.interior_covector()


def test_polyhedron(triangle):
    quadrant = Cone.create([(1, 0), (0, 1)])
    polyhedron = polyhedron_sum(triangle, quadrant)
    assert polyhedron.vertices == ((0, 0),)
    assert polyhedron.contains((7, 9))
    assert not polyhedron.contains((-1, 0))
    assert polyhedron_lattice_points_truncated(polyhedron, (1, 1), 1) == {(0, 0), (1, 0), (0, 1)}
    assert len(finite_boundary(polyhedron)) == 1
    with pytest.raises(PolytopeError):
        polyhedron.truncate((1, -1), 3)


def test_polyhedron_bounded_faces():
    polyhedron = polyhedron_sum(hull([(0, 2), (1, 0), (2, 0)]), Cone.create([(1, 0), (0, 1)]))
    assert polyhedron.vertices == ((0, 2), (1, 0))
    maximal = finite_boundary(polyhedron, maximal=True)
    assert [f.vertices for f in maximal] == [((0, 2), (1, 0))]


def test_parse():
    assert parse_polytope({"vertices": [[0, 0], ["1/2", 0], [0, 1]]}).vertices[2] == (Fraction(1, 2), 0)
    polyhedron = parse_polyhedron({"vertices": [[0, 0]], "recession": [[1, 0], [0, 1]]})
    assert polyhedron.recession.generators == ((0, 1), (1, 0))
    with pytest.raises(PolytopeError):
        parse_polytope({"points": []})


@pytest.mark.slow
def test_lattice_points_and_sums_match_brute_force(rng):
    for n in range(200):
        dim = n % 3 + 1
        bound = 20 if dim < 3 else 10
        first, second = random_polytope(rng, dim, bound=bound), random_polytope(rng, dim, bound=bound)
        ranges = [range(math.floor(min(c)), math.ceil(max(c)) + 1) for c in zip(*first.vertices)]
        assert lattice_points(first) == {p for p in itertools.product(*ranges) if first.contains(p)}
        pairwise = hull([tuple(a + b for a, b in zip(v, w)) for v in first.vertices for w in second.vertices])
        assert minkowski_sum(first, second) == pairwise
