"""Tests for chords, contact points and the smooth-surface cover."""

import itertools
import math
from fractions import Fraction

import pytest

from conftest import box, random_polytope, simplex
from pytoricoda.families.smooth_surface import SmoothSurfaceFamily
from pytoricoda.lattice import dot, primitive
from pytoricoda.polytope import from_halfspaces, hull, lattice_points, minkowski_difference, minkowski_sum
from pytoricoda.surface import (
    NoContactPointsError,
    adjacency_probe,
    blow_down_ray,
    chord_function,
    chord_order_check,
    classify_translation_vector,
    contact_points,
    contact_region_check,
    d_point,
    sfhn_four_vector_cover,
    sfhn_verify,
    translation_vector_fan,
    unimodular_parallelogram,
)
from pytoricoda.toric import PreconditionError, hirzebruch, is_ample, normal_fan, polytope_of, tensor


def test_chord_function_of_double_triangle(double_triangle):
    chords = chord_function(double_triangle, (1, -1))
    assert chords.normal == (1, 1)
    assert chords.domain == (0, 2)
    assert chords.maximum() == 2
    assert chords.value(1) == 1
    assert chords.level_interval(1) == (1, 2)
    assert chords.is_concave()
    assert chords.as_dict()["maximum"] == "2"


def test_chord_function_of_pentagon(pentagon):
    chords = chord_function(pentagon, (1, 0))
    assert [v for _, v in chords.breakpoints] == [0, 2, 2, 1]
    assert chords.level_interval(1) == (1, 4)
    assert chords.maximum_on(3, 4) == 2
    assert chords.is_concave()


def test_chord_endpoints_lie_on_the_boundary(pentagon):
    chords = chord_function(pentagon, (1, 1))
    lo, hi = chords.endpoints(1)
    assert {lo, hi} == {(0, 1), (2, 3)}


def test_chord_needs_a_polygon(triangle):
    with pytest.raises(PreconditionError):
        chord_function(hull([(0, 0), (1, 1)]), (1, 0))
    with pytest.raises(PreconditionError):
        chord_function(triangle, (0, 0))
    with pytest.raises(PreconditionError):
        chord_function(triangle, (1, 0)).value(2)


def test_contact_points_of_square(unit_square):
    found = contact_points(unit_square, (1, 0))
    assert found.points == ((1, 0), (1, 1))
    assert found.interval == (0, 1)


def test_contact_points_of_double_triangle(double_triangle):
    found = contact_points(double_triangle, (1, -1))
    assert found.points == ((1, 0), (1, 1))
    assert contact_region_check(double_triangle, (1, -1))


def test_contact_points_single(triangle):
    found = contact_points(triangle, (1, 0))
    assert found.points == ((1, 0),)


def test_no_contact_points(triangle):
    with pytest.raises(NoContactPointsError) as info:
        contact_points(triangle, (1, 1))
    assert info.value.maximum == Fraction(1, 2)


def test_contact_region_on_random_directions(pentagon, rng):
    for _ in range(6):
        u = (rng.randint(-2, 2), rng.randint(-2, 2))
        if u == (0, 0) or chord_function(pentagon, u).maximum() < 1:
            continue
        assert contact_region_check(pentagon, u)


def test_classify_on_big_triangle():
    big = simplex(2, 3)
    left = classify_translation_vector(big, (1, 0), (3, 0), (0, 3))
    assert left.tag == "b"
    assert left.contact_positions == (0, Fraction(2, 3))
    assert (left.chord_first, left.chord_second, left.segment_max) == (3, 0, 3)
    assert classify_translation_vector(big, (1, 0), (0, 3), (3, 0)).tag == "d"
    assert classify_translation_vector(big, (1, 0), (0, 0), (3, 0)).tag == "c"
    assert classify_translation_vector(big, (1, 0), (0, 0), (3, 0)).contact_positions is None
    assert classify_translation_vector(big, (3, 1), (0, 0), (3, 0)).tag == "h"


def test_classify_boundary_cases(triangle):
    assert classify_translation_vector(triangle, (1, 0), (0, 0), (1, 0)).tag == "g"
    with pytest.raises(PreconditionError):
        classify_translation_vector(simplex(2, 3), (1, 0), (0, 0), (1, 0))
    with pytest.raises(PreconditionError):
        classify_translation_vector(box(2, 2), (1, 0), (0, 0), (2, 2))


def test_d_point():
    found = d_point((0, 0), (1, 1), (0, 1), (1, 0), (0, 1))
    assert found.point == (-1, -2)
    assert found.vector_dc == (1, 2)
    assert found.coefficients == (1, 1, 0, 1)
    moved = d_point((1, 1), (1, 1), (0, 1), (1, 0), (0, 1))
    assert moved.point == (0, -1)
    with pytest.raises(PreconditionError):
        d_point((0, 0), (0, 1), (1, 1), (1, 0), (0, 1))


def test_blow_down_ray(p2, f1, pentagon):
    assert blow_down_ray(p2) is None
    assert blow_down_ray(f1) == 1
    fan = normal_fan(pentagon)
    assert fan.rays[blow_down_ray(fan)] == (-1, -1)


def test_four_vector_cover(pentagon, triangle):
    context = minkowski_sum(pentagon, triangle)
    assert sfhn_four_vector_cover(pentagon, (1, 1), context).covered
    explicit = sfhn_four_vector_cover(pentagon, (1, 1), context, alpha=(-1, 0), beta=(0, -1))
    assert explicit.covered
    with pytest.raises(PreconditionError):
        sfhn_four_vector_cover(pentagon, (0, 0), context)


def test_unimodular_parallelogram(triangle):
    assert unimodular_parallelogram(box(2, 2), (0, 0)) == box(1, 1)
    assert unimodular_parallelogram(box(2, 2), (2, 2)) == box(1, 1).translate((1, 1))
    with pytest.raises(PreconditionError):
        unimodular_parallelogram(triangle, (0, 0))
    with pytest.raises(PreconditionError):
        unimodular_parallelogram(box(2, 2), (1, 1))


def test_translation_vector_fan():
    found = translation_vector_fan((0, 0), box(2, 2), (1, 0), (0, 1))
    assert [ab for ab, _ in found] == [(0, 1), (1, 2), (1, 1), (2, 1), (1, 0)]
    assert [v for _, v in found][1] == (1, 2)


def test_sfhn_rejects_the_exceptional_triangle(triangle, double_triangle):
    with pytest.raises(PreconditionError, match="unimodular triangle"):
        sfhn_verify(triangle, double_triangle)


def test_sfhn_rejects_singular_polygons():
    kite = hull([(0, 0), (2, 0), (0, 1)])
    with pytest.raises(PreconditionError):
        sfhn_verify(kite, kite.scale(2))


def test_sfhn_on_squares(unit_square):
    report = sfhn_verify(unit_square, box(2, 2), with_certificate=True)
    assert report.covered
    assert report.agrees
    assert [s.rule for s in report.certificate.steps] == ["base"]
    assert report.certificate.lambdas == {}


def test_sfhn_certificate_on_pentagon(pentagon):
    report = sfhn_verify(pentagon, pentagon.scale(2), with_certificate=True)
    assert report.covered
    assert report.agrees
    certificate = report.certificate
    assert [s.rule for s in certificate.steps] == ["base", "blow-down", "four-vector"]
    assert set(certificate.translates) <= set(report.translates)
    assert certificate.lambdas == {"u_h": 0, "u_v": 4}
    assert report.as_dict()["certificate"]["covered"] is True


def test_sfhn_certificate_uses_fewer_translates():
    report = sfhn_verify(box(2, 2), box(4, 4), with_certificate=True)
    assert len(report.translates) == 9
    assert report.certificate.translates == ((0, 0), (0, 2), (2, 0), (2, 2))
    assert report.certificate.covered and report.agrees


def test_sfhn_certificate_grows_from_witnesses():
    # every unit cell of the 3 x 3 square needs its own translate
    report = sfhn_verify(box(1, 1), box(3, 3), with_certificate=True)
    assert report.covered
    assert report.certificate.covered
    assert len(report.certificate.translates) == 9


def test_sfhn_without_certificate(pentagon):
    report = sfhn_verify(pentagon, pentagon.scale(3))
    assert report.covered
    assert report.certificate is None


@pytest.mark.parametrize("a", [0, 1, 2])
def test_sfhn_on_hirzebruch_polygons(a):
    # trapezoids with parallel sides 1 and 1 + a
    small = hull([(0, 0), (1, 0), (1 + a, 1), (0, 1)]) if a else box(1, 1)
    assert normal_fan(small) == hirzebruch(a)
    assert sfhn_verify(small, small.scale(2)).covered


def test_adjacency_probe(pentagon):
    report = adjacency_probe(pentagon, pentagon.scale(2))
    assert report.pairs_checked == 3
    assert report.hits == ()
    assert report.unclassifiable == ()


def test_adjacency_probe_from_a_point(pentagon):
    report = adjacency_probe(pentagon, pentagon.scale(2), p0=(1, 3))
    assert report.pairs_checked == 1


def test_adjacency_probe_needs_blow_down(unit_square):
    with pytest.raises(PreconditionError):
        adjacency_probe(unit_square, box(2, 2))


def test_chord_order_check():
    big = simplex(2, 3)
    assert chord_order_check(big, (0, 0), (1, -1), (1, -1), (1, 1))
    with pytest.raises(PreconditionError):
        chord_order_check(big, (1, 1), (1, -1), (1, -1), (1, 1))
    with pytest.raises(PreconditionError):
        chord_order_check(big, (0, 0), (1, 0), (1, -1), (1, 1))
    with pytest.raises(PreconditionError):
        chord_order_check(big, (0, 0), (1, -1), (1, -1), (4, 1))


def _ample_pairs(rng, max_coeff: int, limit: int):
    family = SmoothSurfaceFamily(max_coeff=max_coeff, max_picard=3, limit=limit, seed=rng.randint(0, 1000))
    for instance in family.instances():
        first, second = instance.bundles()
        small = polytope_of(first)
        if is_ample(first) and len(lattice_points(small)) > 3:
            yield instance, small, polytope_of(tensor(first, second))


@pytest.mark.slow
def test_sfhn_certificates_agree_on_smooth_surfaces(rng):
    checked = 0
    for instance, small, large in itertools.islice(_ample_pairs(rng, 2, 400), 50):
        report = sfhn_verify(small, large, with_certificate=True)
        assert report.covered, instance.descriptor()
        assert report.agrees, instance.descriptor()
        assert set(report.certificate.translates) <= set(report.translates)
        checked += 1
    assert checked == 50


def _chord_oracle(polygon, u):
    """Contact points read off chords cut at the vertex levels."""
    n = primitive((-u[1], u[0]))
    k = 0 if u[0] else 1
    levels = sorted({dot(v, n) for v in polygon.vertices})

    def chord(t):
        ends = sorted(from_halfspaces(polygon.halfspaces, [(n, -t)], 2).vertices, key=lambda p: dot(p, u))
        return ends[0], (ends[-1][k] - ends[0][k]) / u[k]

    values = [chord(t)[1] for t in levels]
    above = [i for i, v in enumerate(values) if v >= 1]
    if not above:
        return None

    def cross(i, j):
        return levels[i] + (1 - values[i]) * (levels[j] - levels[i]) / (values[j] - values[i])

    lo = levels[0] if above[0] == 0 else cross(above[0] - 1, above[0])
    hi = levels[-1] if above[-1] == len(levels) - 1 else cross(above[-1], above[-1] + 1)
    return {tuple(a + b for a, b in zip(chord(t)[0], u)) for t in {lo, hi}}


@pytest.mark.slow
def test_contact_points_match_chord_breakpoints(rng):
    directions = [(a, b) for a in range(-3, 4) for b in range(-3, 4) if math.gcd(a, b) == 1]
    for _ in range(100):
        polygon = random_polytope(rng, 2)
        for u in rng.sample(directions, 5):
            expected = _chord_oracle(polygon, u)
            if expected is None:
                with pytest.raises(NoContactPointsError):
                    contact_points(polygon, u)
                continue
            found = contact_points(polygon, u)
            assert set(found.points) == expected, (polygon, u)
            assert len(found.points) in (1, 2)
            assert contact_region_check(polygon, u)


@pytest.mark.slow
def test_translation_vectors_avoid_forbidden_neighbours(rng):
    configurations = 0
    for instance, small, large in _ample_pairs(rng, 3, 2000):
        index = minkowski_difference(large, small)
        if blow_down_ray(instance.fan) is None or not index.is_full_dimensional:
            continue
        inner = sorted(p for p in lattice_points(index) if all(dot(p, a) != -b for a, b in index.halfspaces))
        for p0 in inner[: 200 - configurations]:
            report = adjacency_probe(small, large, p0=p0)
            assert report.hits == (), (instance.descriptor(), p0)
            configurations += 1
        if configurations == 200:
            break
    assert configurations == 200
