"""Tests for exact lattice helpers."""

from fractions import Fraction

import pytest

from pytoricoda.lattice import (
    DimensionError,
    LatticeError,
    as_int_vector,
    check_dimension,
    complement_basis,
    determinant,
    ext_gcd,
    format_rational,
    is_unimodular,
    orthogonal_primitive,
    parse_rational,
    primitive,
    rank,
    solve,
)


@pytest.mark.parametrize(
    "value, expected",
    [(3, Fraction(3)), ("3/5", Fraction(3, 5)), (" -7/14 ", Fraction(-1, 2)), (Fraction(2, 3), Fraction(2, 3))],
)
def test_parse_rational(value, expected):
    assert parse_rational(value) == expected


@pytest.mark.parametrize("value", ["abc", "1/0", True, 0.5, None])
def test_parse_rational_rejects(value):
    with pytest.raises(LatticeError):
        parse_rational(value)


def test_format_rational():
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-3, 5)) == "-3/5"
    assert format_rational(parse_rational("9/12")) == "3/4"


def test_check_dimension():
    assert check_dimension(3) == 3
    with pytest.raises(DimensionError):
        check_dimension(4)


def test_as_int_vector_rejects_fractions():
    assert as_int_vector([1, -2]) == (1, -2)
    with pytest.raises(LatticeError):
        as_int_vector([Fraction(1, 2), 0])


@pytest.mark.parametrize("a, b", [(12, 18), (-4, 6), (0, 5), (7, 0), (-3, -9), (13, 8)])
def test_ext_gcd(a, b):
    g, x, y = ext_gcd(a, b)
    assert g >= 0
    assert a * x + b * y == g
    if a or b:
        assert a % g == 0 and b % g == 0


def test_primitive():
    assert primitive((4, -6)) == (2, -3)
    assert primitive((Fraction(1, 2), Fraction(1, 3))) == (3, 2)
    assert primitive((0, 0, -5)) == (0, 0, -1)
    with pytest.raises(LatticeError):
        primitive((0, 0))


def test_rank_and_determinant():
    assert rank([(1, 2), (2, 4)]) == 1
    assert determinant([(1, 2), (3, 4)]) == -2
    assert determinant([(1, 0, 0), (0, 1, 0), (1, 1, 1)]) == 1


def test_solve():
    assert solve([(2, 1), (1, 3)], [3, 5]) == (Fraction(4, 5), Fraction(7, 5))
    # overdetermined but consistent
    assert solve([(1, 0), (0, 1), (1, 1)], [1, 2, 3]) == (1, 2)
    assert solve([(1, 0), (0, 1), (1, 1)], [1, 2, 4]) is None
    assert solve([(1, 1), (2, 2)], [1, 2]) is None


def test_is_unimodular():
    assert is_unimodular([(1, 0), (1, 1)])
    assert not is_unimodular([(1, 1), (-1, 1)])
    with pytest.raises(DimensionError):
        is_unimodular([(1, 0)])


@pytest.mark.parametrize("u", [(1, 0), (3, 5), (-2, 7), (1, 1, 1), (2, 3, 5), (0, 0, 1), (4, 0, -3)])
def test_complement_basis(u):
    assert is_unimodular([u] + complement_basis(u))


def test_complement_basis_needs_primitive():
    with pytest.raises(LatticeError):
        complement_basis((2, 4))


def test_orthogonal_primitive():
    assert orthogonal_primitive([(2, 4)], 2) in {(-2, 1), (2, -1)}
    normal = orthogonal_primitive([(1, 0, 1), (0, 1, 1)], 3)
    assert normal in {(-1, -1, 1), (1, 1, -1)}
