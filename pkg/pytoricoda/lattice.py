"""Exact integer and rational linear algebra on lattices of rank at most three."""

import logging

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

_LOGGER = logging.getLogger(__name__)

IntVector = tuple[int, ...]
RatVector = tuple[Fraction, ...]
Scalar = Union[int, Fraction]

SUPPORTED_DIMENSIONS = (1, 2, 3)


class ToricOdaError(Exception):
    """Base error of the package."""


class LatticeError(ToricOdaError, ValueError):
    """Invalid lattice input."""

    def __init__(self, message: str, vector=None) -> None:
        super().__init__(message)
        self.vector = vector


class DimensionError(LatticeError):
    """Ambient dimensions disagree or are not supported."""

    def __init__(self, message: str, expected: int | None = None, found: int | None = None) -> None:
        super().__init__(message)
        self.expected = expected
        self.found = found


def check_dimension(dim: int) -> int:
    """Reject ambient dimensions outside 1..3."""
    if dim not in SUPPORTED_DIMENSIONS:
        raise DimensionError(f"Dimension {dim} is not supported, use 1, 2 or 3.", found=dim)
    return dim


def parse_rational(value) -> Fraction:
    """Read an int, a Fraction or a "p/q" string exactly."""
    if isinstance(value, bool):
        raise LatticeError(f"Boolean {value!r} is not a rational number.")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise LatticeError(f"Cannot parse rational {value!r}.") from err
    raise LatticeError(f"Unsupported rational value {value!r} of type {type(value).__name__}.")


def format_rational(value: Scalar) -> str:
    """Serialize a rational as "p/q", or "n" when integral."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_int_vector(coords: Iterable) -> IntVector:
    """Validate integer coordinates."""
    result = []
    for item in coords:
        q = parse_rational(item)
        if q.denominator != 1:
            raise LatticeError(f"Coordinate {item!r} is not an integer.", tuple(coords))
        result.append(q.numerator)
    check_dimension(len(result))
    return tuple(result)


def as_rat_vector(coords: Iterable) -> RatVector:
    """Validate rational coordinates."""
    result = tuple(parse_rational(item) for item in coords)
    check_dimension(len(result))
    return result


def same_dimension(*vectors: Sequence) -> int:
    """Return the common length of the vectors."""
    dims = {len(v) for v in vectors}
    if len(dims) != 1:
        raise DimensionError(f"Vectors of mixed dimensions {sorted(dims)}.")
    return dims.pop()


def dot(u: Sequence, v: Sequence):
    same_dimension(u, v)
    return sum(a * b for a, b in zip(u, v))


def add(u: Sequence, v: Sequence) -> tuple:
    same_dimension(u, v)
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    same_dimension(u, v)
    return tuple(a - b for a, b in zip(u, v))


def scale(k: Scalar, v: Sequence) -> tuple:
    return tuple(k * a for a in v)


def neg(v: Sequence) -> tuple:
    return tuple(-a for a in v)


def is_zero(v: Sequence) -> bool:
    return all(a == 0 for a in v)


def _echelon(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Row echelon form over the rationals."""
    matrix = [[Fraction(a) for a in row] for row in rows]
    if not matrix:
        return []
    width = len(matrix[0])
    pivot_row = 0
    for col in range(width):
        pivot = next((r for r in range(pivot_row, len(matrix)) if matrix[r][col] != 0), None)
        if pivot is None:
            continue
        matrix[pivot_row], matrix[pivot] = matrix[pivot], matrix[pivot_row]
        for r in range(pivot_row + 1, len(matrix)):
            factor = matrix[r][col] / matrix[pivot_row][col]
            if factor:
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[pivot_row])]
        pivot_row += 1
        if pivot_row == len(matrix):
            break
    return matrix


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix given by rows."""
    return sum(1 for row in _echelon(rows) if any(a != 0 for a in row))


def determinant(rows: Sequence[Sequence]):
    """Exact determinant of a square matrix."""
    size = len(rows)
    if any(len(row) != size for row in rows):
        raise DimensionError(f"Determinant needs a square matrix, got {size} rows.")
    if size == 1:
        return rows[0][0]
    if size == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if size == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    matrix = [[Fraction(a) for a in row] for row in rows]
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if matrix[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
            det = -det
        det *= matrix[col][col]
        for r in range(col + 1, size):
            factor = matrix[r][col] / matrix[col][col]
            if factor:
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[col])]
    return det


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> RatVector | None:
    """Solve A x = b exactly.

    The system may be overdetermined; the unique solution is returned when it exists and None
    when the system is inconsistent or has more than one solution.
    """
    rows = len(matrix)
    if rows != len(rhs):
        raise DimensionError("Right hand side does not match the matrix.", rows, len(rhs))
    width = len(matrix[0])
    augmented = _echelon([list(row) + [b] for row, b in zip(matrix, rhs)])
    pivots = []
    for row in augmented:
        lead = next((j for j, a in enumerate(row) if a != 0), None)
        if lead is None:
            continue
        if lead == width:
            return None
        pivots.append((lead, row))
    if len(pivots) != width:
        return None
    solution = [Fraction(0)] * width
    for lead, row in reversed(pivots):
        acc = row[width] - sum(row[j] * solution[j] for j in range(lead + 1, width))
        solution[lead] = acc / row[lead]
    return tuple(solution)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        return -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def content(v: Sequence[int]) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def primitive(v: Sequence) -> IntVector:
    """Shortest lattice vector positively proportional to v.

    Rational input is cleared of denominators first.
    """
    coords = [Fraction(a) for a in v]
    if all(a == 0 for a in coords):
        raise LatticeError("Zero vector has no primitive direction.", tuple(v))
    denominator = 1
    for a in coords:
        denominator = denominator * a.denominator // gcd(denominator, a.denominator)
    ints = [int(a * denominator) for a in coords]
    g = content(ints)
    return tuple(a // g for a in ints)


def is_primitive(v: Sequence[int]) -> bool:
    return not is_zero(v) and content(v) == 1


def is_unimodular(vectors: Sequence[Sequence[int]]) -> bool:
    """True iff the d vectors form a basis of Z^d."""
    if not vectors:
        raise DimensionError("No vectors given.")
    dim = same_dimension(*vectors)
    if len(vectors) != dim:
        raise DimensionError(f"Need {dim} vectors of dimension {dim}, got {len(vectors)}.", dim, len(vectors))
    return abs(determinant(vectors)) == 1


def complement_basis(u: Sequence[int]) -> list[IntVector]:
    """Vectors completing the primitive vector u to a lattice basis."""
    u = tuple(u)
    check_dimension(len(u))
    if not is_primitive(u):
        raise LatticeError(f"Vector {u} is not primitive.", u)
    if len(u) == 1:
        return []
    if len(u) == 2:
        _, x, y = ext_gcd(u[0], u[1])
        return [(-y, x)]
    a, b, c = u
    g, x, y = ext_gcd(a, b)
    if g == 0:
        return [(1, 0, 0), (0, 1, 0)]
    _, s, t = ext_gcd(g, c)
    a_red, b_red = a // g, b // g
    result = [(-y, x, 0), (-t * a_red, -t * b_red, s)]
    _LOGGER.debug("Completed %s with %s", u, result)
    return result


def orthogonal_primitive(vectors: Sequence[Sequence[int]], dim: int) -> IntVector:
    """Primitive generator of the orthogonal complement of d-1 independent vectors."""
    if len(vectors) != dim - 1 or rank(vectors) != dim - 1:
        raise LatticeError(f"Need {dim - 1} independent vectors to span a hyperplane.")
    if dim == 1:
        return (1,)
    if dim == 2:
        (a, b), = vectors
        return primitive((-b, a))
    (a, b, c), (d, e, f) = vectors
    return primitive((b * f - c * e, c * d - a * f, a * e - b * d))
