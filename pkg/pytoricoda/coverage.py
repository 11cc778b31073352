"""Exact coverage decisions for unions of polytopes.

The residual of a target is kept as a list of convex cells, each an H-system with its vertices.
Every piece cuts each live cell along the piece's facet hyperplanes; the parts on the outer side of
a hyperplane survive, the part inside all of them is covered and dropped.
"""

import logging
import os

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from pytoricoda.const import DEFAULT_MAX_CELLS, ENV_MAX_CELLS
from pytoricoda.lattice import DimensionError, RatVector, ToricOdaError, dot, format_rational, neg, rank, sub
from pytoricoda.polytope import (
    Halfspace,
    Polyhedron,
    RationalPolytope,
    _affine_rank,
    _generators,
    finite_boundary,
    from_halfspaces,
    hull,
    polyhedron_sum,
)

_LOGGER = logging.getLogger(__name__)


class CoverageError(ToricOdaError, ValueError):
    """Invalid coverage request."""


class CellLimitError(ToricOdaError):
    """The splitting engine produced more cells than allowed."""

    def __init__(self, limit: int, reached: int) -> None:
        super().__init__(f"Splitting engine reached {reached} cells, limit is {limit} (set {ENV_MAX_CELLS}).")
        self.limit = limit
        self.reached = reached


def max_cells() -> int:
    raw = os.environ.get(ENV_MAX_CELLS)
    if raw is None:
        return DEFAULT_MAX_CELLS
    try:
        limit = int(raw)
    except ValueError as err:
        raise CoverageError(f"{ENV_MAX_CELLS}={raw!r} is not an integer.") from err
    if limit < 1:
        raise CoverageError(f"{ENV_MAX_CELLS} must be positive.")
    return limit


@dataclass(frozen=True)
class CoverReport:
    covered: bool
    witness: RatVector | None
    pieces_used: int

    def as_dict(self) -> dict:
        return {
            "covered": self.covered,
            "witness": None if self.witness is None else [format_rational(a) for a in self.witness],
            "pieces_used": self.pieces_used,
        }


@dataclass(frozen=True)
class QuasiCoverReport:
    """Leftover of a family of pieces inside a target.

    Each component is the hull of a connected group of residual cells; the exact cells are kept in
    leftover_cells, grouped the same way.
    """

    leftover_components: tuple[RationalPolytope, ...]
    max_vertex_distance: Fraction
    leftover_cells: tuple[tuple[RationalPolytope, ...], ...] = field(default=(), repr=False)

    def as_dict(self) -> dict:
        return {
            "leftover_components": [c.as_dict() for c in self.leftover_components],
            "max_vertex_distance": format_rational(self.max_vertex_distance),
        }


@dataclass
class _Cell:
    halfspaces: list[Halfspace]
    equations: list[Halfspace]
    vertices: list[RatVector]

    def to_polytope(self) -> RationalPolytope:
        return hull(self.vertices)


def _make_cell(halfspaces, equations, ambient: int) -> _Cell:
    points, _, _ = _generators(halfspaces, equations, ambient)
    return _Cell(list(halfspaces), list(equations), sorted(points))


def _split_cell(cell: _Cell, piece: RationalPolytope, target_dim: int, ambient: int) -> list[_Cell]:
    """Parts of the cell outside the piece, each of full target dimension."""
    outside = []
    current = cell
    for normal, offset in piece.halfspaces:
        values = [dot(v, normal) for v in current.vertices]
        if max(values) <= -offset and min(values) < -offset:
            outside.append(current)
            return outside
        if min(values) >= -offset:
            continue
        cut = (neg(normal), -offset)
        outside.append(_make_cell(current.halfspaces + [cut], current.equations, ambient))
        current = _make_cell(current.halfspaces + [(normal, offset)], current.equations, ambient)
        if _affine_rank(current.vertices) < target_dim:
            return outside
    return outside


def _usable(piece: RationalPolytope, target: RationalPolytope) -> bool:
    """A piece can cover an open part of the target only in the target's affine hull."""
    if piece.dim < target.dim:
        return False
    return all(dot(v, a) == -b for a, b in piece.equations for v in target.vertices)


def _residual(target: RationalPolytope, pieces: Sequence[RationalPolytope]) -> list[_Cell]:
    limit = max_cells()
    ambient = target.ambient
    cells = [_Cell(list(target.halfspaces), list(target.equations), list(target.vertices))]
    for index, piece in enumerate(pieces):
        if piece.ambient != ambient:
            raise DimensionError("Piece dimension differs from the target.", ambient, piece.ambient)
        if not _usable(piece, target):
            _LOGGER.debug("Piece %d has lower dimension inside the target, skipped", index)
            continue
        survivors = []
        for cell in cells:
            survivors.extend(_split_cell(cell, piece, target.dim, ambient))
            if len(survivors) > limit:
                raise CellLimitError(limit, len(survivors))
        _LOGGER.debug("Piece %d left %d residual cells", index, len(survivors))
        cells = survivors
        if not cells:
            break
    return cells


def _witness(cell: _Cell, pieces: Sequence[RationalPolytope]) -> RatVector:
    """A relative interior point of the cell that no piece contains."""
    center = tuple(sum(c, Fraction(0)) / len(cell.vertices) for c in zip(*cell.vertices))
    if not any(p.contains(center) for p in pieces):
        return center
    # lower-dimensional pieces can pass through the barycenter; walk along a moment curve, which
    # meets each of their hyperplanes in finitely many points
    directions: list[RatVector] = []
    for vertex in cell.vertices:
        delta = sub(vertex, center)
        if rank(directions + [delta]) > len(directions):
            directions.append(delta)
    if not directions:
        raise AssertionError(f"Residual cell {cell.vertices} has no interior.")
    step = 2
    while True:
        t = Fraction(1, step)
        point = center
        for power, delta in enumerate(directions, 1):
            point = tuple(p + t**power * d / len(directions) for p, d in zip(point, delta))
        if not any(p.contains(point) for p in pieces):
            return point
        step += 1


def covers(target: RationalPolytope, pieces: Sequence[RationalPolytope]) -> CoverReport:
    """Decide whether the union of the pieces contains the target."""
    pieces = list(pieces)
    if not pieces:
        return CoverReport(False, target.vertices[0], 0)
    cells = _residual(target, pieces)
    if not cells:
        return CoverReport(True, None, len(pieces))
    witness = _witness(cells[0], pieces)
    if not target.contains(witness) or any(p.contains(witness) for p in pieces):
        raise AssertionError(f"Witness {witness} failed exact re-verification.")
    return CoverReport(False, witness, len(pieces))


def residual_cells(target: RationalPolytope, pieces: Sequence[RationalPolytope]) -> list[RationalPolytope]:
    """The uncovered part of the target as closed convex cells."""
    return [cell.to_polytope() for cell in _residual(target, list(pieces))]


def vertex_fit_cover(polytope: RationalPolytope, c) -> CoverReport:
    """Cover a polytope by its shrunken copies c*P - c*v + v pinned at the vertices."""
    c = Fraction(c)
    if not 0 < c <= 1:
        raise CoverageError(f"Shrink factor {c} must lie in (0, 1].")
    shrunk = polytope.scale(c)
    pieces = [shrunk.translate(tuple((1 - c) * a for a in v)) for v in polytope.vertices]
    return covers(polytope, pieces)


def _adjacent(first: RationalPolytope, second: RationalPolytope, target_dim: int) -> bool:
    points, _, _ = _generators(
        first.halfspaces + second.halfspaces, first.equations + second.equations, first.ambient
    )
    return _affine_rank(sorted(points)) == target_dim - 1


def _split(piece: RationalPolytope, normal: Sequence, offset) -> list[RationalPolytope]:
    """Both sides of <x, normal> = -offset when the hyperplane cuts through the piece."""
    values = [dot(v, normal) for v in piece.vertices]
    if min(values) >= -offset or max(values) <= -offset:
        return [piece]
    sides = ((normal, offset), (neg(normal), -offset))
    parts = [from_halfspaces([*piece.halfspaces, side], piece.equations, piece.ambient) for side in sides]
    return [p for p in parts if p is not None]


def _sup_breaks(vertex: Sequence, dim: int):
    """Hyperplanes across which the sup-norm distance to vertex changes its linear form."""
    for i in range(dim):
        yield tuple(int(k == i) for k in range(dim)), vertex[i]
        for j in range(i + 1, dim):
            for sign in (1, -1):
                normal = tuple(1 if k == i else -sign if k == j else 0 for k in range(dim))
                yield normal, vertex[i] - sign * vertex[j]


def _nearest_vertex_radius(cell: RationalPolytope, vertices: Sequence[RatVector]) -> Fraction:
    """Largest sup-norm distance from a point of the cell to the nearest of the vertices."""
    dim = cell.ambient
    pieces = [cell]
    for vertex in vertices:
        for normal, value in _sup_breaks(vertex, dim):
            pieces = [part for piece in pieces for part in _split(piece, normal, -value)]
    best = Fraction(0)
    for piece in pieces:
        center = piece.barycenter
        # (x, t) with x in the piece and t below every distance, linear inside the piece
        halfspaces = [((*a, 0), b) for a, b in piece.halfspaces]
        equations = [((*a, 0), b) for a, b in piece.equations]
        for vertex in vertices:
            i, s = max(
                ((i, s) for i in range(dim) for s in (1, -1)), key=lambda c: c[1] * (center[c[0]] - vertex[c[0]])
            )
            halfspaces.append((tuple(s if k == i else 0 for k in range(dim)) + (-1,), -s * vertex[i]))
        points, _, _ = _generators(halfspaces, equations, dim + 1)
        best = max([best] + [p[-1] for p in points])
    return best


def quasi_cover_report(target: RationalPolytope, pieces: Sequence[RationalPolytope]) -> QuasiCoverReport:
    """Group the leftover of pieces inside the target and measure how far it strays from the vertices.

    The distance is the largest sup-norm distance from a leftover point to its nearest target vertex.
    """
    for index, piece in enumerate(pieces):
        if not target.contains_polytope(piece):
            raise CoverageError(f"Piece {index} {piece!r} is not inside the target.")
    cells = residual_cells(target, pieces)
    parent = list(range(len(cells)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            if find(i) != find(j) and _adjacent(cells[i], cells[j], target.dim):
                parent[find(i)] = find(j)
    groups: dict[int, list[RationalPolytope]] = {}
    for i, cell in enumerate(cells):
        groups.setdefault(find(i), []).append(cell)
    components = [tuple(group) for _, group in sorted(groups.items())]
    distance = Fraction(0)
    for group in components:
        for cell in group:
            distance = max(distance, _nearest_vertex_radius(cell, target.vertices))
    hulls = tuple(hull([v for cell in group for v in cell.vertices]) for group in components)
    return QuasiCoverReport(hulls, distance, tuple(components))


def minkowski_weyl_check(polyhedron: Polyhedron) -> CoverReport:
    """Check that the polyhedron equals its bounded faces plus its recession cone.

    Both sides share the recession cone, so equality on a slab holding every vertex and one step
    along every generator settles equality everywhere.
    """
    cone = polyhedron.recession
    faces = finite_boundary(polyhedron, maximal=True)
    if not cone.generators:
        return covers(polyhedron.finite_part, faces)
    covector = cone.interior_covector()
    level = max(dot(v, covector) for v in polyhedron.vertices) + max(dot(g, covector) for g in cone.generators)
    target = polyhedron.truncate(covector, level)
    pieces = []
    for face in faces:
        swept = polyhedron_sum(face, cone)
        outside = next((v for v in swept.vertices if not polyhedron.contains(v)), None)
        if outside is not None:
            return CoverReport(False, outside, len(faces))
        truncated = swept.truncate(covector, level)
        if truncated is not None:
            pieces.append(truncated)
    _LOGGER.debug("Minkowski-Weyl check with %d swept faces at level %s", len(pieces), level)
    return covers(target, pieces)
