"""Exact convex polytopes, cones and pointed polyhedra.

Vertex and facet enumeration is delegated to cddlib in exact rational mode; everything built on
top of it (faces, edges, Minkowski algebra, lattice points) stays in Fraction arithmetic.
"""

import itertools
import logging

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, lcm
from typing import Iterable, Sequence

import cdd

from pytoricoda.const import PROP_RECESSION, PROP_VERTICES
from pytoricoda.lattice import (
    DimensionError,
    IntVector,
    RatVector,
    ToricOdaError,
    add,
    as_int_vector,
    as_rat_vector,
    check_dimension,
    content,
    dot,
    format_rational,
    is_zero,
    neg,
    primitive,
    rank,
    same_dimension,
    sub,
)

_LOGGER = logging.getLogger(__name__)

Halfspace = tuple[IntVector, Fraction]


class PolytopeError(ToricOdaError, ValueError):
    """Invalid polytope operation."""


def _normalize_row(offset, normal) -> Halfspace | None:
    """Scale b + <a, x> >= 0 so that a is a primitive integer vector."""
    normal = [Fraction(a) for a in normal]
    if all(a == 0 for a in normal):
        return None
    denominator = 1
    for a in normal:
        denominator = lcm(denominator, a.denominator)
    ints = [int(a * denominator) for a in normal]
    g = content(ints)
    factor = Fraction(denominator, g)
    return tuple(a // g for a in ints), Fraction(offset) * factor


def _canonical_equation(equation: Halfspace) -> Halfspace:
    normal, offset = equation
    lead = next(a for a in normal if a != 0)
    if lead < 0:
        return neg(normal), -offset
    return normal, offset


def _inequalities(points: Sequence[Sequence], rays: Sequence[Sequence] = ()) -> tuple[list, list]:
    """V to H: irredundant halfspaces and equations of conv(points) + cone(rays)."""
    rows = [[1, *p] for p in points] + [[0, *r] for r in rays]
    mat = cdd.Matrix(rows, number_type='fraction')
    mat.rep_type = cdd.RepType.GENERATOR
    ineq = cdd.Polyhedron(mat).get_inequalities()
    ineq.canonicalize()
    halfspaces, equations = set(), set()
    for i in range(ineq.row_size):
        row = _normalize_row(ineq[i][0], ineq[i][1:])
        if row is None:
            continue
        if i in ineq.lin_set:
            equations.add(_canonical_equation(row))
        else:
            halfspaces.add(row)
    return sorted(halfspaces), sorted(equations)


def _generators(halfspaces: Sequence[Halfspace], equations: Sequence[Halfspace], ambient: int):
    """H to V: (points, rays, lines) of the system <a, x> >= -b, <a', x> = -b'."""
    rows = [[b, *a] for a, b in halfspaces]
    eqs = [[b, *a] for a, b in equations]
    if not rows and not eqs:
        units = [tuple(int(i == j) for j in range(ambient)) for i in range(ambient)]
        return [tuple(Fraction(0) for _ in range(ambient))], [], units
    if rows:
        mat = cdd.Matrix(rows, number_type='fraction')
        if eqs:
            mat.extend(eqs, linear=True)
    else:
        mat = cdd.Matrix(eqs, linear=True, number_type='fraction')
    mat.rep_type = cdd.RepType.INEQUALITY
    gen = cdd.Polyhedron(mat).get_generators()
    points, rays, lines = [], [], []
    for i in range(gen.row_size):
        row = [Fraction(a) for a in gen[i]]
        if i in gen.lin_set:
            lines.append(primitive(row[1:]))
        elif row[0] == 0:
            rays.append(primitive(row[1:]))
        else:
            points.append(tuple(a / row[0] for a in row[1:]))
    return points, rays, lines


def _affine_rank(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    base = points[0]
    return rank([sub(p, base) for p in points[1:]]) if len(points) > 1 else 0


def _tight_normals(point, halfspaces, equations) -> list:
    tight = [a for a, b in halfspaces if dot(point, a) == -b]
    return tight + [a for a, _ in equations]


@dataclass(frozen=True, eq=False)
class RationalPolytope:
    """Bounded convex body with matching vertex and halfspace descriptions.

    Halfspaces are pairs (normal, offset) meaning <x, normal> >= -offset with primitive integer
    normals; equations use the same convention with equality. Vertices are sorted.
    """

    vertices: tuple[RatVector, ...]
    halfspaces: tuple[Halfspace, ...]
    equations: tuple[Halfspace, ...]
    dim: int
    ambient: int

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalPolytope):
            return NotImplemented
        return self.ambient == other.ambient and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.ambient, self.vertices))

    def __repr__(self) -> str:
        verts = ", ".join("(" + ",".join(format_rational(a) for a in v) + ")" for v in self.vertices)
        return f"{type(self).__name__}([{verts}])"

    @property
    def is_lattice(self) -> bool:
        return all(a.denominator == 1 for v in self.vertices for a in v)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient

    @property
    def barycenter(self) -> RatVector:
        count = len(self.vertices)
        return tuple(sum(coords, Fraction(0)) / count for coords in zip(*self.vertices))

    def contains(self, point: Sequence) -> bool:
        """Exact membership test."""
        if len(point) != self.ambient:
            raise DimensionError("Point dimension differs from the polytope.", self.ambient, len(point))
        return all(dot(point, a) >= -b for a, b in self.halfspaces) and all(
            dot(point, a) == -b for a, b in self.equations
        )

    def contains_polytope(self, other: 'RationalPolytope') -> bool:
        return all(self.contains(v) for v in other.vertices)

    def support(self, normal: Sequence) -> Fraction:
        """Minimum of <x, normal> over the polytope."""
        return min(Fraction(dot(v, normal)) for v in self.vertices)

    def translate(self, vector: Sequence) -> 'RationalPolytope':
        vector = tuple(Fraction(a) for a in vector)
        same_dimension(vector, self.vertices[0])
        return _build(
            [add(v, vector) for v in self.vertices],
            [(a, b - dot(vector, a)) for a, b in self.halfspaces],
            [(a, b - dot(vector, a)) for a, b in self.equations],
            self.ambient,
        )

    def scale(self, factor) -> 'RationalPolytope':
        """Dilate by a positive rational factor about the origin."""
        factor = Fraction(factor)
        if factor <= 0:
            raise PolytopeError(f"Scale factor {factor} must be positive.")
        return _build(
            [tuple(factor * a for a in v) for v in self.vertices],
            [(a, b * factor) for a, b in self.halfspaces],
            [(a, b * factor) for a, b in self.equations],
            self.ambient,
        )

    def as_dict(self) -> dict:
        return {PROP_VERTICES: [[format_rational(a) for a in v] for v in self.vertices]}


@dataclass(frozen=True, eq=False, repr=False)
class LatticePolytope(RationalPolytope):
    """Polytope whose vertices are all lattice points."""


def _build(vertices, halfspaces, equations, ambient: int) -> RationalPolytope:
    vertices = tuple(sorted(tuple(Fraction(a) for a in v) for v in vertices))
    cls = LatticePolytope if all(a.denominator == 1 for v in vertices for a in v) else RationalPolytope
    return cls(
        vertices=vertices,
        halfspaces=tuple(sorted(halfspaces)),
        equations=tuple(sorted(_canonical_equation(e) for e in equations)),
        dim=_affine_rank(vertices),
        ambient=ambient,
    )


def hull(points: Iterable[Sequence]) -> RationalPolytope:
    """Convex hull in canonical form."""
    pts = sorted({as_rat_vector(p) for p in points})
    if not pts:
        raise PolytopeError("Cannot take the hull of no points.")
    ambient = same_dimension(*pts)
    halfspaces, equations = _inequalities(pts)
    vertices = [p for p in pts if rank(_tight_normals(p, halfspaces, equations)) == ambient]
    return _build(vertices, halfspaces, equations, ambient)


def from_halfspaces(
    halfspaces: Iterable[tuple[Sequence, object]],
    equations: Iterable[tuple[Sequence, object]] = (),
    ambient: int | None = None,
) -> RationalPolytope | None:
    """Polytope {x : <x, a> >= -b}; None when the system is infeasible."""
    rows = [r for r in (_normalize_row(b, a) for a, b in halfspaces) if r is not None]
    eqs = [r for r in (_normalize_row(b, a) for a, b in equations) if r is not None]
    if ambient is None:
        if not rows and not eqs:
            raise PolytopeError("Ambient dimension is unknown for an empty system.")
        ambient = len((rows or eqs)[0][0])
    check_dimension(ambient)
    points, rays, lines = _generators(rows, eqs, ambient)
    if not points:
        return None
    if rays or lines:
        raise PolytopeError("Halfspace system is unbounded.")
    return hull(points)


def intersect(first: RationalPolytope, second: RationalPolytope) -> RationalPolytope | None:
    same_dimension(first.vertices[0], second.vertices[0])
    return from_halfspaces(
        first.halfspaces + second.halfspaces, first.equations + second.equations, first.ambient
    )


def minkowski_sum(first: RationalPolytope, second: RationalPolytope) -> RationalPolytope:
    if first.ambient != second.ambient:
        raise DimensionError("Minkowski sum of polytopes in different dimensions.", first.ambient, second.ambient)
    return hull(add(p, q) for p in first.vertices for q in second.vertices)


def minkowski_difference(first: RationalPolytope, second: RationalPolytope) -> RationalPolytope | None:
    """The body {x : x + second inside first}, or None when it is empty."""
    if first.ambient != second.ambient:
        raise DimensionError("Minkowski difference in different dimensions.", first.ambient, second.ambient)
    equations = []
    for normal, offset in first.equations:
        values = {dot(v, normal) for v in second.vertices}
        if len(values) > 1:
            return None
        equations.append((normal, offset + values.pop()))
    halfspaces = [(a, b + second.support(a)) for a, b in first.halfspaces]
    return from_halfspaces(halfspaces, equations, first.ambient)


def max_translation(first: RationalPolytope, second: RationalPolytope, direction: Sequence[int]):
    """Largest t with t * direction + first inside second, or None if no t works."""
    if is_zero(direction):
        raise PolytopeError("Translation direction must be nonzero.")
    lower, upper = None, None
    for normal, offset in second.halfspaces + second.equations + tuple(
        (neg(a), -b) for a, b in second.equations
    ):
        slope = dot(direction, normal)
        bound = -offset - first.support(normal)
        if slope == 0:
            if bound > 0:
                return None
        elif slope > 0:
            value = Fraction(bound) / slope
            lower = value if lower is None else max(lower, value)
        else:
            value = Fraction(bound) / slope
            upper = value if upper is None else min(upper, value)
    if upper is None or (lower is not None and lower > upper):
        return None
    return upper


def lattice_points(polytope: RationalPolytope) -> set[IntVector]:
    """All integer points of a bounded polytope."""
    if not isinstance(polytope, RationalPolytope):
        raise PolytopeError("Lattice points need a bounded polytope; truncate polyhedra first.")
    ranges = []
    for coords in zip(*polytope.vertices):
        lo, hi = ceil(min(coords)), floor(max(coords))
        if lo > hi:
            return set()
        ranges.append(range(lo, hi + 1))
    return {p for p in itertools.product(*ranges) if polytope.contains(p)}


@dataclass(frozen=True)
class EdgeDescriptor:
    """A one-dimensional face; infinite edges carry no second endpoint and no length."""

    endpoints: tuple[RatVector, RatVector | None]
    primitive_direction: IntVector
    lattice_length: Fraction | None

    @property
    def is_infinite(self) -> bool:
        return self.lattice_length is None

    def as_dict(self) -> dict:
        start, end = self.endpoints
        return {
            "endpoints": [
                [format_rational(a) for a in start],
                None if end is None else [format_rational(a) for a in end],
            ],
            "direction": list(self.primitive_direction),
            "lattice_length": None if self.lattice_length is None else format_rational(self.lattice_length),
        }


@dataclass(frozen=True)
class FacetDescriptor:
    normal: IntVector
    offset: Fraction
    vertices: tuple[RatVector, ...]

    def as_dict(self) -> dict:
        return {
            "normal": list(self.normal),
            "offset": format_rational(self.offset),
            "vertices": [[format_rational(a) for a in v] for v in self.vertices],
        }


def _face_closure(count: int, incidences: Sequence[frozenset]) -> set[frozenset]:
    faces = {frozenset(range(count))}
    for incidence in incidences:
        faces |= {face & incidence for face in faces}
    faces.discard(frozenset())
    return faces


def faces(polytope: RationalPolytope, dim: int | None = None) -> list[RationalPolytope]:
    """Nonempty faces, optionally only those of the given dimension."""
    verts = polytope.vertices
    incidences = [
        frozenset(i for i, v in enumerate(verts) if dot(v, a) == -b) for a, b in polytope.halfspaces
    ]
    result = []
    for face in _face_closure(len(verts), incidences):
        points = [verts[i] for i in sorted(face)]
        if dim is None or _affine_rank(points) == dim:
            result.append(hull(points))
    return sorted(result, key=lambda f: (f.dim, f.vertices))


def _segment_edge(start: RatVector, end: RatVector) -> EdgeDescriptor:
    delta = sub(end, start)
    direction = primitive(delta)
    k = next(i for i, a in enumerate(direction) if a != 0)
    return EdgeDescriptor((start, end), direction, Fraction(delta[k]) / direction[k])


def edges(polytope: RationalPolytope) -> list[EdgeDescriptor]:
    return [_segment_edge(*face.vertices) for face in faces(polytope, 1)]


def facets(polytope: RationalPolytope) -> list[FacetDescriptor]:
    result = []
    for normal, offset in polytope.halfspaces:
        tight = tuple(v for v in polytope.vertices if dot(v, normal) == -offset)
        result.append(FacetDescriptor(normal, offset, tight))
    return result


def lattice_length_min(polytope: RationalPolytope) -> Fraction:
    if polytope.dim < 1:
        raise PolytopeError("A point has no edges.")
    return min(e.lattice_length for e in edges(polytope))


def _vertex_signature(polytope: RationalPolytope, vertex: RatVector) -> frozenset:
    return frozenset(a for a, b in polytope.halfspaces if dot(vertex, a) == -b)


def same_normal_fan(first: RationalPolytope, second: RationalPolytope) -> bool:
    """Compare normal fans of full-dimensional polytopes through their vertex cones."""
    if not (first.is_full_dimensional and second.is_full_dimensional):
        raise PolytopeError("Normal fans are compared for full-dimensional polytopes only.")
    first_cones = {_vertex_signature(first, v) for v in first.vertices}
    second_cones = {_vertex_signature(second, v) for v in second.vertices}
    return first_cones == second_cones


def edge_ratio_min(first: RationalPolytope, second: RationalPolytope) -> Fraction:
    """Minimum ratio of corresponding lattice edge lengths."""
    if not same_normal_fan(first, second):
        raise PolytopeError("Polytopes have different normal fans.")

    def keyed(polytope):
        return {
            _vertex_signature(polytope, e.endpoints[0]) & _vertex_signature(polytope, e.endpoints[1]): e
            for e in edges(polytope)
        }

    first_edges, second_edges = keyed(first), keyed(second)
    return min(e.lattice_length / second_edges[key].lattice_length for key, e in first_edges.items())


@dataclass(frozen=True, eq=False)
class Cone:
    """Rational polyhedral cone with primitive generators and inner facet normals."""

    generators: tuple[IntVector, ...]
    halfspaces: tuple[IntVector, ...]
    equations: tuple[IntVector, ...]
    ambient: int

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        return self.ambient == other.ambient and self.generators == other.generators

    def __hash__(self) -> int:
        return hash((self.ambient, self.generators))

    @classmethod
    def create(cls, generators: Iterable[Sequence], ambient: int | None = None) -> 'Cone':
        gens = sorted({primitive(as_int_vector(g)) for g in generators if not is_zero(g)})
        if ambient is None:
            if not gens:
                raise PolytopeError("Ambient dimension is unknown for the zero cone.")
            ambient = len(gens[0])
        check_dimension(ambient)
        if not gens:
            units = tuple(tuple(int(i == j) for j in range(ambient)) for i in range(ambient))
            return cls((), (), units, ambient)
        same_dimension(*gens, (0,) * ambient)
        rows, eqs = _inequalities([(0,) * ambient], gens)
        normals = tuple(a for a, _ in rows)
        equations = tuple(a for a, _ in eqs)
        if rank(list(normals) + list(equations)) == ambient:
            gens = [g for g in gens if rank([a for a in normals if dot(g, a) == 0] + list(equations)) == ambient - 1]
        return cls(tuple(gens), normals, equations, ambient)

    @property
    def dim(self) -> int:
        return rank(self.generators) if self.generators else 0

    @property
    def is_pointed(self) -> bool:
        return rank(list(self.halfspaces) + list(self.equations)) == self.ambient

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient

    def contains(self, point: Sequence) -> bool:
        return all(dot(point, a) >= 0 for a in self.halfspaces) and all(dot(point, a) == 0 for a in self.equations)

    def contains_cone(self, other: 'Cone') -> bool:
        return all(self.contains(g) for g in other.generators)

    def dual(self) -> 'Cone':
        gens = list(self.halfspaces) + list(self.equations) + [neg(a) for a in self.equations]
        return Cone.create(gens, self.ambient)

    def interior_covector(self) -> IntVector:
        """A covector positive on every nonzero element of a pointed cone."""
        if not self.is_pointed:
            raise PolytopeError("Cone is not pointed.")
        total = tuple(sum(coords) for coords in zip(*self.halfspaces)) if self.halfspaces else (0,) * self.ambient
        return total

    def as_dict(self) -> list:
        return [list(g) for g in self.generators]


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """Pointed polyhedron, the Minkowski sum of its finite part and its recession cone."""

    finite_part: RationalPolytope
    recession: Cone
    halfspaces: tuple[Halfspace, ...]
    equations: tuple[Halfspace, ...]
    ambient: int

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polyhedron):
            return NotImplemented
        return self.finite_part == other.finite_part and self.recession == other.recession

    def __hash__(self) -> int:
        return hash((self.finite_part, self.recession))

    @property
    def vertices(self) -> tuple[RatVector, ...]:
        return self.finite_part.vertices

    def contains(self, point: Sequence) -> bool:
        return all(dot(point, a) >= -b for a, b in self.halfspaces) and all(
            dot(point, a) == -b for a, b in self.equations
        )

    def truncate(self, covector: Sequence[int], level) -> RationalPolytope | None:
        """The bounded part {x in Q : <x, covector> <= level}."""
        if any(dot(g, covector) <= 0 for g in self.recession.generators):
            raise PolytopeError(f"Covector {tuple(covector)} does not bound the recession cone.")
        halfspaces = list(self.halfspaces) + [(neg(covector), Fraction(level))]
        return from_halfspaces(halfspaces, self.equations, self.ambient)

    def as_dict(self) -> dict:
        return {**self.finite_part.as_dict(), PROP_RECESSION: self.recession.as_dict()}


def polyhedron_sum(polytope: RationalPolytope, cone: Cone) -> Polyhedron:
    if polytope.ambient != cone.ambient:
        raise DimensionError("Polytope and cone live in different dimensions.", polytope.ambient, cone.ambient)
    if not cone.is_pointed:
        raise PolytopeError("Recession cone must be strongly convex.")
    halfspaces, equations = _inequalities(polytope.vertices, cone.generators)
    vertices = [
        v for v in polytope.vertices if rank(_tight_normals(v, halfspaces, equations)) == polytope.ambient
    ]
    return Polyhedron(hull(vertices), cone, tuple(halfspaces), tuple(equations), polytope.ambient)


def finite_boundary(polyhedron: Polyhedron, maximal: bool = False) -> list[RationalPolytope]:
    """Bounded faces of a pointed polyhedron, or only the inclusion-maximal ones."""
    verts = polyhedron.vertices
    rays = polyhedron.recession.generators
    count = len(verts)
    incidences = [
        frozenset(i for i, v in enumerate(verts) if dot(v, a) == -b)
        | frozenset(count + j for j, r in enumerate(rays) if dot(r, a) == 0)
        for a, b in polyhedron.halfspaces
    ]
    bounded = [
        face for face in _face_closure(count + len(rays), incidences) if face and max(face) < count
    ]
    if maximal:
        bounded = [face for face in bounded if not any(face < other for other in bounded)]
    result = [hull([verts[i] for i in sorted(face)]) for face in bounded]
    return sorted(result, key=lambda f: (f.dim, f.vertices))


def polyhedron_lattice_points_truncated(polyhedron: Polyhedron, covector: Sequence[int], level) -> set[IntVector]:
    """Lattice points of the polyhedron in the slab <x, covector> <= level."""
    truncated = polyhedron.truncate(covector, level)
    return set() if truncated is None else lattice_points(truncated)


def parse_polytope(data: dict) -> RationalPolytope:
    if PROP_VERTICES not in data:
        raise PolytopeError(f"Polytope object needs a {PROP_VERTICES!r} list.")
    return hull(data[PROP_VERTICES])


def parse_polyhedron(data: dict) -> Polyhedron:
    polytope = parse_polytope(data)
    cone = Cone.create(data.get(PROP_RECESSION, []), polytope.ambient)
    return polyhedron_sum(polytope, cone)
