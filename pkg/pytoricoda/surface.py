"""Lattice polygons of smooth toric surfaces: chords, contact points and translate covers.

Chord lengths are measured in units of the chord direction u, so every comparison of a chord
with |u| is an exact comparison with 1. For a direction u the plane is parametrized as
x = t * e + s * u with t = <x, n>, where n is the primitive normal of u and <e, n> = 1.
"""

import logging

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from pytoricoda.coverage import CoverReport, covers
from pytoricoda.lattice import (
    IntVector,
    RatVector,
    ToricOdaError,
    add,
    as_int_vector,
    determinant,
    dot,
    ext_gcd,
    format_rational,
    is_zero,
    neg,
    orthogonal_primitive,
    primitive,
    solve,
    sub,
)
from pytoricoda.oda import PsiReport, psi_check
from pytoricoda.polytope import (
    RationalPolytope,
    from_halfspaces,
    hull,
    intersect,
    lattice_points,
    max_translation,
    minkowski_difference,
)
from pytoricoda.toric import (
    Fan,
    PreconditionError,
    ToricLineBundle,
    bundle_of,
    cyclic_rays,
    difference,
    intersection_number,
    is_ample,
    is_nef,
    is_smooth,
    normal_fan,
    polytope_of,
)

_LOGGER = logging.getLogger(__name__)

TYPE_TAGS = ("a", "b", "c", "d", "e", "f", "g", "h")
FORBIDDEN_LEFT = frozenset("ab")
FORBIDDEN_RIGHT = frozenset("de")


class NoContactPointsError(PreconditionError):
    """Every chord in the direction is shorter than the direction vector."""

    def __init__(self, direction: IntVector, maximum: Fraction) -> None:
        super().__init__(
            f"No contact points: the longest chord along {direction} has length {format_rational(maximum)} < 1."
        )
        self.direction = direction
        self.maximum = maximum


class ClassificationError(ToricOdaError):
    """The chord comparisons matched no type or more than one."""

    def __init__(self, vector: IntVector, flags: dict) -> None:
        matched = sorted(tag for tag, hit in flags.items() if hit)
        super().__init__(f"Translation vector {vector} matched types {matched or 'none'}.")
        self.vector = vector
        self.flags = flags


def _require_polygon(polygon: RationalPolytope) -> None:
    if polygon.ambient != 2 or polygon.dim != 2:
        raise PreconditionError("A full-dimensional polygon in the plane is required.")


def _fmt(point: Sequence) -> list:
    return [format_rational(a) for a in point]


@dataclass(frozen=True)
class ChordFunction:
    """t -> length of the chord of the polygon on the line <x, n> = t, in units of u."""

    direction: IntVector
    normal: IntVector
    offset: IntVector
    breakpoints: tuple[tuple[Fraction, Fraction], ...]
    polygon: RationalPolytope = field(repr=False, compare=False)

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.breakpoints[0][0], self.breakpoints[-1][0]

    def parameter(self, point: Sequence) -> Fraction:
        return Fraction(dot(point, self.normal))

    def point(self, t, s) -> RatVector:
        return tuple(Fraction(t) * e + Fraction(s) * u for e, u in zip(self.offset, self.direction))

    def span(self, t) -> tuple[Fraction, Fraction]:
        """The s-range of the chord at level t."""
        lo, hi = self.domain
        if not lo <= t <= hi:
            raise PreconditionError(f"Level {t} is outside the polygon's range [{lo}, {hi}].")
        lower, upper = [], []
        for a, b in self.polygon.halfspaces:
            slope = dot(self.direction, a)
            if slope == 0:
                continue
            bound = (-b - t * dot(self.offset, a)) / Fraction(slope)
            (lower if slope > 0 else upper).append(bound)
        return max(lower), min(upper)

    def value(self, t) -> Fraction:
        lo, hi = self.span(Fraction(t))
        return hi - lo

    def at(self, point: Sequence) -> Fraction:
        return self.value(self.parameter(point))

    def endpoints(self, t) -> tuple[RatVector, RatVector]:
        lo, hi = self.span(Fraction(t))
        return self.point(t, lo), self.point(t, hi)

    def maximum(self) -> Fraction:
        return max(v for _, v in self.breakpoints)

    def maximum_on(self, start, end) -> Fraction:
        """Maximum over levels between start and end."""
        lo, hi = sorted((Fraction(start), Fraction(end)))
        inner = [v for t, v in self.breakpoints if lo < t < hi]
        return max([self.value(lo), self.value(hi)] + inner)

    def level_interval(self, level=1) -> tuple[Fraction, Fraction] | None:
        """The interval of levels where the chord is at least the given length."""
        level = Fraction(level)
        pts = self.breakpoints
        above = [i for i, (_, v) in enumerate(pts) if v >= level]
        if not above:
            return None

        def cross(i: int, j: int) -> Fraction:
            (t0, v0), (t1, v1) = pts[i], pts[j]
            return t0 + (level - v0) * (t1 - t0) / (v1 - v0)

        first, last = above[0], above[-1]
        start = pts[0][0] if first == 0 else cross(first - 1, first)
        end = pts[-1][0] if last == len(pts) - 1 else cross(last, last + 1)
        return start, end

    def is_concave(self) -> bool:
        slopes = [
            (v1 - v0) / (t1 - t0) for (t0, v0), (t1, v1) in zip(self.breakpoints, self.breakpoints[1:])
        ]
        return all(a >= b for a, b in zip(slopes, slopes[1:]))

    def as_dict(self) -> dict:
        return {
            "direction": list(self.direction),
            "normal": list(self.normal),
            "breakpoints": [[format_rational(t), format_rational(v)] for t, v in self.breakpoints],
            "maximum": format_rational(self.maximum()),
        }


def chord_function(polygon: RationalPolytope, direction: Sequence[int]) -> ChordFunction:
    _require_polygon(polygon)
    u = as_int_vector(direction)
    if is_zero(u):
        raise PreconditionError("Chord direction must be nonzero.")
    n = primitive((-u[1], u[0]))
    _, x, y = ext_gcd(n[0], n[1])
    offset = (x, y)
    levels = sorted({Fraction(dot(v, n)) for v in polygon.vertices})
    probe = ChordFunction(u, n, offset, tuple((t, Fraction(0)) for t in levels), polygon)
    return ChordFunction(u, n, offset, tuple((t, probe.value(t)) for t in levels), polygon)


@dataclass(frozen=True)
class ContactPointSet:
    direction: IntVector
    points: tuple[RatVector, ...]
    interval: tuple[Fraction, Fraction]

    def as_dict(self) -> dict:
        return {
            "direction": list(self.direction),
            "points": [_fmt(p) for p in self.points],
            "interval": [format_rational(a) for a in self.interval],
        }


def _on_boundary(polygon: RationalPolytope, point: Sequence) -> bool:
    return any(dot(point, a) == -b for a, b in polygon.halfspaces)


def _is_contact_point(polygon: RationalPolytope, direction: IntVector, point: RatVector) -> bool:
    back = sub(point, direction)
    if not (polygon.contains(point) and polygon.contains(back)):
        return False
    if not (_on_boundary(polygon, point) and _on_boundary(polygon, back)):
        return False
    # stepping further against u leaves u + P through a facet facing u
    return any(dot(back, a) == -b and dot(direction, a) > 0 for a, b in polygon.halfspaces)


def contact_points(polygon: RationalPolytope, direction: Sequence[int]) -> ContactPointSet:
    chords = chord_function(polygon, direction)
    interval = chords.level_interval(1)
    if interval is None:
        raise NoContactPointsError(chords.direction, chords.maximum())
    points = []
    for t in sorted(set(interval)):
        lo, _ = chords.span(t)
        point = chords.point(t, lo + 1)
        if not _is_contact_point(polygon, chords.direction, point):
            raise AssertionError(f"Point {point} fails the contact point conditions for {chords.direction}.")
        points.append(point)
    return ContactPointSet(chords.direction, tuple(points), interval)


def contact_region_check(polygon: RationalPolytope, direction: Sequence[int]) -> bool:
    """P cap (u + P) lies between the lines through the contact points parallel to u."""
    found = contact_points(polygon, direction)
    overlap = intersect(polygon, polygon.translate(found.direction))
    if overlap is None:
        return True
    n = primitive((-found.direction[1], found.direction[0]))
    lo, hi = found.interval
    return all(lo <= dot(v, n) <= hi for v in overlap.vertices)


@dataclass(frozen=True)
class TranslationVectorType:
    tag: str
    vector: IntVector
    contact_positions: tuple[Fraction, ...] | None = None
    chord_first: Fraction | None = None
    chord_second: Fraction | None = None
    segment_max: Fraction | None = None

    def as_dict(self) -> dict:
        def opt(value):
            return None if value is None else format_rational(value)

        return {
            "tag": self.tag,
            "vector": list(self.vector),
            "contact_positions": None
            if self.contact_positions is None
            else [format_rational(a) for a in self.contact_positions],
            "chord_first": opt(self.chord_first),
            "chord_second": opt(self.chord_second),
            "segment_max": opt(self.segment_max),
        }


def _edge_of(polygon: RationalPolytope, first: Sequence, second: Sequence) -> bool:
    return any(dot(first, a) == -b and dot(second, a) == -b for a, b in polygon.halfspaces)


def _positions_on_edge(points, vector, start, end) -> tuple[Fraction, ...] | None:
    """Where the lines through the points along the vector meet the line start-end (start at 0, end at 1)."""
    edge = sub(end, start)
    if determinant([vector, edge]) == 0:
        return None
    result = []
    for point in points:
        # point + mu * vector = start + lam * edge
        mu_lam = solve([[vector[0], -edge[0]], [vector[1], -edge[1]]], sub(start, point))
        result.append(mu_lam[1])
    return tuple(sorted(result))


def classify_translation_vector(
    polygon: RationalPolytope, vector: Sequence[int], first: Sequence, second: Sequence
) -> TranslationVectorType:
    """Type a) to h) of a translation vector against the edge from first to second."""
    v = as_int_vector(vector)
    if is_zero(v):
        raise PreconditionError("Translation vector must be nonzero.")
    first, second = tuple(Fraction(a) for a in first), tuple(Fraction(a) for a in second)
    if first not in polygon.vertices or second not in polygon.vertices or not _edge_of(polygon, first, second):
        raise PreconditionError("The two points must be the endpoints of an edge of the polygon.")
    chords = chord_function(polygon, v)
    if chords.maximum() < 1:
        return TranslationVectorType("h", v)
    interval = chords.level_interval(1)
    if interval[0] == interval[1]:
        return TranslationVectorType("g", v)
    p, q = chords.at(first), chords.at(second)
    m = chords.maximum_on(chords.parameter(first), chords.parameter(second))
    flags = {
        "a": m < 1 and p > q,
        "b": p >= 1 > q,
        "c": m >= 1 and p >= 1 and q >= 1,
        "d": q >= 1 > p,
        "e": m < 1 and q > p,
        "f": m >= 1 and p < 1 and q < 1,
    }
    tags = [tag for tag, hit in flags.items() if hit]
    if len(tags) != 1:
        raise ClassificationError(v, flags)
    found = contact_points(polygon, v)
    positions = _positions_on_edge(found.points, v, first, second)
    return TranslationVectorType(tags[0], v, positions, p, q, m)


def _frame(alpha: Sequence[int], beta: Sequence[int]) -> tuple[IntVector, IntVector]:
    """u_h, u_v with <u_h, alpha> = <u_v, beta> = -1 and <u_h, beta> = <u_v, alpha> = 0."""
    if abs(determinant([alpha, beta])) != 1:
        raise PreconditionError(f"Rays {tuple(alpha)} and {tuple(beta)} do not span a smooth cone.")
    u_h = solve([alpha, beta], [-1, 0])
    u_v = solve([alpha, beta], [0, -1])
    return tuple(int(a) for a in u_h), tuple(int(a) for a in u_v)


def _coords(point: Sequence, u_h: IntVector, u_v: IntVector) -> RatVector:
    return solve([[u_h[0], u_v[0]], [u_h[1], u_v[1]]], point)


def _neighbors(polygon: RationalPolytope, vertex: RatVector) -> list[RatVector]:
    return [w for w in polygon.vertices if w != vertex and _edge_of(polygon, vertex, w)]


def _lowest_vertex(polygon: RationalPolytope, u_h: IntVector, u_v: IntVector):
    """The unique vertex with smallest u_v coordinate and its edge vectors (u_-1, u_1), or None."""
    heights = {v: _coords(v, u_h, u_v)[1] for v in polygon.vertices}
    bottom = min(heights.values())
    lowest = [v for v, h in heights.items() if h == bottom]
    if len(lowest) != 1:
        return None
    vertex = lowest[0]
    edges = [primitive(sub(w, vertex)) for w in _neighbors(polygon, vertex)]
    if len(edges) != 2:
        return None
    first, second = edges
    frame_first, frame_second = _coords(first, u_h, u_v), _coords(second, u_h, u_v)
    if determinant([frame_first, frame_second]) < 0:
        first, second = second, first
    return vertex, first, second


@dataclass(frozen=True)
class DPoint:
    point: RatVector
    vector_dc: RatVector
    coefficients: tuple[int, int, int, int]

    def as_dict(self) -> dict:
        return {
            "point": _fmt(self.point),
            "vector_dc": _fmt(self.vector_dc),
            "coefficients": list(self.coefficients),
        }


def d_point(
    corner: Sequence, u_minus: Sequence[int], u_plus: Sequence[int], u_h: Sequence[int], u_v: Sequence[int]
) -> DPoint:
    """Meet of the line through C - u_h along u_1 with the line through C - u_v along u_-1.

    With u_-1 = a u_h + b u_v and u_1 = c u_h + d u_v, ad - bc = 1, the vector from D to C is
    a u_1 + d u_-1.
    """
    a, b = (int(x) for x in _coords(u_minus, u_h, u_v))
    c, d = (int(x) for x in _coords(u_plus, u_h, u_v))
    if a * d - b * c != 1:
        raise PreconditionError(f"Edge vectors {tuple(u_minus)}, {tuple(u_plus)} are not a positive lattice basis.")
    corner = tuple(Fraction(x) for x in corner)
    c_h, c_v = sub(corner, u_h), sub(corner, u_v)
    # c_h + s * u_1 = c_v + r * u_-1
    s_r = solve([[u_plus[0], -u_minus[0]], [u_plus[1], -u_minus[1]]], sub(c_v, c_h))
    point = tuple(x + s_r[0] * y for x, y in zip(c_h, u_plus))
    closed = tuple(a * x + d * y for x, y in zip(u_plus, u_minus))
    if sub(corner, point) != closed:
        raise AssertionError(f"D point {point} disagrees with the closed form {closed}.")
    if any(x.denominator != 1 for x in point):
        raise AssertionError(f"D point {point} is not a lattice point.")
    return DPoint(point, closed, (a, b, c, d))


def blow_down_ray(fan: Fan) -> int | None:
    """A ray equal to the sum of its two neighbours, the first in counterclockwise order."""
    order = cyclic_rays(fan)
    count = len(order)
    for k, i in enumerate(order):
        before, after = fan.rays[order[k - 1]], fan.rays[order[(k + 1) % count]]
        if add(before, after) == fan.rays[i]:
            return i
    return None


def _ray_neighbors(fan: Fan, index: int) -> tuple[int, int]:
    order = cyclic_rays(fan)
    k = order.index(index)
    return order[k - 1], order[(k + 1) % len(order)]


def _blow_down(fan: Fan, index: int) -> tuple[Fan, list[int]]:
    alpha, beta = _ray_neighbors(fan, index)
    keep = [i for i in range(len(fan.rays)) if i != index]
    position = {old: new for new, old in enumerate(keep)}
    cones = [tuple(position[i] for i in cone) for cone in fan.max_cones if index not in cone]
    cones.append((position[alpha], position[beta]))
    return Fan.create([fan.rays[i] for i in keep], cones), keep


def sfhn_four_vector_cover(
    polygon: RationalPolytope,
    chi: Sequence[int],
    context: RationalPolytope,
    alpha: Sequence[int] | None = None,
    beta: Sequence[int] | None = None,
) -> CoverReport:
    """Cover (chi + P1) cap P2 by the translates by chi - u_h, chi - u_v, chi - u_-1, chi - u_1."""
    chi = as_int_vector(chi)
    if alpha is None or beta is None:
        fan = normal_fan(polygon)
        ray = blow_down_ray(fan)
        if ray is None:
            raise PreconditionError("The polygon's fan has no ray to blow down.")
        first, second = _ray_neighbors(fan, ray)
        alpha, beta = fan.rays[first], fan.rays[second]
    u_h, u_v = _frame(alpha, beta)
    moved = polygon.translate(chi)
    if context.contains_polytope(moved):
        raise PreconditionError(f"Translate by {chi} already lies inside the surrounding polygon.")
    lowest = _lowest_vertex(moved, u_h, u_v)
    if lowest is None:
        raise PreconditionError("The translate has no unique lowest vertex.")
    _, u_minus, u_plus = lowest
    shifts = [neg(u_h), neg(u_v), neg(u_minus), neg(u_plus)]
    pieces = []
    for shift in shifts:
        piece = polygon.translate(add(chi, shift))
        if not context.contains_polytope(piece):
            raise PreconditionError(f"Translate by {add(chi, shift)} does not fit inside the surrounding polygon.")
        pieces.append(piece)
    target = intersect(moved, context)
    if target is None:
        return CoverReport(True, None, 0)
    return covers(target, pieces)


def unimodular_parallelogram(polygon: RationalPolytope, vertex: Sequence) -> RationalPolytope:
    """The unit parallelogram spanned by the two edge directions at a vertex of a smooth polygon."""
    _require_polygon(polygon)
    vertex = tuple(Fraction(a) for a in vertex)
    if vertex not in polygon.vertices:
        raise PreconditionError(f"{vertex} is not a vertex of the polygon.")
    if len(lattice_points(polygon)) < 4:
        raise PreconditionError("The polygon must contain at least four lattice points.")
    first, second = (primitive(sub(w, vertex)) for w in _neighbors(polygon, vertex))
    if abs(determinant([first, second])) != 1:
        raise PreconditionError(f"The polygon is not smooth at {vertex}.")
    result = hull([vertex, add(vertex, first), add(vertex, second), add(add(vertex, first), second)])
    if not polygon.contains_polytope(result):
        raise AssertionError(f"Unit parallelogram at {vertex} leaves the polygon.")
    return result


def _is_unimodular_triangle(polygon: RationalPolytope) -> bool:
    return len(polygon.vertices) == 3 and len(lattice_points(polygon)) == 3


def translation_vector_fan(
    p0: Sequence[int], index: RationalPolytope, u_h: Sequence[int], u_v: Sequence[int]
) -> list[tuple[tuple[int, int], IntVector]]:
    """Primitive vectors a u_h + b u_v (a, b >= 0) from p0 to lattice points of the index polygon.

    Ordered from u_v towards u_h.
    """
    result = []
    for point in lattice_points(index):
        a, b = (int(x) for x in _coords(sub(point, p0), u_h, u_v))
        if a < 0 or b < 0 or (a, b) == (0, 0) or primitive((a, b)) != (a, b):
            continue
        result.append(((a, b), sub(point, p0)))
    return sorted(result, key=lambda item: Fraction(item[0][0], item[0][0] + item[0][1]))


@dataclass(frozen=True)
class CertificateStep:
    rule: str
    rays: int
    s1: int | None
    s2: int | None
    translates: int

    def as_dict(self) -> dict:
        return {"rule": self.rule, "rays": self.rays, "s1": self.s1, "s2": self.s2, "translates": self.translates}


@dataclass(frozen=True)
class CertificateReport:
    covered: bool
    translates: tuple[IntVector, ...]
    steps: tuple[CertificateStep, ...]
    lambdas: dict

    def as_dict(self) -> dict:
        return {
            "covered": self.covered,
            "translates": [list(m) for m in self.translates],
            "steps": [s.as_dict() for s in self.steps],
            "lambdas": {k: None if v is None else format_rational(v) for k, v in self.lambdas.items()},
        }


@dataclass(frozen=True)
class SfhnReport(PsiReport):
    certificate: CertificateReport | None = None

    @property
    def agrees(self) -> bool:
        return self.certificate is None or self.certificate.covered == self.covered

    def as_dict(self) -> dict:
        result = super().as_dict()
        if self.certificate is not None:
            result["certificate"] = self.certificate.as_dict()
        return result


def _edge_directions(fan: Fan, ray: int, u_h: IntVector, u_v: IntVector) -> list[IntVector]:
    """Primitive edge directions of the polygons on the fan that point into the (u_h, u_v) quadrant."""
    result = []
    for i, rho in enumerate(fan.rays):
        if i == ray:
            continue
        u = orthogonal_primitive([rho], 2)
        a, b = _coords(u, u_h, u_v)
        if a <= 0 and b <= 0:
            u, a, b = neg(u), -a, -b
        if a >= 0 and b >= 0 and u not in result:
            result.append(u)
    return result


def _corner_patch(chi: IntVector, directions: list[IntVector], index: set) -> set:
    """Index points in the hull of chi and its steps chi + u that stay in the index."""
    corners = [chi] + [add(chi, u) for u in directions if add(chi, u) in index]
    if len(corners) == 1:
        return {chi} & index
    return lattice_points(hull(corners)) & index


def _grow_cover(small: RationalPolytope, large: RationalPolytope, chosen: set, index: set) -> set:
    """Add one translate per uncovered witness until the translates cover or none fits."""
    chosen = set(chosen)
    while True:
        report = covers(large, [small.translate(m) for m in sorted(chosen)])
        if report.covered:
            return chosen
        fits = [p for p in sorted(index - chosen) if small.translate(p).contains(report.witness)]
        if not fits:
            _LOGGER.debug("No translate holds the uncovered point %s", report.witness)
            return chosen
        chosen.add(fits[0])


def _certify(fan: Fan, first: tuple, second: tuple, steps: list) -> set:
    """Translation vectors whose translates of P_first cover P_second, built by blow-down induction."""
    small, large = ToricLineBundle(fan, first), ToricLineBundle(fan, second)
    index_polygon = polytope_of(difference(large, small))
    index = lattice_points(index_polygon) if index_polygon is not None else set()
    ray = blow_down_ray(fan) if len(fan.rays) > 4 else None
    if ray is None or not is_ample(small) or not is_nef(large):
        small_polygon, large_polygon = polytope_of(small), polytope_of(large)
        base = set()
        if index and small_polygon is not None and large_polygon is not None:
            corners = {as_int_vector(v) for v in index_polygon.vertices if all(a.denominator == 1 for a in v)}
            base = _grow_cover(small_polygon, large_polygon, corners & index, index)
        steps.append(CertificateStep("base", len(fan.rays), None, None, len(base)))
        return base
    curve = next(c for c in fan.walls if c.wall == (ray,))
    s1 = intersection_number(small, curve)
    s2 = intersection_number(large, curve)
    alpha, beta = _ray_neighbors(fan, ray)
    u_h, u_v = _frame(fan.rays[alpha], fan.rays[beta])

    def bump(coeffs):
        return tuple(a + (1 if i == ray else 0) for i, a in enumerate(coeffs))

    if s1 >= 2 or s2 == 1:
        # the index polygon does not change; each translate loses the strip cut off at its corner
        if s1 >= 2:
            inner = _certify(fan, bump(first), bump(second), steps)
            rule = "shift"
        else:
            coarse, keep = _blow_down(fan, ray)
            raised_first, raised_second = bump(first), bump(second)
            inner = _certify(
                coarse, tuple(raised_first[i] for i in keep), tuple(raised_second[i] for i in keep), steps
            )
            rule = "blow-down"
        directions = _edge_directions(fan, ray, u_h, u_v)
        result = set()
        for chi in sorted(inner & index):
            result |= _corner_patch(chi, directions, index)
    else:
        inner = _certify(fan, first, bump(second), steps)
        result = inner & index
        polygon = polytope_of(small)
        for chi in sorted(inner - index):
            shifts = [neg(u_h), neg(u_v)]
            lowest = _lowest_vertex(polygon.translate(chi), u_h, u_v)
            if lowest is not None:
                corner, u_minus, u_plus = lowest
                shifts += [neg(u_minus), neg(u_plus)]
                try:
                    shifts.append(tuple(int(-x) for x in d_point(corner, u_minus, u_plus, u_h, u_v).vector_dc))
                except (PreconditionError, AssertionError) as err:
                    _LOGGER.debug("No D point for translate %s: %s", chi, err)
            result |= {add(chi, shift) for shift in shifts} & index
        rule = "four-vector"
    _LOGGER.debug(
        "Certificate step %s on %d rays (s1=%s, s2=%s): %d translates", rule, len(fan.rays), s1, s2, len(result)
    )
    steps.append(CertificateStep(rule, len(fan.rays), s1, s2, len(result)))
    return result


def sfhn_verify(small: RationalPolytope, large: RationalPolytope, with_certificate: bool = False) -> SfhnReport:
    """Cover P2 by lattice translates of a smooth polygon P1 that is not a unimodular triangle."""
    _require_polygon(small)
    if not small.is_lattice or not large.is_lattice:
        raise PreconditionError("Both polygons must be lattice polygons.")
    if _is_unimodular_triangle(small):
        raise PreconditionError(
            "P1 is a unimodular triangle, the exceptional O(1) on the projective plane; "
            "its translates never cover 2P1 (see psi_check of the triangle and its double)."
        )
    fan = normal_fan(small)
    if not is_smooth(fan):
        raise PreconditionError("The normal fan of P1 is not smooth.")
    index = minkowski_difference(large, small)
    if index is None or not lattice_points(index):
        raise PreconditionError("No lattice translate of P1 fits inside P2.")
    direct = psi_check(small, large)
    if not with_certificate:
        return SfhnReport(direct.inner, direct.translates, direct.note)
    first, second = bundle_of(fan, small), bundle_of(fan, large)
    if polytope_of(second) != large or not is_nef(second) or not is_nef(difference(second, first)):
        raise PreconditionError("P2 must come from a nef bundle above P1 on the normal fan of P1.")
    steps: list[CertificateStep] = []
    found = _certify(fan, first.coeffs, second.coeffs, steps)
    grown = _grow_cover(small, large, found, set(lattice_points(index)))
    if len(grown) > len(found):
        _LOGGER.info("Induction left part of P2 uncovered, %d translates added", len(grown) - len(found))
        steps.append(CertificateStep("witness", len(fan.rays), None, None, len(grown)))
    translates = tuple(sorted(grown))
    verdict = covers(large, [small.translate(m) for m in translates]).covered
    lambdas = {}
    ray = blow_down_ray(fan)
    if ray is not None:
        alpha, beta = _ray_neighbors(fan, ray)
        u_h, u_v = _frame(fan.rays[alpha], fan.rays[beta])
        lambdas = {"u_h": max_translation(small, large, u_h), "u_v": max_translation(small, large, u_v)}
    certificate = CertificateReport(verdict, translates, tuple(steps), lambdas)
    report = SfhnReport(direct.inner, direct.translates, direct.note, certificate)
    if not report.agrees:
        _LOGGER.warning("Certificate verdict %s disagrees with direct verdict %s", verdict, direct.covered)
    return report


@dataclass(frozen=True)
class ProbeHit:
    p0: IntVector
    first: IntVector
    first_tag: str
    second: IntVector
    second_tag: str

    def as_dict(self) -> dict:
        return {
            "p0": list(self.p0),
            "first": list(self.first),
            "first_tag": self.first_tag,
            "second": list(self.second),
            "second_tag": self.second_tag,
        }


@dataclass(frozen=True)
class ProbeReport:
    pairs_checked: int
    hits: tuple[ProbeHit, ...]
    unclassifiable: tuple[tuple[IntVector, IntVector], ...]

    def as_dict(self) -> dict:
        return {
            "pairs_checked": self.pairs_checked,
            "hits": [h.as_dict() for h in self.hits],
            "unclassifiable": [[list(p0), list(v)] for p0, v in self.unclassifiable],
        }


def _strict_two_contacts(polygon: RationalPolytope, vector: IntVector) -> bool:
    chords = chord_function(polygon, vector)
    if chords.maximum() <= 1:
        return False
    start, end = chords.level_interval(1)
    return start < end


def adjacency_probe(small: RationalPolytope, large: RationalPolytope, p0: Sequence[int] | None = None) -> ProbeReport:
    """Look for consecutive translation vectors of types a)/b) next to d)/e).

    Only vectors with a chord strictly longer than themselves are compared, and only neighbours
    within a run of such vectors. Starting points default to the interior lattice points of the
    translate index polygon.
    """
    fan = normal_fan(small)
    ray = blow_down_ray(fan)
    if ray is None:
        raise PreconditionError("The polygon's fan has no ray to blow down.")
    alpha, beta = _ray_neighbors(fan, ray)
    u_h, u_v = _frame(fan.rays[alpha], fan.rays[beta])
    rho = fan.rays[ray]
    offset = -small.support(rho)
    edge = [v for v in small.vertices if dot(v, rho) == -offset]
    first, second = sorted(edge, key=lambda v: _coords(v, u_h, u_v)[0])
    index = minkowski_difference(large, small)
    if index is None:
        raise PreconditionError("No translate of P1 fits inside P2.")
    if p0 is None:
        starts = sorted(p for p in lattice_points(index) if not _on_boundary(index, p))
    else:
        starts = [as_int_vector(p0)]
    pairs, hits, unclassifiable = 0, [], []
    for start in starts:
        previous = None
        for _, vector in translation_vector_fan(start, index, u_h, u_v):
            if not _strict_two_contacts(small, vector):
                previous = None
                continue
            try:
                tag = classify_translation_vector(small, vector, first, second).tag
            except ClassificationError:
                unclassifiable.append((start, vector))
                previous = None
                continue
            if previous is not None:
                pairs += 1
                tags = {previous[1], tag}
                if tags & FORBIDDEN_LEFT and tags & FORBIDDEN_RIGHT:
                    hit = ProbeHit(start, previous[0], previous[1], vector, tag)
                    _LOGGER.warning("Forbidden adjacency: %s", hit)
                    hits.append(hit)
            previous = (vector, tag)
    return ProbeReport(pairs, tuple(hits), tuple(unclassifiable))


def _height_normal(polygon: RationalPolytope, vertex: RatVector) -> IntVector:
    tight = [a for a, b in polygon.halfspaces if dot(vertex, a) == -b]
    return tuple(sum(coords) for coords in zip(*tight))


def _chains(polygon: RationalPolytope, vertex: RatVector) -> tuple[list, list]:
    """Facets met walking up both sides from a vertex: (s_1, s_2, ...) and (s_-1, s_-2, ...)."""
    height = _height_normal(polygon, vertex)
    top = max(dot(v, height) for v in polygon.vertices)
    sides = []
    for start in _neighbors(polygon, vertex):
        chain, current, came = [], vertex, None
        nxt = start
        while True:
            facet = next((a, b) for a, b in polygon.halfspaces if dot(current, a) == -b and dot(nxt, a) == -b)
            chain.append(facet)
            if dot(nxt, height) == top:
                break
            came, current = current, nxt
            nxt = next(w for w in _neighbors(polygon, current) if w != came)
        sides.append(chain)
    first, second = (sub(w, vertex) for w in _neighbors(polygon, vertex))
    # s_1 leaves x0 counterclockwise of s_-1
    if determinant([first, second]) > 0:
        return sides[1], sides[0]
    return sides[0], sides[1]


def _lowest_chord(region: RationalPolytope, direction, length, height) -> tuple | None:
    chords = chord_function(region, direction)
    interval = chords.level_interval(length)
    if interval is None:
        return None
    candidates = []
    for t in sorted(set(interval)):
        if chords.value(t) != length:
            continue
        lo, hi = chords.endpoints(t)
        candidates.append((dot(add(lo, hi), height), lo, hi))
    if not candidates:
        return None
    _, lo, hi = min(candidates)
    return lo, hi


def chord_order_check(
    polygon: RationalPolytope, x0: Sequence, u: Sequence[int], v: Sequence[int], lengths: Sequence
) -> bool:
    """Compare chord positions in the smallest region P_{m,-n} sharing both chords with P.

    The region P_{m,-n} is cut out by the first m facets climbing one side of x0 and the first n
    climbing the other. Returns whether the u-chord lies on the far side of the v-chord from x0.
    """
    _require_polygon(polygon)
    x0 = tuple(Fraction(a) for a in x0)
    if x0 not in polygon.vertices:
        raise PreconditionError(f"{x0} is not a vertex of the polygon.")
    u, v = as_int_vector(u), as_int_vector(v)
    length_u, length_v = (Fraction(a) for a in lengths)
    height = _height_normal(polygon, x0)
    for direction, length in ((u, length_u), (v, length_v)):
        chords = chord_function(polygon, direction)
        if chords.at(x0) != 0:
            raise PreconditionError(f"The chord through {x0} along {direction} is not degenerate.")
        if chords.maximum() < length:
            raise PreconditionError(f"No chord along {direction} reaches length {length}.")
    plus, minus = _chains(polygon, x0)
    top = max(dot(w, height) for w in polygon.vertices)
    cap = (neg(height), Fraction(top))

    def region(m: int, n: int) -> RationalPolytope:
        return from_halfspaces(list(plus[:m]) + list(minus[:n]) + [cap], ambient=2)

    def shared(direction, length) -> tuple[int, int] | None:
        pairs = sorted(
            ((m, n) for m in range(1, len(plus) + 1) for n in range(1, len(minus) + 1)),
            key=lambda mn: (mn[0] + mn[1], mn[0]),
        )
        for m, n in pairs:
            chord = _lowest_chord(region(m, n), direction, length, height)
            if chord is not None and all(polygon.contains(p) for p in chord):
                return m, n
        return None

    def above(m: int, n: int) -> bool:
        body = region(m, n)
        chord_u = _lowest_chord(body, u, length_u, height)
        chord_v = _lowest_chord(body, v, length_v, height)
        if chord_u is None or chord_v is None:
            raise PreconditionError(f"Region P_{{{m},-{n}}} lacks one of the chords.")
        normal = (-u[1], u[0])
        base = dot(sub(x0, chord_u[0]), normal)
        return all(dot(sub(p, chord_u[0]), normal) * base >= 0 for p in chord_v)

    if not above(1, 1):
        raise PreconditionError("The u-chord does not start above the v-chord next to x0.")
    found_u, found_v = shared(u, length_u), shared(v, length_v)
    if found_u is None or found_v is None:
        raise PreconditionError("The polygon does not share both chords with any region.")
    m, n = max(found_u[0], found_v[0]), max(found_u[1], found_v[1])
    return above(m, n)
