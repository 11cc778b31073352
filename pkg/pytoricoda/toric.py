"""Complete fans, toric line bundles and their intersection theory.

A bundle is stored by its ray coefficients a_rho; its polytope is {m : <m, rho> >= -a_rho}.
On a maximal cone sigma the Cartier datum m_sigma solves <m, rho> = -a_rho for the rays of sigma.
"""

import functools
import itertools
import logging
import math

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from pytoricoda.const import HILBERT_CHECK_DEGREE, MAX_PICARD_RANK, PROP_COEFFS, PROP_FAN, PROP_MAX_CONES, PROP_RAYS
from pytoricoda.lattice import (
    IntVector,
    RatVector,
    ToricOdaError,
    as_int_vector,
    check_dimension,
    determinant,
    dot,
    is_primitive,
    is_zero,
    neg,
    orthogonal_primitive,
    parse_rational,
    rank,
    solve,
    sub,
)
from pytoricoda.polytope import Cone, RationalPolytope, _generators, from_halfspaces, lattice_points

_LOGGER = logging.getLogger(__name__)


class FanError(ToricOdaError, ValueError):
    """Invalid fan; cone names the offending cone when there is one."""

    def __init__(self, message: str, cone=None) -> None:
        super().__init__(message if cone is None else f"{message} (cone {tuple(cone)})")
        self.cone = None if cone is None else tuple(cone)


class UnsupportedError(ToricOdaError):
    """Input outside the desk-scale range this package handles."""


class PreconditionError(ToricOdaError, ValueError):
    """An operation was called outside its preconditions."""


@dataclass(frozen=True)
class InvariantCurveIndex:
    """A wall shared by two maximal cones, indexing the invariant curve C_tau."""

    id: int
    wall: tuple[int, ...]
    cones: tuple[int, int]

    def as_dict(self) -> dict:
        return {"id": self.id, "wall": list(self.wall), "cones": list(self.cones)}


@dataclass(frozen=True)
class LinearSubsetIndex:
    """Equalities on the walls in J and lower bounds b elsewhere; b is indexed by wall id."""

    J: frozenset[int]
    b: tuple[int, ...]

    @classmethod
    def create(cls, J: Iterable[int], b: Sequence[int]) -> 'LinearSubsetIndex':
        b = tuple(int(x) for x in b)
        J = frozenset(J)
        if any(x < 0 for x in b):
            raise PreconditionError(f"Linear subset bounds {b} must be nonnegative.")
        if any(not 0 <= j < len(b) for j in J):
            raise PreconditionError(f"Index set {sorted(J)} is not inside the {len(b)} walls.")
        return cls(J, b)


def _cone_of(rays: Sequence[IntVector], cone: Sequence[int], dim: int) -> Cone:
    return Cone.create([rays[i] for i in cone], dim)


@dataclass(frozen=True, eq=False)
class Fan:
    """Fan given by primitive rays and maximal cones as ray-index tuples."""

    rays: tuple[IntVector, ...]
    max_cones: tuple[tuple[int, ...], ...]
    dim: int
    complete: bool
    walls: tuple[InvariantCurveIndex, ...]

    def _key(self) -> frozenset:
        return frozenset(frozenset(self.rays[i] for i in cone) for cone in self.max_cones)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Fan):
            return NotImplemented
        return self.dim == other.dim and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    @classmethod
    def create(
        cls, rays: Iterable[Sequence[int]], max_cones: Iterable[Sequence[int]], require_complete: bool = True
    ) -> 'Fan':
        """Validate and build a fan."""
        rays = tuple(as_int_vector(r) for r in rays)
        if not rays:
            raise FanError("A fan needs at least one ray.")
        dim = check_dimension(len(rays[0]))
        for ray in rays:
            if len(ray) != dim or not is_primitive(ray):
                raise FanError(f"Ray {ray} is not a primitive vector of dimension {dim}.")
        if len(set(rays)) != len(rays):
            raise FanError("Rays are not distinct.")
        cones = sorted({tuple(sorted(set(int(i) for i in cone))) for cone in max_cones})
        geometry = []
        for cone in cones:
            if any(not 0 <= i < len(rays) for i in cone):
                raise FanError("Cone refers to a missing ray.", cone)
            body = _cone_of(rays, cone, dim)
            if not body.is_pointed:
                raise FanError("Cone is not strongly convex.", cone)
            if not body.is_full_dimensional:
                raise FanError("Maximal cone is not full-dimensional.", cone)
            if set(body.generators) != {rays[i] for i in cone}:
                raise FanError("Cone lists rays that are not extremal.", cone)
            geometry.append(body)
        for (i, first), (j, second) in itertools.combinations(enumerate(geometry), 2):
            _check_common_face(rays, cones[i], cones[j], first, second, dim)
        facets: dict[frozenset, list] = {}
        for index, (cone, body) in enumerate(zip(cones, geometry)):
            for normal in body.halfspaces:
                tight = frozenset(i for i in cone if dot(rays[i], normal) == 0)
                facets.setdefault(tight, []).append((index, normal))
        walls, complete = [], True
        for tight, sides in sorted(facets.items(), key=lambda item: sorted(item[0])):
            if len(sides) == 1:
                complete = False
                continue
            if len(sides) > 2 or sides[0][1] != neg(sides[1][1]):
                raise FanError("Cones overlap across a facet.", cones[sides[0][0]])
            walls.append((tuple(sorted(tight)), (sides[0][0], sides[1][0])))
        if require_complete and not complete:
            raise FanError("Fan is not complete.")
        walls.sort()
        indexed = tuple(InvariantCurveIndex(k, wall, pair) for k, (wall, pair) in enumerate(walls))
        return cls(rays, tuple(cones), dim, complete, indexed)

    @property
    def picard_number(self) -> int:
        return len(self.rays) - self.dim

    def cone(self, index: int) -> Cone:
        return _cone_of(self.rays, self.max_cones[index], self.dim)

    def as_dict(self) -> dict:
        return {PROP_RAYS: [list(r) for r in self.rays], PROP_MAX_CONES: [list(c) for c in self.max_cones]}


def _check_common_face(rays, first_cone, second_cone, first: Cone, second: Cone, dim: int) -> None:
    if first_cone == second_cone:
        raise FanError("Cone listed twice.", first_cone)
    system = [(a, 0) for a in first.halfspaces + second.halfspaces]
    equations = [(a, 0) for a in first.equations + second.equations]
    _, meet, _ = _generators(system, equations, dim)
    common = [rays[i] for i in set(first_cone) & set(second_cone)]
    expected = set(Cone.create(common, dim).generators)
    if set(meet) != expected:
        raise FanError(f"Cones {first_cone} and {second_cone} do not meet in a common face.", second_cone)


def is_smooth(fan: Fan) -> bool:
    return all(len(c) == fan.dim and abs(determinant([fan.rays[i] for i in c])) == 1 for c in fan.max_cones)


def is_complete(fan: Fan) -> bool:
    return fan.complete


def parse_fan(data: Mapping) -> Fan:
    for key in (PROP_RAYS, PROP_MAX_CONES):
        if key not in data:
            raise FanError(f"Fan object needs a {key!r} list.")
    return Fan.create(data[PROP_RAYS], data[PROP_MAX_CONES])


def projective_space(dim: int) -> Fan:
    check_dimension(dim)
    units = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays = units + [tuple(-1 for _ in range(dim))]
    return Fan.create(rays, itertools.combinations(range(dim + 1), dim))


def product(first: Fan, second: Fan) -> Fan:
    """Product fan in the direct sum of the lattices."""
    zeros_first, zeros_second = (0,) * first.dim, (0,) * second.dim
    rays = [r + zeros_second for r in first.rays] + [zeros_first + s for s in second.rays]
    shift = len(first.rays)
    cones = [c + tuple(shift + i for i in d) for c in first.max_cones for d in second.max_cones]
    return Fan.create(rays, cones)


def hirzebruch(a: int) -> Fan:
    if a < 0:
        raise FanError(f"Hirzebruch index {a} must be nonnegative.")
    return Fan.create([(1, 0), (0, 1), (-1, a), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])


def blowup(fan: Fan, cone_index: int) -> Fan:
    """Stellar subdivision of a smooth maximal cone by the sum of its rays."""
    cone = fan.max_cones[cone_index]
    generators = [fan.rays[i] for i in cone]
    if len(cone) != fan.dim or abs(determinant(generators)) != 1:
        raise FanError("Only smooth cones can be blown up.", cone)
    new_ray = tuple(sum(coords) for coords in zip(*generators))
    new_index = len(fan.rays)
    cones = [c for k, c in enumerate(fan.max_cones) if k != cone_index]
    cones += [tuple(new_index if j == i else j for j in cone) for i in cone]
    _LOGGER.debug("Blowing up cone %s with new ray %s", cone, new_ray)
    return Fan.create(fan.rays + (new_ray,), cones)


def cyclic_rays(fan: Fan) -> list[int]:
    """Ray indices of a complete 2D fan in counterclockwise order starting near (1, 0)."""
    if fan.dim != 2:
        raise PreconditionError("Cyclic ray order is defined for 2D fans.")

    def half(v):
        return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1

    order = list(range(len(fan.rays)))
    # insertion sort with an exact angular comparison
    result: list[int] = []
    for i in order:
        pos = 0
        while pos < len(result):
            u, v = fan.rays[result[pos]], fan.rays[i]
            if half(u) > half(v) or (half(u) == half(v) and u[0] * v[1] - u[1] * v[0] < 0):
                break
            pos += 1
        result.insert(pos, i)
    return result


@dataclass(frozen=True)
class ToricLineBundle:
    fan: Fan
    coeffs: tuple[int, ...]

    @classmethod
    def create(cls, fan: Fan, coeffs: Iterable) -> 'ToricLineBundle':
        values = []
        for item in coeffs:
            q = parse_rational(item)
            if q.denominator != 1:
                raise PreconditionError(f"Coefficient {item!r} is not an integer.")
            values.append(q.numerator)
        if len(values) != len(fan.rays):
            raise PreconditionError(f"Expected {len(fan.rays)} coefficients, got {len(values)}.")
        return cls(fan, tuple(values))

    def as_dict(self) -> dict:
        return {PROP_FAN: self.fan.as_dict(), PROP_COEFFS: list(self.coeffs)}


def parse_bundle(data: Mapping, fan: Fan | None = None) -> ToricLineBundle:
    if fan is None:
        if PROP_FAN not in data:
            raise PreconditionError(f"Bundle object needs a {PROP_FAN!r} entry.")
        fan = parse_fan(data[PROP_FAN])
    if PROP_COEFFS not in data:
        raise PreconditionError(f"Bundle object needs a {PROP_COEFFS!r} list.")
    return ToricLineBundle.create(fan, data[PROP_COEFFS])


def polytope_of(bundle: ToricLineBundle) -> RationalPolytope | None:
    """The polytope P_L, or None when it is empty."""
    halfspaces = [(ray, a) for ray, a in zip(bundle.fan.rays, bundle.coeffs)]
    return from_halfspaces(halfspaces, ambient=bundle.fan.dim)


def bundle_of(fan: Fan, polytope: RationalPolytope) -> ToricLineBundle:
    """Bundle on the fan with tight coefficients read off a polytope."""
    coeffs = []
    for ray in fan.rays:
        value = -polytope.support(ray)
        if value.denominator != 1:
            raise PreconditionError(f"Support of the polytope along {ray} is not integral.")
        coeffs.append(value.numerator)
    return ToricLineBundle(fan, tuple(coeffs))


def normal_fan(polytope: RationalPolytope) -> Fan:
    if not polytope.is_full_dimensional:
        raise PreconditionError("Normal fans are built for full-dimensional polytopes only.")
    rays = sorted({a for a, _ in polytope.halfspaces})
    index = {ray: i for i, ray in enumerate(rays)}
    cones = [
        tuple(sorted(index[a] for a, b in polytope.halfspaces if dot(v, a) == -b)) for v in polytope.vertices
    ]
    return Fan.create(rays, cones)


def cartier_data(fan: Fan, coeffs: Sequence, cone_index: int) -> RatVector:
    """m_sigma for the given maximal cone."""
    cone = fan.max_cones[cone_index]
    result = solve([fan.rays[i] for i in cone], [-coeffs[i] for i in cone])
    if result is None:
        raise PreconditionError("Coefficients are not Cartier on this cone.")
    return result


def tensor(first: ToricLineBundle, second: ToricLineBundle) -> ToricLineBundle:
    if first.fan != second.fan:
        raise PreconditionError("Bundles live on different fans.")
    summed = ToricLineBundle(first.fan, tuple(a + b for a, b in zip(first.coeffs, second.coeffs)))
    polytope = polytope_of(summed)
    if polytope is None:
        raise PreconditionError("Tensor product has an empty polytope.")
    return bundle_of(first.fan, polytope)


def difference(larger: ToricLineBundle, smaller: ToricLineBundle) -> ToricLineBundle:
    """larger minus smaller, coefficientwise."""
    if larger.fan != smaller.fan:
        raise PreconditionError("Bundles live on different fans.")
    return ToricLineBundle(larger.fan, tuple(a - b for a, b in zip(larger.coeffs, smaller.coeffs)))


def multiple(bundle: ToricLineBundle, k: int) -> ToricLineBundle:
    return ToricLineBundle(bundle.fan, tuple(k * a for a in bundle.coeffs))


def is_nef(bundle: ToricLineBundle) -> bool:
    """Every Cartier datum m_sigma lies in P_L."""
    fan = bundle.fan
    if not fan.complete:
        raise PreconditionError("Nefness is decided on complete fans.")
    for index in range(len(fan.max_cones)):
        try:
            m = cartier_data(fan, bundle.coeffs, index)
        except PreconditionError:
            _LOGGER.debug("Coefficients %s are not Cartier on cone %d", bundle.coeffs, index)
            return False
        if any(dot(m, ray) < -a for ray, a in zip(fan.rays, bundle.coeffs)):
            return False
    return True


def is_ample(bundle: ToricLineBundle) -> bool:
    if not is_nef(bundle):
        return False
    polytope = polytope_of(bundle)
    return polytope is not None and polytope.is_full_dimensional and normal_fan(polytope) == bundle.fan


def wall_normal(fan: Fan, curve: InvariantCurveIndex) -> IntVector:
    """Primitive u_tau orthogonal to the wall, negative on the first cone's remaining rays."""
    wall_rays = [fan.rays[i] for i in curve.wall]
    basis: list[IntVector] = []
    for ray in wall_rays:
        if rank(basis + [ray]) > len(basis):
            basis.append(ray)
    u = orthogonal_primitive(basis, fan.dim)
    outside = next(fan.rays[i] for i in fan.max_cones[curve.cones[0]] if i not in curve.wall)
    return neg(u) if dot(u, outside) > 0 else u


def _wall_degree(fan: Fan, coeffs: Sequence, curve: InvariantCurveIndex) -> Fraction:
    first = cartier_data(fan, coeffs, curve.cones[0])
    second = cartier_data(fan, coeffs, curve.cones[1])
    delta = sub(first, second)
    u = wall_normal(fan, curve)
    k = next(i for i, a in enumerate(u) if a != 0)
    degree = Fraction(delta[k]) / u[k]
    if tuple(degree * a for a in u) != delta:
        raise PreconditionError("Cartier data do not differ along the wall normal.")
    return degree


def _as_number(value: Fraction):
    return value.numerator if value.denominator == 1 else value


def intersection_number(bundle: ToricLineBundle, curve: InvariantCurveIndex):
    """L.C_tau, the lattice length of the edge of P_L dual to the wall."""
    if not is_nef(bundle):
        raise PreconditionError("Intersection numbers are read off nef bundles.")
    return _as_number(_wall_degree(bundle.fan, bundle.coeffs, curve))


def intersection_vector(bundle: ToricLineBundle) -> tuple:
    return tuple(intersection_number(bundle, curve) for curve in bundle.fan.walls)


def is_general(fan: Fan) -> bool:
    """No two walls have parallel normals, i.e. no ample polytope has parallel edges."""
    lines = set()
    for curve in fan.walls:
        u = wall_normal(fan, curve)
        lines.add(max(u, neg(u)))
    return len(lines) == len(fan.walls)


@dataclass(frozen=True)
class _PicardFrame:
    """Pic(X) as Z^r: bundles normalized to vanish on a unimodular base cone."""

    fan: Fan
    base: tuple[int, ...]
    free: tuple[int, ...]
    degrees: tuple[tuple[Fraction, ...], ...]

    def degree(self, point: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(sum((f * x for f, x in zip(row, point)), Fraction(0)) for row in self.degrees)

    def bundle(self, point: Sequence[int]) -> ToricLineBundle:
        coeffs = [0] * len(self.fan.rays)
        for i, x in zip(self.free, point):
            coeffs[i] = int(x)
        return ToricLineBundle(self.fan, tuple(coeffs))


def _picard_frame(fan: Fan) -> _PicardFrame:
    if not fan.complete or not is_smooth(fan):
        raise UnsupportedError("Picard coordinates are computed for smooth complete fans.")
    base = fan.max_cones[0]
    free = tuple(i for i in range(len(fan.rays)) if i not in base)
    degrees = []
    for curve in fan.walls:
        row = []
        for i in free:
            unit = [0] * len(fan.rays)
            unit[i] = 1
            row.append(_wall_degree(fan, unit, curve))
        degrees.append(tuple(row))
    return _PicardFrame(fan, base, free, tuple(degrees))


def _nef_rays(frame: _PicardFrame) -> list[IntVector]:
    rank_ = len(frame.free)
    _, rays, lines = _generators([(row, 0) for row in frame.degrees], [], rank_)
    if lines:
        raise PreconditionError("Nef cone is not pointed; the fan is not projective.")
    return rays


def hilbert_basis(fan: Fan) -> list[ToricLineBundle]:
    """Minimal generators of the monoid of nef bundles (Picard rank at most three)."""
    frame = _picard_frame(fan)
    if len(frame.free) > MAX_PICARD_RANK:
        raise UnsupportedError(f"Picard rank {len(frame.free)} exceeds the desk-scale limit of {MAX_PICARD_RANK}.")
    return [frame.bundle(x) for x in _hilbert_points(frame)]


def _hilbert_points(frame: _PicardFrame) -> list[tuple[int, ...]]:
    rays = _nef_rays(frame)
    if not rays:
        raise PreconditionError("Fan carries no nontrivial nef bundle.")
    ranges = [
        range(sum(min(0, r[k]) for r in rays), sum(max(0, r[k]) for r in rays) + 1) for k in range(len(frame.free))
    ]
    candidates = []
    for point in itertools.product(*ranges):
        if is_zero(point):
            continue
        degrees = frame.degree(point)
        if all(d >= 0 for d in degrees):
            candidates.append((sum(degrees), point))
    candidates.sort()
    basis: list[tuple[int, ...]] = []
    for _, point in candidates:
        if not any(all(d >= 0 for d in frame.degree(sub(point, b))) for b in basis):
            basis.append(point)
    _check_hilbert_points(frame, basis)
    _LOGGER.debug("Hilbert basis of the nef monoid: %s", basis)
    return basis


def _check_hilbert_points(frame: _PicardFrame, basis: Sequence[tuple[int, ...]]) -> None:
    """Every nef class of curve degrees at most HILBERT_CHECK_DEGREE is a sum of basis points."""
    rank_ = len(frame.free)
    slab = [(row, 0) for row in frame.degrees]
    slab += [(tuple(-f for f in row), HILBERT_CHECK_DEGREE) for row in frame.degrees]
    corners, _, _ = _generators(slab, [], rank_)
    ranges = [
        range(math.floor(min(c[k] for c in corners)), math.ceil(max(c[k] for c in corners)) + 1) for k in range(rank_)
    ]

    def nef(point) -> bool:
        return all(d >= 0 for d in frame.degree(point))

    @functools.cache
    def decomposes(point: tuple[int, ...]) -> bool:
        if is_zero(point):
            return True
        return any(nef(rest) and decomposes(rest) for rest in (tuple(sub(point, b)) for b in basis))

    for point in itertools.product(*ranges):
        degrees = frame.degree(point)
        if all(0 <= d <= HILBERT_CHECK_DEGREE for d in degrees) and not decomposes(point):
            raise AssertionError(f"Nef class {point} is not a sum of the Hilbert basis {list(basis)}.")


def ample_generators(fan: Fan) -> list[ToricLineBundle]:
    """Minimal ample classes; every ample bundle is one of them plus a nef bundle."""
    frame = _picard_frame(fan)
    basis = _hilbert_points(frame)

    def ample(point) -> bool:
        return all(d >= 1 for d in frame.degree(point))

    sums = set()
    for size in range(1, len(basis) + 1):
        for subset in itertools.combinations(basis, size):
            point = tuple(sum(coords) for coords in zip(*subset))
            if ample(point):
                sums.add(point)
    minimal = sorted(p for p in sums if not any(ample(sub(p, b)) for b in basis))
    return [frame.bundle(p) for p in minimal]


def sufficiently_ample_threshold(fan: Fan, basis: Sequence[ToricLineBundle]) -> dict[int, int]:
    """n_tau = max_j B_j.C_tau for every wall."""
    if not basis:
        raise PreconditionError("Empty Hilbert basis.")
    return {curve.id: max(intersection_number(b, curve) for b in basis) for curve in fan.walls}


def in_D(bundle: ToricLineBundle, thresholds: Mapping[int, int]) -> bool:
    """L.C_tau > d * n_tau on every wall."""
    dim = bundle.fan.dim
    return all(intersection_number(bundle, curve) > dim * thresholds[curve.id] for curve in bundle.fan.walls)


def linear_subset_member(bundle: ToricLineBundle, subset: LinearSubsetIndex) -> bool:
    if len(subset.b) != len(bundle.fan.walls):
        raise PreconditionError("Linear subset bounds do not match the walls of the fan.")
    for curve in bundle.fan.walls:
        value = intersection_number(bundle, curve)
        bound = subset.b[curve.id]
        if curve.id in subset.J and value != bound:
            return False
        if value < bound:
            return False
    return True


def lowering_bound(
    b: Sequence[int], b_prime: Sequence[int], J: Iterable[int], J_next: Iterable[int], a: Sequence[int]
) -> tuple[int, ...]:
    """Bounds on a smaller linear subset after pushing J to J_next.

    Coordinates in J stay; the others grow by a_tau times the total gap b' - b over J_next minus J.
    """
    J, J_next = set(J), set(J_next)
    if not J <= J_next:
        raise PreconditionError("The new index set must contain the old one.")
    gap = sum(b_prime[t] - b[t] for t in J_next - J)
    return tuple(b[t] if t in J else b[t] + a[t] * gap for t in range(len(b)))


@dataclass(frozen=True)
class LoprBound:
    rho: IntVector
    coeffs: tuple[int, ...]
    r_rho: int
    w_rho: int
    thresholds: dict

    def as_dict(self) -> dict:
        return {
            "rho": list(self.rho),
            "coeffs": list(self.coeffs),
            "r_rho": self.r_rho,
            "w_rho": self.w_rho,
            "thresholds": {str(k): str(v) for k, v in sorted(self.thresholds.items())},
        }


@dataclass(frozen=True)
class BoundReport:
    c: int
    c_tau: dict
    loqr_bound: int
    walls: int
    dim: int
    subcones: tuple[tuple[int, ...], ...]
    lopr_bound: int | None = None
    lopr: LoprBound | None = None

    def as_dict(self) -> dict:
        return {
            "c": self.c,
            "c_tau": {str(k): v for k, v in sorted(self.c_tau.items())},
            "loqr_bound": self.loqr_bound,
            "walls": self.walls,
            "dim": self.dim,
            "subcones": [list(j) for j in self.subcones],
            "lopr_bound": self.lopr_bound,
            "lopr": None if self.lopr is None else self.lopr.as_dict(),
        }


def _nef_subcones(frame: _PicardFrame) -> list[tuple[int, ...]]:
    """Wall sets J cut out by the facets of the nef cone, the empty set included."""
    rays = _nef_rays(frame)
    subcones = {()}
    if len(frame.free) == 1:
        return sorted(subcones)
    cone = Cone.create(rays, len(frame.free))
    for normal in cone.halfspaces:
        on_facet = [r for r in rays if dot(r, normal) == 0]
        J = tuple(k for k, row in enumerate(frame.degrees) if all(frame.degree(r)[k] == 0 for r in on_facet))
        subcones.add(J)
    return sorted(subcones)


def section5_bounds(
    fan: Fan, bundle: ToricLineBundle | None = None, rho: Sequence[int] | None = None
) -> BoundReport:
    """Closed-form bounds on the intersection numbers that still need a direct check."""
    frame = _picard_frame(fan)
    basis = hilbert_basis(fan)
    c = max(intersection_number(b, curve) for b in basis for curve in fan.walls)
    generators = ample_generators(fan)
    c_tau = {curve.id: max(intersection_number(g, curve) for g in generators) for curve in fan.walls}
    walls = len(fan.walls)
    report = dict(
        c=c,
        c_tau=c_tau,
        loqr_bound=walls * fan.dim * c * c,
        walls=walls,
        dim=fan.dim,
        subcones=tuple(_nef_subcones(frame)),
    )
    if bundle is None or rho is None:
        return BoundReport(**report)
    rho = as_int_vector(rho)
    if rho not in fan.rays:
        raise PreconditionError(f"{rho} is not a ray of the fan.")
    if bundle.fan != fan or not is_nef(bundle):
        raise PreconditionError("The second bundle must be nef on the fan.")
    pairings = [abs(dot(wall_normal(fan, curve), rho)) for curve in fan.walls]
    nonzero = [p for p in pairings if p != 0]
    if not nonzero:
        raise PreconditionError(f"Every wall normal is orthogonal to {rho}.")
    r_rho = min(nonzero)
    values = [dot(x, rho) for x in lattice_points(polytope_of(bundle))]
    w_rho = max(values) - min(values)
    thresholds = {
        k: Fraction(v) + Fraction(4 * walls * c * c * w_rho, r_rho) for k, v in c_tau.items()
    }
    lopr = LoprBound(rho, bundle.coeffs, r_rho, w_rho, thresholds)
    top = max(thresholds.values())
    return BoundReport(**report, lopr_bound=top.numerator // top.denominator, lopr=lopr)


@dataclass(frozen=True)
class VertexPartition:
    """Fine maximal cones grouped by the coarse cone, i.e. the coarse vertex, they converge to."""

    coarse_fan: Fan
    assignment: dict

    def fibers(self) -> dict[int, list[int]]:
        result: dict[int, list[int]] = {}
        for fine, coarse in sorted(self.assignment.items()):
            result.setdefault(coarse, []).append(fine)
        return result


def vertex_partition(fine: ToricLineBundle, coarse: ToricLineBundle) -> VertexPartition:
    if fine.fan != coarse.fan:
        raise PreconditionError("Both bundles must be given on the fine fan.")
    if not (is_nef(fine) and is_nef(coarse)):
        raise PreconditionError("Vertex partition needs nef bundles.")
    polytope = polytope_of(coarse)
    coarse_fan = normal_fan(polytope)
    coarse_cones = [coarse_fan.cone(k) for k in range(len(coarse_fan.max_cones))]
    assignment = {}
    for index, cone in enumerate(fine.fan.max_cones):
        rays = [fine.fan.rays[i] for i in cone]
        owners = [k for k, body in enumerate(coarse_cones) if all(body.contains(r) for r in rays)]
        if len(owners) != 1:
            raise PreconditionError(f"Fine cone {cone} is not inside exactly one coarse cone.")
        vertex = cartier_data(fine.fan, coarse.coeffs, index)
        owner_rays = [coarse_fan.rays[i] for i in coarse_fan.max_cones[owners[0]]]
        if any(dot(vertex, r) != polytope.support(r) for r in owner_rays):
            raise PreconditionError(f"Fine cone {cone} does not converge to the vertex of its coarse cone.")
        assignment[index] = owners[0]
    return VertexPartition(coarse_fan, assignment)

