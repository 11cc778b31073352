"""Multiplication maps on lattice points and their real-coverage strengthening."""

import logging

from dataclasses import dataclass, field
from typing import Sequence

from pytoricoda.coverage import CoverReport, covers
from pytoricoda.lattice import DimensionError, IntVector, add, dot, format_rational
from pytoricoda.polytope import (
    Cone,
    RationalPolytope,
    lattice_points,
    minkowski_difference,
    minkowski_sum,
    polyhedron_lattice_points_truncated,
    polyhedron_sum,
)
from pytoricoda.toric import (
    PreconditionError,
    ToricLineBundle,
    difference,
    is_ample,
    is_nef,
    multiple,
    polytope_of,
    tensor,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class CokernelReport:
    """Lattice points of P1 + P2 that are not a sum p1 + p2 of lattice points.

    When truncated is set the verdict only speaks about the slab <x, covector> <= level.
    """

    missed: frozenset[IntVector]
    dim_coker: int
    decompositions: dict = field(default_factory=dict, repr=False, compare=False)
    truncated: bool = False
    slab: tuple | None = None

    def as_dict(self) -> dict:
        result = {"missed": [list(p) for p in sorted(self.missed)], "dim_coker": self.dim_coker}
        if self.truncated:
            covector, level = self.slab
            result["truncated"] = True
            result["slab"] = {"covector": list(covector), "level": format_rational(level)}
        return result


@dataclass(frozen=True)
class PsiReport:
    inner: CoverReport
    translates: tuple[IntVector, ...]
    note: str | None = None

    @property
    def covered(self) -> bool:
        return self.inner.covered

    def as_dict(self) -> dict:
        result = {**self.inner.as_dict(), "translates": [list(m) for m in self.translates]}
        if self.note:
            result["note"] = self.note
        return result


def _sumset(first: Sequence[IntVector], second: Sequence[IntVector]) -> dict:
    decompositions = {}
    for p in sorted(first):
        for q in sorted(second):
            decompositions.setdefault(add(p, q), (p, q))
    return decompositions


def phi_cokernel(first: RationalPolytope, second: RationalPolytope) -> CokernelReport:
    """Cokernel of the lattice-point sum map (P1 cap M) x (P2 cap M) -> (P1 + P2) cap M."""
    if first.ambient != second.ambient:
        raise DimensionError("Polytopes live in different dimensions.", first.ambient, second.ambient)
    decompositions = _sumset(lattice_points(first), lattice_points(second))
    target = lattice_points(minkowski_sum(first, second))
    missed = frozenset(target - decompositions.keys())
    _LOGGER.debug("Sum map hits %d of %d lattice points", len(target) - len(missed), len(target))
    return CokernelReport(missed, len(missed), decompositions)


def psi_check(first: RationalPolytope, second: RationalPolytope) -> PsiReport:
    """Is P2 covered by the lattice translates of P1 that it contains?"""
    if first.ambient != second.ambient:
        raise DimensionError("Polytopes live in different dimensions.", first.ambient, second.ambient)
    index = minkowski_difference(second, first)
    translates = () if index is None else tuple(sorted(lattice_points(index)))
    if not translates:
        note = "no lattice translate of P1 fits inside P2"
        return PsiReport(CoverReport(False, second.vertices[0], 0), (), note)
    pieces = [first.translate(m) for m in translates]
    return PsiReport(covers(second, pieces), translates)


def _same_fan(first: ToricLineBundle, second: ToricLineBundle) -> None:
    if first.fan != second.fan:
        raise PreconditionError("Bundles live on different fans.")


def prec(first: ToricLineBundle, second: ToricLineBundle) -> bool:
    """second lies in first + Nef(X)."""
    _same_fan(first, second)
    return is_nef(difference(second, first))


def prec_c(first: ToricLineBundle, second: ToricLineBundle) -> bool:
    """Each point of P_second lies in a lattice translate of P_first inside it."""
    _same_fan(first, second)
    small, large = polytope_of(first), polytope_of(second)
    if small is None or large is None:
        return False
    return psi_check(small, large).covered


def prec_o(first: ToricLineBundle, second: ToricLineBundle) -> bool:
    if not prec(first, second):
        return False
    small = polytope_of(first)
    rest = polytope_of(difference(second, first))
    if small is None or rest is None:
        return False
    return phi_cokernel(small, rest).dim_coker == 0


@dataclass(frozen=True)
class OrderRelations:
    prec: bool
    prec_o: bool
    prec_c: bool

    def as_dict(self) -> dict:
        return {"prec": self.prec, "prec_o": self.prec_o, "prec_c": self.prec_c}


def order_relations(first: ToricLineBundle, second: ToricLineBundle) -> OrderRelations:
    """All three orders at once; the chain prec_c => prec_o => prec must hold."""
    result = OrderRelations(prec(first, second), prec_o(first, second), prec_c(first, second))
    if (result.prec_c and not result.prec_o) or (result.prec_o and not result.prec):
        raise AssertionError(f"Order chain broken for {first.coeffs} and {second.coeffs}: {result}")
    return result


@dataclass(frozen=True)
class TensorStability:
    before: bool
    after: bool

    @property
    def stable(self) -> bool:
        return not self.before or self.after

    def as_dict(self) -> dict:
        return {"before": self.before, "after": self.after, "stable": self.stable}


def tensor_stability(first: ToricLineBundle, second: ToricLineBundle, twist: ToricLineBundle) -> TensorStability:
    """Does first <_c second survive tensoring both sides with twist? Recorded, never raised."""
    before = prec_c(first, second)
    after = prec_c(tensor(first, twist), tensor(second, twist))
    if before and not after:
        _LOGGER.info("Covering order lost after twisting by %s", twist.coeffs)
    return TensorStability(before, after)


def local_oda_check(
    first: RationalPolytope, second: RationalPolytope, sigma_dual: Cone, depth: int
) -> CokernelReport:
    """Sum map (P1 cap M) x ((P2 + C) cap M) -> (P1 + P2 + C) cap M inside a slab.

    The slab is <x, rho> <= base + depth for the interior covector rho of C, where base is the
    smallest value of rho on P1 + P2. The report is evidence about the slab only.
    """
    if depth <= 0:
        raise PreconditionError(f"Depth {depth} does not bound the unbounded region.")
    if not (sigma_dual.is_pointed and sigma_dual.is_full_dimensional):
        raise PreconditionError("The cone must be strongly convex and full-dimensional.")
    total = minkowski_sum(first, second)
    rho = sigma_dual.interior_covector()
    level = min(dot(v, rho) for v in total.vertices) + depth
    points1 = lattice_points(first)
    reach = level - min(dot(p, rho) for p in points1)
    points2 = polyhedron_lattice_points_truncated(polyhedron_sum(second, sigma_dual), rho, reach)
    target = polyhedron_lattice_points_truncated(polyhedron_sum(total, sigma_dual), rho, level)
    decompositions = {s: pair for s, pair in _sumset(points1, points2).items() if s in target}
    missed = frozenset(target - decompositions.keys())
    _LOGGER.debug("Local check at level %s: %d targets, %d missed", level, len(target), len(missed))
    return CokernelReport(missed, len(missed), decompositions, truncated=True, slab=(rho, level))


def projective_normality_probe(bundle: ToricLineBundle, k_max: int) -> list[CokernelReport]:
    """Cokernels of the maps for (L, L^j), j = 1..k_max."""
    if k_max < 1:
        raise PreconditionError(f"k_max {k_max} must be positive.")
    if not is_ample(bundle):
        raise PreconditionError("Projective normality is probed for ample bundles.")
    polytope = polytope_of(bundle)
    return [phi_cokernel(polytope, polytope_of(multiple(bundle, j))) for j in range(1, k_max + 1)]
