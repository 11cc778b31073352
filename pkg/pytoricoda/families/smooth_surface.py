"""Smooth complete toric surfaces by iterated blow-ups."""

import logging

from pytoricoda.families import Family, FamilyError
from pytoricoda.toric import Fan, blowup, hirzebruch, projective_space

_LOGGER = logging.getLogger(__name__)


def blowup_closure(seeds: list[Fan], max_picard: int) -> list[Fan]:
    """All fans reachable from the seeds by blow-ups with Picard number at most max_picard.

    Duplicates are removed by literal ray set only, not up to lattice automorphisms.
    """
    seen = {frozenset(f.rays): f for f in seeds if f.picard_number <= max_picard}
    frontier = list(seen.values())
    while frontier:
        fresh = []
        for fan in frontier:
            if fan.picard_number >= max_picard:
                continue
            for index in range(len(fan.max_cones)):
                child = blowup(fan, index)
                key = frozenset(child.rays)
                if key not in seen:
                    seen[key] = child
                    fresh.append(child)
        frontier = fresh
    _LOGGER.debug("Blow-up closure holds %d fans up to Picard number %d", len(seen), max_picard)
    return sorted(seen.values(), key=lambda f: (f.picard_number, sorted(f.rays)))


class SmoothSurfaceFamily(Family):
    """Blow-ups of P^2 and of F_0, F_1, F_2 with Picard number at most max_picard."""

    family_id = "smooth-surface"
    parameters = {"max_picard": 3}

    def fans(self) -> list[Fan]:
        if self.params["max_picard"] < 1:
            raise FamilyError("max_picard must be positive.", self.family_id)
        seeds = [projective_space(2)] + [hirzebruch(a) for a in range(3)]
        return blowup_closure(seeds, self.params["max_picard"])


FAMILY_MAP = {SmoothSurfaceFamily.family_id: SmoothSurfaceFamily}
