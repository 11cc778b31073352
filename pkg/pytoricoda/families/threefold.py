"""Desk-scale smooth threefolds."""

from pytoricoda.families import Family
from pytoricoda.toric import Fan, blowup, product, projective_space


class ThreefoldFamily(Family):
    """P^1 x P^2 and the blow-up of P^3 at a torus-fixed point."""

    family_id = "threefold"

    def fans(self) -> list[Fan]:
        return [product(projective_space(1), projective_space(2)), blowup(projective_space(3), 0)]


FAMILY_MAP = {ThreefoldFamily.family_id: ThreefoldFamily}
