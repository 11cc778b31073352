"""Hirzebruch surfaces."""

from pytoricoda.families import Family, FamilyError
from pytoricoda.toric import Fan, hirzebruch


class HirzebruchFamily(Family):
    family_id = "hirzebruch"
    parameters = {"max_a": 3}

    def fans(self) -> list[Fan]:
        if self.params["max_a"] < 0:
            raise FamilyError("max_a must be nonnegative.", self.family_id)
        return [hirzebruch(a) for a in range(self.params["max_a"] + 1)]


FAMILY_MAP = {HirzebruchFamily.family_id: HirzebruchFamily}
