"""Projective spaces."""

from pytoricoda.families import Family, FamilyError
from pytoricoda.toric import Fan, projective_space


class ProjectiveFamily(Family):
    """P^dim with all nef pairs O(a), O(b)."""

    family_id = "projective"
    parameters = {"dim": 2}

    def fans(self) -> list[Fan]:
        dim = self.params["dim"]
        if dim not in (1, 2, 3):
            raise FamilyError(f"Dimension {dim} is outside 1..3.", self.family_id)
        return [projective_space(dim)]


FAMILY_MAP = {ProjectiveFamily.family_id: ProjectiveFamily}
