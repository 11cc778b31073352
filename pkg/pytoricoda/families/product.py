"""Products of projective spaces."""

from pytoricoda.families import Family, FamilyError
from pytoricoda.toric import Fan, product, projective_space


class ProductFamily(Family):
    """P^first x P^second, at most three dimensional."""

    family_id = "product"
    parameters = {"first": 1, "second": 1}

    def fans(self) -> list[Fan]:
        first, second = self.params["first"], self.params["second"]
        if first < 1 or second < 1 or first + second > 3:
            raise FamilyError(f"P^{first} x P^{second} is not a product of dimension at most 3.", self.family_id)
        return [product(projective_space(first), projective_space(second))]


FAMILY_MAP = {ProductFamily.family_id: ProductFamily}
