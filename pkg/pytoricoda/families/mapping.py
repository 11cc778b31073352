"""Families mapping file."""

from .hirzebruch import FAMILY_MAP as HIRZEBRUCH_FAMILY_MAP
from .product import FAMILY_MAP as PRODUCT_FAMILY_MAP
from .projective import FAMILY_MAP as PROJECTIVE_FAMILY_MAP
from .smooth_surface import FAMILY_MAP as SMOOTH_SURFACE_FAMILY_MAP
from .threefold import FAMILY_MAP as THREEFOLD_FAMILY_MAP

FAMILY_MAP = {
    **PROJECTIVE_FAMILY_MAP,
    **PRODUCT_FAMILY_MAP,
    **HIRZEBRUCH_FAMILY_MAP,
    **SMOOTH_SURFACE_FAMILY_MAP,
    **THREEFOLD_FAMILY_MAP,
}
