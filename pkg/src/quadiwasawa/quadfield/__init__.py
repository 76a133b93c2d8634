"""Quadratic fields: elements, forms, ideals, class groups and ray class groups."""

from .field import FieldDesc, QuadElem, fundamental_discriminants, fundamental_unit, is_fundamental, is_totally_ell_adic, kronecker
from .forms import class_group, count_reduced_forms, narrow_group
from .ideals import QuadIdeal, class_group_data, prime_ideal, wide_class_group
from .ray import EllPlaces, NotSplit, primes_above_ell, ray_class_group_ellpart, residue_units

__all__ = [
    "EllPlaces", "FieldDesc", "NotSplit", "QuadElem", "QuadIdeal", "class_group", "class_group_data",
    "count_reduced_forms", "fundamental_discriminants", "fundamental_unit", "is_fundamental",
    "is_totally_ell_adic", "kronecker", "narrow_group", "prime_ideal", "primes_above_ell",
    "ray_class_group_ellpart", "residue_units", "wide_class_group",
]
