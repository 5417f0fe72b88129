"""Birational maps of P^m, named families and degree growth."""

from src.maps.birmap import (
    BirMap,
    compose,
    format_map,
    identity_map,
    is_identity,
    iterate,
    normalize_components,
    parse_map,
    power_by_squaring,
)
from src.maps.families import (
    builtin_family,
    henon_map,
    jonquieres_map,
    linear_map,
    monomial_map,
    sigma_map,
)
from src.maps.growth import (
    check_sqrt_subadditivity,
    classify_growth,
    dynamical_degree_estimate,
    iterate_degrees,
    sqrt_slope_estimate,
)

__all__ = [
    "BirMap",
    "compose",
    "format_map",
    "identity_map",
    "is_identity",
    "iterate",
    "normalize_components",
    "parse_map",
    "power_by_squaring",
    "builtin_family",
    "henon_map",
    "jonquieres_map",
    "linear_map",
    "monomial_map",
    "sigma_map",
    "check_sqrt_subadditivity",
    "classify_growth",
    "dynamical_degree_estimate",
    "iterate_degrees",
    "sqrt_slope_estimate",
]
