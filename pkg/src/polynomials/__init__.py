"""Exact homogeneous polynomial arithmetic over Q."""

from src.polynomials.homopoly import (
    HomoPoly,
    delta_degree_sum,
    gcd_homogeneous,
    normalize_primitive,
    poly_arith,
    poly_content,
    substitute,
    variable_names,
)
from src.polynomials.parser import format_poly, parse_poly, parse_univariate

__all__ = [
    "HomoPoly",
    "delta_degree_sum",
    "gcd_homogeneous",
    "normalize_primitive",
    "poly_arith",
    "poly_content",
    "substitute",
    "variable_names",
    "format_poly",
    "parse_poly",
    "parse_univariate",
]
