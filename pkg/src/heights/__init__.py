"""Weil heights over Q and the height bounds used for distortion."""

from src.heights.height import (
    active_places,
    gelfond_check,
    map_height,
    poly_height,
    verify_word_height,
    word_height_bound,
    word_height_fixtures,
)
from src.heights.linear import distortion_class_of_linear, linear_height_growth
from src.heights.places import place_values, product_formula_holds

__all__ = [
    "active_places",
    "gelfond_check",
    "map_height",
    "poly_height",
    "verify_word_height",
    "word_height_bound",
    "word_height_fixtures",
    "distortion_class_of_linear",
    "linear_height_growth",
    "place_values",
    "product_formula_holds",
]
