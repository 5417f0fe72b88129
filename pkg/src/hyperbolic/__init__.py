"""Picard-Manin classes, hyperbolic geometry, horoballs and lattice isometries."""

from src.hyperbolic.geometry import (
    alpha_estimate,
    bp_from_class,
    halfplane_distance,
    horosphere_distance,
    hyperbolic_distance,
    ruled_canonical_check,
    thb_length_lower_bound,
)
from src.hyperbolic.horoballs import (
    HoroballSpec,
    disjointness_certificate,
    epsilon_constants,
    horoball_member,
    horoball_witness_search,
)
from src.hyperbolic.lattice import (
    classify_lattice_isometry,
    halphen_class_degrees,
    halphen_parabolic_fixture,
    orbit_growth,
    reflection,
)
from src.hyperbolic.picard_manin import (
    PMClass,
    e0,
    halphen_class,
    intersection,
    is_isotropic,
    jonquieres_pushforward,
    on_hyperboloid,
    random_isotropic_vector,
    w_H,
    w_J,
)

__all__ = [
    "alpha_estimate",
    "bp_from_class",
    "halfplane_distance",
    "horosphere_distance",
    "hyperbolic_distance",
    "ruled_canonical_check",
    "thb_length_lower_bound",
    "HoroballSpec",
    "disjointness_certificate",
    "epsilon_constants",
    "horoball_member",
    "horoball_witness_search",
    "classify_lattice_isometry",
    "halphen_class_degrees",
    "halphen_parabolic_fixture",
    "orbit_growth",
    "reflection",
    "PMClass",
    "e0",
    "halphen_class",
    "intersection",
    "is_isotropic",
    "jonquieres_pushforward",
    "on_hyperboloid",
    "random_isotropic_vector",
    "w_H",
    "w_J",
]
