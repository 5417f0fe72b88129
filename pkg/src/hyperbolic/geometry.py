"""Distances in the hyperboloid and half-plane models, and base-point counts."""

import math
from typing import Sequence

import numpy as np

from src.exceptions import InsufficientDataError, InvalidParameterError
from src.hyperbolic.picard_manin import PMClass, intersection, require_hyperboloid


def hyperbolic_distance(u: PMClass, v: PMClass) -> float:
    """arccosh(u.v) for classes on the positive sheet.

    Raises:
        FormViolationError: If u or v is not on the hyperboloid
    """
    require_hyperboloid(u)
    require_hyperboloid(v)
    if u == v:
        return 0.0
    return math.acosh(max(1.0, float(intersection(u, v))))


def horosphere_distance(d: float) -> float:
    """Distance along a horosphere between two of its points at distance d."""
    if d < 0:
        raise InvalidParameterError(f"distance must be non-negative, got {d}")
    return 2 * math.sinh(d / 2)


def halfplane_distance(z1: complex, z2: complex) -> float:
    """Hyperbolic distance in the upper half-plane."""
    if z1.imag <= 0 or z2.imag <= 0:
        raise InvalidParameterError("points must lie in the upper half-plane")
    return 2 * math.asinh(abs(z1 - z2) / (2 * math.sqrt(z1.imag * z2.imag)))


def thb_length_lower_bound(C: float, D: float, D_S: float, n: int) -> int:
    """Least word length of f^n allowed by (D^-1 n^(C/2) - D n^(-C/2)) <= D_S * length.

    With C = 2 the bound is linear in n (f undistorted); with C < 2 it caps the
    distortion at n^(2/C).

    Raises:
        InvalidParameterError: Unless 0 < C <= 2, D > 1, D_S > 0 and n >= 1
    """
    if not 0 < C <= 2:
        raise InvalidParameterError(f"C must lie in (0, 2], got {C}")
    if D <= 1 or D_S <= 0:
        raise InvalidParameterError(f"need D > 1 and D_S > 0, got D={D}, D_S={D_S}")
    if n < 1:
        raise InvalidParameterError(f"n must be positive, got {n}")
    growth = n ** (C / 2)
    value = (growth / D - D / growth) / D_S
    return max(0, math.floor(value))


def bp_from_class(img_e0: PMClass) -> int:
    """Number of base points: labels with positive multiplicity.

    Raises:
        InvalidParameterError: If a multiplicity is negative
    """
    count = 0
    for label in img_e0.labels:
        multiplicity = img_e0.multiplicity(label)
        if multiplicity < 0:
            raise InvalidParameterError(f"negative multiplicity at {label} in {img_e0}")
        count += 1
    return count


def alpha_estimate(bps: Sequence[int]) -> float:
    """Slope of bp(f^n) against n, n = 1..len(bps)."""
    if len(bps) < 2:
        raise InsufficientDataError("need at least 2 base-point counts")
    ns = np.arange(1, len(bps) + 1, dtype=float)
    slope, _ = np.polyfit(ns, np.asarray(bps, dtype=float), 1)
    return float(slope)


def ruled_canonical_check(d: int, multiplicities: Sequence[int]) -> bool:
    """Both canonical-class constraints 2(d-1) = sum a_i = sum a_i^2."""
    if d < 1 or any(a < 0 for a in multiplicities):
        return False
    target = 2 * (d - 1)
    return sum(multiplicities) == target and sum(a * a for a in multiplicities) == target
