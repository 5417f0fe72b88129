"""Integer isometries of the lattices Z^{1,k} with form diag(1, -1, ..., -1)."""

import logging
import math
from functools import reduce
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from src.exceptions import FormViolationError, InsufficientDataError, InvalidParameterError
from src.heights.linear import charpoly_factors, cyclotomic_order
from src.hyperbolic.picard_manin import MARKED_LABELS, PMClass
from src.reports.schemas import IsometryReport
from src.utils.matrices import (
    Matrix,
    identity,
    is_identity,
    mat_mul,
    mat_pow,
    mat_vec,
    to_int_matrix,
    transpose,
)

logger = logging.getLogger(__name__)


def form_matrix(size: int) -> Matrix:
    """Gram matrix diag(1, -1, ..., -1)."""
    return tuple(
        tuple((1 if i == 0 else -1) if i == j else 0 for j in range(size)) for i in range(size)
    )


def minkowski(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[0] - sum(a * b for a, b in zip(u[1:], v[1:]))


def validate_isometry(matrix: Sequence[Sequence[object]]) -> Matrix:
    """Integer matrix with M^T J M = J preserving the positive sheet.

    Raises:
        FormViolationError: If the form or the sheet is not preserved
    """
    m = to_int_matrix(matrix)
    form = form_matrix(len(m))
    if mat_mul(mat_mul(transpose(m), form), m) != form:
        raise FormViolationError("matrix does not preserve the form diag(1, -1, ..., -1)")
    if m[0][0] <= 0:
        raise FormViolationError("matrix swaps the two sheets of the hyperboloid")
    return m


def reflection(v: Sequence[int]) -> Matrix:
    """s_v(x) = x + 2 (x.v) / (-v.v) v for an integral (-1)- or (-2)-class v."""
    norm = minkowski(v, v)
    if norm not in (-1, -2):
        raise InvalidParameterError(f"reflection needs v.v in (-1, -2), got {norm}")
    factor = 2 // -norm
    size = len(v)
    form = form_matrix(size)
    jv = mat_vec(form, v)
    return tuple(
        tuple((1 if i == j else 0) + factor * v[i] * jv[j] for j in range(size))
        for i in range(size)
    )


def _primitive_ray(vector: Sequence[int]) -> List[int]:
    divisor = reduce(gcd, (abs(int(x)) for x in vector))
    ray = [int(x) // divisor for x in vector]
    if ray[0] < 0 or (ray[0] == 0 and next(x for x in ray if x) < 0):
        ray = [-x for x in ray]
    return ray


def fixed_isotropic_ray(unipotent: Matrix) -> Optional[List[int]]:
    """Primitive generator of the fixed isotropic ray of a unipotent isometry."""
    size = len(unipotent)
    nilpotent = tuple(
        tuple(unipotent[i][j] - (1 if i == j else 0) for j in range(size)) for i in range(size)
    )
    for candidate in (mat_mul(nilpotent, nilpotent), nilpotent):
        for column in transpose(candidate):
            if any(column):
                return _primitive_ray(column)
    return None


def spectral_radius(matrix: Matrix) -> float:
    charpoly, _ = charpoly_factors(matrix)
    coefficients = [int(c) for c in charpoly.all_coeffs()]
    with mpmath.workdps(30):
        roots = mpmath.polyroots(coefficients, maxsteps=200, extraprec=60)
        return float(max(abs(r) for r in roots))


def classify_lattice_isometry(matrix: Sequence[Sequence[object]]) -> IsometryReport:
    """Elliptic, Parabolic or Loxodromic, with translation length log(lambda).

    Raises:
        FormViolationError: If the matrix is not an isometry of the positive sheet
    """
    m = validate_isometry(matrix)
    charpoly, factors = charpoly_factors(m)
    orders = [cyclotomic_order(f) for f in factors]
    printed = str(charpoly.as_expr())

    if any(k is None for k in orders):
        radius = spectral_radius(m)
        return IsometryReport(
            isometry_type="Loxodromic",
            translation_length=math.log(radius),
            charpoly=printed,
            spectral_radius=radius,
        )

    known = sorted({k for k in orders if k is not None})
    period = lcm(*known)
    power = mat_pow(m, period)
    if is_identity(power):
        return IsometryReport(
            isometry_type="Elliptic",
            translation_length=0.0,
            charpoly=printed,
            spectral_radius=1.0,
            cyclotomic_orders=known,
        )

    ray = fixed_isotropic_ray(power)
    return IsometryReport(
        isometry_type="Parabolic",
        translation_length=0.0,
        charpoly=printed,
        spectral_radius=1.0,
        cyclotomic_orders=known,
        fixed_ray=[str(x) for x in ray] if ray else None,
    )


def orbit_growth(matrix: Sequence[Sequence[object]], ns: Sequence[int]) -> List[int]:
    """cosh dist(M^n e0, e0) = (M^n e0)_0 for each n, exactly."""
    m = validate_isometry(matrix)
    values = []
    for n in ns:
        image = mat_vec(mat_pow(m, n), [1] + [0] * (len(m) - 1))
        values.append(int(image[0]))
    return values


def fit_orbit_exponent(ns: Sequence[int], values: Sequence[int]) -> float:
    """Slope of log(value) against log(n): the polynomial growth exponent."""
    if len(ns) < 2:
        raise InsufficientDataError("need at least 2 orbit points")
    log_ns = np.log(np.asarray(ns, dtype=float))
    slope, _ = np.polyfit(log_ns, np.log(np.asarray(values, dtype=float)), 1)
    return float(slope)


def vector_to_class(vector: Sequence[int], labels: Sequence[str] = MARKED_LABELS) -> PMClass:
    return PMClass.from_dict(vector[0], dict(zip(labels, vector[1:])))


def class_to_vector(u: PMClass, labels: Sequence[str] = MARKED_LABELS) -> List[int]:
    if set(u.labels) - set(labels):
        raise InvalidParameterError(f"{u} has labels outside {list(labels)}")
    return [int(u.e0)] + [int(u.coefficient(label)) for label in labels]


def halphen_parabolic_fixture() -> Matrix:
    """Product of two (-2)-reflections of Z^{1,9} fixing w_H: a parabolic of infinite order.

    v = e0 - e1 - e2 - e3 and u = 2e0 - e4 - ... - e9 are orthogonal to w_H, and
    (T^n e0)_0 = 1 + 9n^2.
    """
    v = [1, -1, -1, -1, 0, 0, 0, 0, 0, 0]
    u = [2, 0, 0, 0, -1, -1, -1, -1, -1, -1]
    return mat_mul(reflection(u), reflection(v))


def halphen_class_degrees(N: int) -> List[int]:
    """Degrees (T^n e0).e0 of the parabolic fixture, n = 1..N."""
    if N < 1:
        raise InvalidParameterError(f"N must be at least 1, got {N}")
    return orbit_growth(halphen_parabolic_fixture(), range(1, N + 1))


def loxodromic_fixture() -> Matrix:
    """Isometry of Z^{1,2} with characteristic polynomial (x + 1)(x^2 - 4x + 1)."""
    return ((3, -2, 2), (2, -2, 1), (2, -1, 2))


def parabolic_fixture() -> Matrix:
    """Unipotent isometry of Z^{1,2} fixing the isotropic ray (1, 1, 0)."""
    return ((3, -2, 2), (2, -1, 2), (2, -2, 1))


def elliptic_fixture() -> Matrix:
    """Swap of the two exceptional coordinates of Z^{1,2}."""
    return ((1, 0, 0), (0, 0, 1), (0, 1, 0))


def identity_fixture(size: int = 3) -> Matrix:
    return identity(size)


def fixtures() -> List[Tuple[str, Matrix]]:
    return [
        ("loxodromic", loxodromic_fixture()),
        ("parabolic", parabolic_fixture()),
        ("elliptic", elliptic_fixture()),
        ("halphen", halphen_parabolic_fixture()),
        ("identity", identity_fixture()),
    ]
