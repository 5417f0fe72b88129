"""Distortion class of linear maps from the eigenvalues of their matrices."""

import logging
from math import lcm
from typing import List, Optional, Sequence, Tuple

import sympy as sp

from src.exceptions import InvalidParameterError
from src.heights.height import map_height
from src.maps.families import linear_map
from src.reports.schemas import LinearClassReport
from src.utils.matrices import (
    Matrix,
    determinant,
    is_identity,
    mat_mul,
    mat_pow,
    to_matrix,
    to_sympy,
)

logger = logging.getLogger(__name__)

X = sp.Symbol("x")


def normalized_matrix(matrix: Sequence[Sequence[object]]) -> Matrix:
    """A^n / det A for an n x n matrix A: same projective class, determinant 1."""
    a = to_matrix(matrix)
    det = determinant(a)
    if det == 0:
        raise InvalidParameterError("linear map needs an invertible matrix")
    size = len(a)
    return tuple(tuple(v / det for v in row) for row in mat_pow(a, size))


def cyclotomic_order(factor: sp.Poly) -> Optional[int]:
    """Smallest k with factor | x^k - 1, or None if factor is not cyclotomic.

    An irreducible cyclotomic factor of degree d has order k with phi(k) = d,
    and phi(k) >= sqrt(k / 2), so k <= 2 d^2 suffices.
    """
    degree = factor.degree()
    for k in range(1, 2 * degree * degree + 3):
        if sp.Poly(X**k - 1, X, domain=sp.QQ).rem(factor).is_zero:
            return k
    return None


def charpoly_factors(matrix: Matrix) -> Tuple[sp.Poly, List[sp.Poly]]:
    charpoly = to_sympy(matrix).charpoly(X)
    poly = sp.Poly(charpoly.as_expr(), X, domain=sp.QQ)
    _, factors = poly.factor_list()
    return poly, [f for f, _ in factors]


def distortion_class_of_linear(matrix: Sequence[Sequence[object]]) -> LinearClassReport:
    """FiniteOrder, DoublyExpDistorted (virtually unipotent) or ExpDistorted.

    Raises:
        InvalidParameterError: If the matrix is singular
    """
    b = normalized_matrix(matrix)
    charpoly, factors = charpoly_factors(b)
    orders = [cyclotomic_order(f) for f in factors]
    printed = str(charpoly.as_expr())

    if any(k is None for k in orders):
        return LinearClassReport(classification="ExpDistorted", charpoly=printed)

    known = sorted({k for k in orders if k is not None})
    period = lcm(*known)
    if not is_identity(mat_pow(b, period)):
        return LinearClassReport(
            classification="DoublyExpDistorted", charpoly=printed, cyclotomic_orders=known
        )

    divisors = [k for k in range(1, period + 1) if period % k == 0]
    order = next(k for k in divisors if is_identity(mat_pow(b, k)))
    return LinearClassReport(
        classification="FiniteOrder", charpoly=printed, cyclotomic_orders=known, order=order
    )


def linear_height_growth(matrix: Sequence[Sequence[object]], N: int) -> List[float]:
    """h(A^n) for n = 1..N, as heights of the induced linear maps."""
    if N < 1:
        raise InvalidParameterError(f"N must be at least 1, got {N}")
    a = to_matrix(matrix)
    heights = []
    current = a
    for n in range(1, N + 1):
        if n > 1:
            current = mat_mul(current, a)
        heights.append(map_height(linear_map(current)).h)
    logger.debug(f"Height growth of {len(a)}x{len(a)} matrix: {heights}")
    return heights

