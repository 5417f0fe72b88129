"""Named families of birational maps of P^m."""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence

from src.exceptions import InvalidParameterError, PolynomialError
from src.maps.birmap import BirMap, identity_map
from src.polynomials.homopoly import Exponent, HomoPoly
from src.polynomials.parser import parse_univariate
from src.utils.matrices import Matrix, determinant, diagonal, parse_matrix, to_matrix

logger = logging.getLogger(__name__)


def _read_matrix(value: Any) -> Matrix:
    if isinstance(value, str):
        return parse_matrix(value)
    return to_matrix(value)


def _read_affine_poly(value: Any, variable: str) -> List[Fraction]:
    """Coefficients c_0..c_q of a univariate polynomial given as text or a list."""
    if isinstance(value, (list, tuple)):
        coeffs = [Fraction(str(c)) for c in value]
    else:
        try:
            coeffs = parse_univariate(str(value), variable)
        except PolynomialError as e:
            message = f"cannot read '{value}' as a polynomial in {variable}"
            raise InvalidParameterError(message) from e
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise InvalidParameterError(f"polynomial in {variable} must be nonzero")
    return coeffs


def _homogenize(coeffs: Sequence[Fraction], var_index: int, num_vars: int) -> HomoPoly:
    """sum c_i v^i z^(q-i) on P^2, with v the variable at var_index and z the last one."""
    q = len(coeffs) - 1
    terms: Dict[Exponent, Fraction] = {}
    for power, coeff in enumerate(coeffs):
        if coeff:
            exponent = [0] * num_vars
            exponent[var_index] += power
            exponent[-1] += q - power
            terms[tuple(exponent)] = coeff
    return HomoPoly.from_terms(num_vars, terms, degree=q)


def _monomial(num_vars: int, **powers: int) -> HomoPoly:
    names = {"x": 0, "y": 1, "z": 2}
    exponent = [0] * num_vars
    for name, power in powers.items():
        exponent[names[name]] += power
    return HomoPoly.monomial(exponent)


def linear_map(matrix: Matrix) -> BirMap:
    """[sum_j a_0j x_j : ... : sum_j a_mj x_j] for an invertible rational matrix."""
    if determinant(matrix) == 0:
        raise InvalidParameterError("linear map needs an invertible matrix")
    size = len(matrix)
    components = []
    for row in matrix:
        terms = {tuple(1 if k == j else 0 for k in range(size)): row[j] for j in range(size)}
        components.append(HomoPoly.from_terms(size, terms, degree=1))
    return BirMap.from_components(components)


def monomial_map(matrix: Sequence[Sequence[Any]]) -> BirMap:
    """Birational map induced by a unimodular integer matrix on the torus.

    Row i lists the exponents of affine coordinate i, so [[1,0],[1,1]] gives
    (x, y) -> (x, xy). Negative exponents are cleared with a common monomial.

    Raises:
        InvalidParameterError: If the matrix is not integral with det +-1
    """
    rows = to_matrix(matrix)
    if any(v.denominator != 1 for row in rows for v in row):
        raise InvalidParameterError("monomial map needs an integer matrix")
    if abs(determinant(rows)) != 1:
        raise InvalidParameterError("monomial map needs a unimodular matrix (det = +-1)")

    m = len(rows)
    exponents = [[int(v) for v in row] for row in rows]
    row_sums = [sum(row) for row in exponents]
    shift = [max(0, -min(row[j] for row in exponents)) for j in range(m)]
    shift_z = max(0, max(row_sums))

    components = []
    for row, total in zip(exponents, row_sums):
        exponent = [row[j] + shift[j] for j in range(m)] + [shift_z - total]
        components.append(HomoPoly.monomial(exponent))
    components.append(HomoPoly.monomial(shift + [shift_z]))
    return BirMap.from_components(components)


def sigma_map() -> BirMap:
    """Standard quadratic involution [yz : xz : xy]."""
    return BirMap.from_components(
        [_monomial(3, y=1, z=1), _monomial(3, x=1, z=1), _monomial(3, x=1, y=1)]
    )


def jonquieres_map(q_coeffs: Sequence[Fraction], inverse: bool = False) -> BirMap:
    """(x, y) -> (x, Q(x) y), or its inverse (x, y / Q(x))."""
    q = len(q_coeffs) - 1
    q_h = _homogenize(q_coeffs, 0, 3)
    z_q = _monomial(3, z=q)
    if inverse:
        components = [q_h * _monomial(3, x=1), z_q * _monomial(3, y=1), q_h * _monomial(3, z=1)]
    else:
        components = [_monomial(3, x=1) * z_q, q_h * _monomial(3, y=1), _monomial(3, z=q + 1)]
    return BirMap.from_components(components)


def henon_map(p_coeffs: Sequence[Fraction], delta: Fraction = Fraction(1)) -> BirMap:
    """(x, y) -> (y, p(y) - delta x) for p of degree q >= 2."""
    q = len(p_coeffs) - 1
    if q < 2:
        raise InvalidParameterError("Henon-type map needs deg p >= 2")
    if delta == 0:
        raise InvalidParameterError("Henon-type map needs delta != 0")
    p_h = _homogenize(p_coeffs, 1, 3)
    z_q1 = _monomial(3, z=q - 1)
    components = [
        _monomial(3, y=1) * z_q1,
        p_h - (_monomial(3, x=1) * z_q1).scale(delta),
        _monomial(3, z=q),
    ]
    return BirMap.from_components(components)


def builtin_family(name: str, params: Optional[Mapping[str, Any]] = None) -> BirMap:
    """Named map from a small parameter dictionary.

    Families: identity(dim), linear(matrix), diagonal(entries), sigma(),
    jonquieres(Q, inverse), henon(p, delta), monomial(matrix).

    Raises:
        InvalidParameterError: On unknown families or malformed parameters
    """
    params = dict(params or {})
    key = name.strip().lower()

    if key == "identity":
        return identity_map(int(params.get("dim", 2)))
    if key == "linear":
        if "matrix" not in params:
            raise InvalidParameterError("linear family needs a 'matrix' parameter")
        return linear_map(_read_matrix(params["matrix"]))
    if key == "diagonal":
        entries = params.get("entries")
        if isinstance(entries, str):
            entries = [e for e in entries.replace("[", "").replace("]", "").split(",") if e]
        if not entries:
            raise InvalidParameterError("diagonal family needs 'entries'")
        return linear_map(diagonal(entries))
    if key == "sigma":
        return sigma_map()
    if key == "jonquieres":
        inverse = str(params.get("inverse", "false")).lower() in ("1", "true", "yes")
        return jonquieres_map(_read_affine_poly(params.get("Q", "x"), "x"), inverse=inverse)
    if key == "henon":
        delta = Fraction(str(params.get("delta", 1)))
        return henon_map(_read_affine_poly(params.get("p", "y^2"), "y"), delta)
    if key == "monomial":
        if "matrix" not in params:
            raise InvalidParameterError("monomial family needs a 'matrix' parameter")
        return monomial_map(_read_matrix(params["matrix"]))

    raise InvalidParameterError(f"unknown map family '{name}'")
