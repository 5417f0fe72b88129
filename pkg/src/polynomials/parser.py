"""Text syntax for homogeneous polynomials: `3*x^2*y - 1/2*z^3`."""

import logging
import re
from fractions import Fraction
from typing import Dict, List, Mapping, Optional

import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from src.exceptions import PolynomialError
from src.polynomials.homopoly import Exponent, HomoPoly, variable_names

logger = logging.getLogger(__name__)

TRANSFORMATIONS = standard_transformations + (convert_xor,)

_ALLOWED_TEXT = re.compile(r"[\w\s+\-*/^().]*")
_NAME = re.compile(r"[A-Za-z_]\w*")


def _symbol_table(num_vars: int) -> Dict[str, sp.Symbol]:
    """Accepted names; on P^2 both x,y,z and x0,x1,x2 are allowed."""
    canonical = [sp.Symbol(name) for name in variable_names(num_vars)]
    table = {str(symbol): symbol for symbol in canonical}
    for index, symbol in enumerate(canonical):
        table.setdefault(f"x{index}", symbol)
    return table


def _safe_expr(text: str, table: Mapping[str, sp.Symbol]) -> sp.Expr:
    """parse_expr on text made only of numbers, operators and names from `table`."""
    if not _ALLOWED_TEXT.fullmatch(text):
        raise PolynomialError(f"unexpected characters in '{text}'")
    unknown = sorted(set(_NAME.findall(text)) - set(table))
    if unknown:
        raise PolynomialError(f"unknown variables {unknown} in '{text}'")
    try:
        return parse_expr(text, local_dict=dict(table), transformations=TRANSFORMATIONS)
    except Exception as e:
        raise PolynomialError(f"cannot parse '{text}': {e}") from e


def parse_univariate(text: str, variable: str) -> List[Fraction]:
    """Coefficients c_0..c_q of a polynomial in one named variable, e.g. "y^2 + 1".

    Raises:
        PolynomialError: On anything but a polynomial in `variable` over Q
    """
    symbol = sp.Symbol(variable)
    expr = _safe_expr(text, {variable: symbol})
    try:
        poly = sp.Poly(expr, symbol, domain=sp.QQ)
    except Exception as e:
        raise PolynomialError(f"'{text}' is not a polynomial in {variable}: {e}") from e
    return [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]


def parse_poly(text: str, num_vars: int, degree: Optional[int] = None) -> HomoPoly:
    """Parse a homogeneous polynomial with rational coefficients.

    Args:
        text: Expression such as "3*x^2*y - 1/2*z^3"
        num_vars: Number of homogeneous variables
        degree: Required for the zero polynomial, checked otherwise

    Returns:
        The parsed HomoPoly

    Raises:
        PolynomialError: On syntax errors, unknown variables, non-polynomial or
            non-homogeneous input
    """
    table = _symbol_table(num_vars)
    canonical = [table[name] for name in variable_names(num_vars)]

    expr = _safe_expr(text, table)

    try:
        poly = sp.Poly(expr, *canonical, domain=sp.QQ)
    except Exception as e:
        raise PolynomialError(f"'{text}' is not a polynomial: {e}") from e

    terms: Dict[Exponent, Fraction] = {}
    for monom, coeff in poly.terms():
        if coeff:
            terms[tuple(int(e) for e in monom)] = Fraction(int(coeff.p), int(coeff.q))
    return HomoPoly.from_terms(num_vars, terms, degree=degree)


def _format_monomial(exponent: Exponent, names: tuple) -> str:
    factors = []
    for name, power in zip(names, exponent):
        if power == 1:
            factors.append(name)
        elif power > 1:
            factors.append(f"{name}^{power}")
    return "*".join(factors)


def format_poly(f: HomoPoly) -> str:
    """Print in canonical term order; parse_poly(format_poly(f)) == f for f != 0."""
    if f.is_zero:
        return "0"
    names = variable_names(f.num_vars)
    pieces = []
    for index, (exponent, coeff) in enumerate(f.terms):
        monomial = _format_monomial(exponent, names)
        magnitude = abs(coeff)
        if not monomial:
            body = str(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{magnitude}*{monomial}"

        if index == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(pieces)
