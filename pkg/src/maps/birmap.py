"""Rational self-maps of P^m in homogeneous coordinates."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import List, Sequence, Tuple

from sympy.polys.rings import PolyElement

from src.config import settings
from src.exceptions import DegenerateCompositionError, PolynomialError
from src.polynomials.homopoly import (
    HomoPoly,
    evaluate_terms,
    from_ring_element,
    poly_ring,
    to_ring_element,
)
from src.polynomials.parser import format_poly, parse_poly
from src.utils.digest import canonical_digest

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BirMap:
    """[f_0 : ... : f_m] with equal-degree, jointly coprime, primitive integer components.

    Always build through `BirMap.from_components`, which normalizes.
    """

    dim: int
    components: Tuple[HomoPoly, ...]

    @classmethod
    def from_components(cls, components: Sequence[HomoPoly]) -> "BirMap":
        return normalize_components(components)

    @property
    def degree(self) -> int:
        return self.components[0].degree

    @property
    def num_vars(self) -> int:
        return self.dim + 1

    @property
    def num_terms(self) -> int:
        return sum(c.num_terms for c in self.components)

    def coefficient_stream(self) -> List[int]:
        """Concatenated integer coefficients in canonical order."""
        return [int(c) for comp in self.components for _, c in comp.terms]

    def identifier(self) -> str:
        return canonical_digest(format_map(self))

    def __str__(self) -> str:
        return format_map(self)


def _joint_gcd(elements: List[PolyElement]) -> PolyElement:
    """GCD of all components, starting from the sparsest one."""
    ordered = sorted(elements, key=len)
    common = ordered[0]
    for element in ordered[1:]:
        if common.is_ground:
            break
        common = common.gcd(element)
    return common


def normalize_components(components: Sequence[HomoPoly]) -> BirMap:
    """Divide out the joint polynomial GCD and integer content, then fix the sign.

    Raises:
        PolynomialError: If components disagree on variables or degree
        DegenerateCompositionError: If every component is zero
    """
    if len(components) < 2:
        raise PolynomialError("a map of P^m needs at least two components")
    num_vars = len(components)
    if any(c.num_vars != num_vars for c in components):
        raise PolynomialError(f"components must use {num_vars} variables")
    degrees = {c.degree for c in components}
    if len(degrees) != 1:
        raise PolynomialError(f"components have different degrees {sorted(degrees)}")
    degree = degrees.pop()

    nonzero = [c for c in components if not c.is_zero]
    if not nonzero:
        raise DegenerateCompositionError("map is identically [0 : ... : 0]")

    # Clear denominators jointly so every component lives in Z[x]
    denominator = reduce(lcm, (c.denominator for p in nonzero for _, c in p.terms))
    ring = poly_ring(num_vars, exact_integers=True)
    elements = [
        ring.from_dict({e: int(c * denominator) for e, c in p.terms}) for p in components
    ]

    common = _joint_gcd([e for e in elements if e])
    if not common.is_ground:
        common_degree = max(sum(m) for m in common.keys())
        elements = [e.exquo(common) if e else e for e in elements]
        degree -= common_degree

    content = reduce(gcd, (abs(int(c)) for e in elements for c in e.values()))
    reduced = [from_ring_element(e, num_vars, degree) for e in elements]

    first_sign = next(p.leading_coefficient for p in reduced if not p.is_zero)
    factor = Fraction(1 if first_sign > 0 else -1, content)
    if factor != 1:
        reduced = [p.scale(factor) for p in reduced]
    return BirMap(dim=num_vars - 1, components=tuple(reduced))


@lru_cache(maxsize=settings.compose_cache_size)
def compose(f: BirMap, g: BirMap) -> BirMap:
    """f o g with the common factor removed; deg(f o g) <= deg f * deg g.

    Raises:
        PolynomialError: On dimension mismatch
        DegenerateCompositionError: If the composition is [0 : ... : 0]
    """
    if f.dim != g.dim:
        raise PolynomialError(f"cannot compose maps of P^{f.dim} and P^{g.dim}")

    ring = poly_ring(f.num_vars, exact_integers=True)
    images = [to_ring_element(c) for c in g.components]
    raw_degree = f.degree * g.degree
    raw = []
    for component in f.components:
        terms = [(e, int(c)) for e, c in component.terms]
        raw.append(from_ring_element(evaluate_terms(terms, images, ring), f.num_vars, raw_degree))

    if all(p.is_zero for p in raw):
        raise DegenerateCompositionError(f"composition of {f} and {g} is [0 : ... : 0]")
    return normalize_components(raw)


def identity_map(dim: int) -> BirMap:
    """[x_0 : ... : x_dim], the identity of P^dim."""
    num_vars = dim + 1
    return BirMap.from_components([HomoPoly.variable(i, num_vars) for i in range(num_vars)])


def is_identity(f: BirMap) -> bool:
    """Exact comparison with the identity after normalization."""
    return f == identity_map(f.dim)


def iterate(f: BirMap, n: int) -> BirMap:
    """f^n by repeated left composition."""
    if n < 0:
        raise PolynomialError("negative iterates need an inverse map")
    result = identity_map(f.dim)
    for _ in range(n):
        result = compose(f, result)
    return result


def power_by_squaring(f: BirMap, n: int) -> BirMap:
    """f^n by binary powering; must agree with `iterate`."""
    if n < 0:
        raise PolynomialError("negative iterates need an inverse map")
    result = identity_map(f.dim)
    base = f
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def parse_map(text: str) -> BirMap:
    """Parse "[y*z : x*z : x*y]" into a normalized map.

    Raises:
        PolynomialError: On malformed input
    """
    stripped = text.strip()
    if not (stripped.startswith("[") and stripped.endswith("]")):
        raise PolynomialError(f"map must be written as [f0 : ... : fm], got '{text}'")
    parts = [p.strip() for p in stripped[1:-1].split(":")]
    if len(parts) < 2 or any(not p for p in parts):
        raise PolynomialError(f"map needs at least two non-empty components, got '{text}'")

    num_vars = len(parts)
    parsed = [parse_poly(p, num_vars) if p != "0" else None for p in parts]
    degrees = {p.degree for p in parsed if p is not None}
    if not degrees:
        raise DegenerateCompositionError(f"map '{text}' is identically zero")
    if len(degrees) > 1:
        raise PolynomialError(f"components of '{text}' have different degrees")
    degree = degrees.pop()
    components = [p if p is not None else HomoPoly.zero(num_vars, degree) for p in parsed]
    return BirMap.from_components(components)


def format_map(f: BirMap) -> str:
    return "[" + " : ".join(format_poly(c) for c in f.components) + "]"
