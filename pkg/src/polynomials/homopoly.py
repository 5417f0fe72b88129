"""Exact homogeneous polynomials over the rationals.

Terms are kept in one global canonical order: graded, then lexicographic with
the LAST variable most significant. The order fixes the sign convention of
normalize_primitive and the serialization used for hashing.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from sympy.polys.domains import QQ, ZZ
from sympy.polys.rings import PolyElement, PolyRing

from src.exceptions import PolynomialError

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Term = Tuple[Exponent, Fraction]
Scalar = Union[int, Fraction]


def variable_names(num_vars: int) -> Tuple[str, ...]:
    """Printable variable names: x, y, z on P^2, otherwise x0..xm."""
    if num_vars == 3:
        return ("x", "y", "z")
    return tuple(f"x{i}" for i in range(num_vars))


def canonical_key(exponent: Exponent) -> Exponent:
    """Sort key; terms are stored in descending key order."""
    return exponent[::-1]


@lru_cache(maxsize=None)
def poly_ring(num_vars: int, exact_integers: bool = False) -> PolyRing:
    """Cached sympy ring Z[x0..xm] or Q[x0..xm]."""
    names = tuple(f"x{i}" for i in range(num_vars))
    return PolyRing(names, ZZ if exact_integers else QQ)


@dataclass(frozen=True)
class HomoPoly:
    """Homogeneous polynomial with exact rational coefficients.

    `terms` holds (exponent, coefficient) pairs in canonical order with no zero
    coefficients. The zero polynomial has no terms but keeps its degree.
    """

    num_vars: int
    degree: int
    terms: Tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise PolynomialError(f"num_vars must be positive, got {self.num_vars}")
        if self.degree < 0:
            raise PolynomialError(f"degree must be non-negative, got {self.degree}")

    @classmethod
    def from_terms(
        cls, num_vars: int, terms: Mapping[Exponent, Scalar], degree: Union[int, None] = None
    ) -> "HomoPoly":
        """Build from an exponent -> coefficient map, validating homogeneity."""
        cleaned: Dict[Exponent, Fraction] = {}
        for exponent, coeff in terms.items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != num_vars:
                raise PolynomialError(
                    f"exponent {exponent} has {len(exponent)} entries, expected {num_vars}"
                )
            if any(e < 0 for e in exponent):
                raise PolynomialError(f"negative exponent in {exponent}")
            value = Fraction(coeff)
            if value:
                cleaned[exponent] = cleaned.get(exponent, Fraction(0)) + value
                if not cleaned[exponent]:
                    del cleaned[exponent]

        degrees = {sum(e) for e in cleaned}
        if len(degrees) > 1:
            raise PolynomialError(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
        if degrees:
            found = degrees.pop()
            if degree is not None and degree != found:
                raise PolynomialError(f"declared degree {degree} but terms have degree {found}")
            degree = found
        elif degree is None:
            raise PolynomialError("zero polynomial needs an explicit degree")

        ordered = tuple(sorted(cleaned.items(), key=lambda t: canonical_key(t[0]), reverse=True))
        return cls(num_vars=num_vars, degree=degree, terms=ordered)

    @classmethod
    def zero(cls, num_vars: int, degree: int) -> "HomoPoly":
        """The zero polynomial, which still carries a degree."""
        return cls(num_vars=num_vars, degree=degree, terms=())

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: Scalar = 1) -> "HomoPoly":
        """Single term coeff * x^exponent; the degree is sum(exponent)."""
        exponent = tuple(exponent)
        return cls.from_terms(len(exponent), {exponent: coeff})

    @classmethod
    def variable(cls, index: int, num_vars: int) -> "HomoPoly":
        """The coordinate x_index among num_vars variables."""
        exponent = tuple(1 if i == index else 0 for i in range(num_vars))
        return cls.monomial(exponent)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    @property
    def coefficients(self) -> Dict[Exponent, Fraction]:
        return dict(self.terms)

    @property
    def leading_coefficient(self) -> Fraction:
        """Coefficient of the canonically first term."""
        if self.is_zero:
            raise PolynomialError("zero polynomial has no leading coefficient")
        return self.terms[0][1]

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for _, c in self.terms)

    def partial_degrees(self) -> Tuple[int, ...]:
        """Degree in each variable separately."""
        if self.is_zero:
            raise PolynomialError("partial degrees of the zero polynomial are undefined")
        return tuple(max(e[i] for e, _ in self.terms) for i in range(self.num_vars))

    def scale(self, factor: Scalar) -> "HomoPoly":
        factor = Fraction(factor)
        if not factor:
            return HomoPoly.zero(self.num_vars, self.degree)
        return HomoPoly(
            num_vars=self.num_vars,
            degree=self.degree,
            terms=tuple((e, c * factor) for e, c in self.terms),
        )

    def __neg__(self) -> "HomoPoly":
        return self.scale(-1)

    def __add__(self, other: "HomoPoly") -> "HomoPoly":
        return poly_arith(self, other, "add")

    def __sub__(self, other: "HomoPoly") -> "HomoPoly":
        return poly_arith(self, -other, "add")

    def __mul__(self, other: Union["HomoPoly", int, Fraction]) -> "HomoPoly":
        if isinstance(other, HomoPoly):
            return poly_arith(self, other, "mul")
        return self.scale(other)

    __rmul__ = __mul__

    def __str__(self) -> str:
        from src.polynomials.parser import format_poly

        return format_poly(self)


def to_ring_element(f: HomoPoly) -> PolyElement:
    """Convert to a sympy ring element (over Z when all coefficients are integers)."""
    if f.is_integral:
        ring = poly_ring(f.num_vars, exact_integers=True)
        return ring.from_dict({e: ZZ(c.numerator) for e, c in f.terms})
    ring = poly_ring(f.num_vars)
    return ring.from_dict({e: QQ(c.numerator, c.denominator) for e, c in f.terms})


def _to_fraction(coeff: Any) -> Fraction:
    if hasattr(coeff, "denominator") and not isinstance(coeff, int):
        return Fraction(int(coeff.numerator), int(coeff.denominator))
    return Fraction(int(coeff))


def from_ring_element(element: PolyElement, num_vars: int, degree: int) -> HomoPoly:
    """Convert a homogeneous sympy ring element back, keeping `degree` for zero."""
    terms = [(tuple(e), _to_fraction(c)) for e, c in element.items() if c]
    terms.sort(key=lambda t: canonical_key(t[0]), reverse=True)
    if terms:
        found = sum(terms[0][0])
        if found != degree:
            raise PolynomialError(f"ring element has degree {found}, expected {degree}")
    return HomoPoly(num_vars=num_vars, degree=degree, terms=tuple(terms))


def poly_arith(f: HomoPoly, g: HomoPoly, op: str) -> HomoPoly:
    """Exact sum or product of two homogeneous polynomials.

    Args:
        f: Left operand
        g: Right operand
        op: "add" or "mul"

    Returns:
        The exact result; the product has degree deg f + deg g

    Raises:
        PolynomialError: On variable-count mismatch, degree mismatch for add, or unknown op
    """
    if f.num_vars != g.num_vars:
        raise PolynomialError(f"variable count mismatch: {f.num_vars} vs {g.num_vars}")

    if op == "add":
        if f.degree != g.degree:
            raise PolynomialError(f"cannot add degree {f.degree} and degree {g.degree}")
        total = f.coefficients
        for exponent, coeff in g.terms:
            total[exponent] = total.get(exponent, Fraction(0)) + coeff
        return HomoPoly.from_terms(f.num_vars, total, degree=f.degree)

    if op == "mul":
        degree = f.degree + g.degree
        if f.is_zero or g.is_zero:
            return HomoPoly.zero(f.num_vars, degree)
        product = to_ring_element(f) * to_ring_element(g)
        return from_ring_element(product, f.num_vars, degree)

    raise PolynomialError(f"unknown operation '{op}'")


def poly_content(f: HomoPoly) -> Fraction:
    """Positive rational content: gcd of numerators over lcm of denominators."""
    if f.is_zero:
        raise PolynomialError("content of the zero polynomial is undefined")
    numerators = reduce(gcd, (abs(c.numerator) for _, c in f.terms))
    denominators = reduce(lcm, (c.denominator for _, c in f.terms))
    return Fraction(numerators, denominators)


def normalize_primitive(f: HomoPoly) -> Tuple[Fraction, HomoPoly]:
    """Split f = scale * F with F primitive integral and positive leading coefficient.

    Raises:
        PolynomialError: If f is zero
    """
    if f.is_zero:
        raise PolynomialError("cannot normalize the zero polynomial")
    scale = poly_content(f)
    if f.leading_coefficient < 0:
        scale = -scale
    primitive = HomoPoly(
        num_vars=f.num_vars,
        degree=f.degree,
        terms=tuple((e, c / scale) for e, c in f.terms),
    )
    return scale, primitive


def gcd_homogeneous(f: HomoPoly, g: HomoPoly) -> HomoPoly:
    """Primitive greatest common divisor of two nonzero homogeneous polynomials."""
    if f.is_zero or g.is_zero:
        raise PolynomialError("gcd of the zero polynomial is undefined")
    if f.num_vars != g.num_vars:
        raise PolynomialError(f"variable count mismatch: {f.num_vars} vs {g.num_vars}")

    _, f_prim = normalize_primitive(f)
    _, g_prim = normalize_primitive(g)
    common = to_ring_element(f_prim).gcd(to_ring_element(g_prim))
    degree = max(sum(e) for e in common.keys())
    _, result = normalize_primitive(from_ring_element(common, f.num_vars, degree))
    return result


def delta_degree_sum(f: HomoPoly) -> int:
    """Sum of the partial degrees; at most num_vars * deg f."""
    return sum(f.partial_degrees())


def substitute(f: HomoPoly, images: Sequence[HomoPoly]) -> HomoPoly:
    """Evaluate f at a tuple of equal-degree homogeneous polynomials."""
    if len(images) != f.num_vars:
        raise PolynomialError(f"expected {f.num_vars} images, got {len(images)}")
    target_vars = {p.num_vars for p in images}
    image_degrees = {p.degree for p in images}
    if len(target_vars) != 1 or len(image_degrees) != 1:
        raise PolynomialError("substituted polynomials must share variables and degree")
    num_vars = target_vars.pop()
    degree = f.degree * image_degrees.pop()

    ring = poly_ring(num_vars)
    elements = [
        ring.from_dict({e: QQ(c.numerator, c.denominator) for e, c in p.terms}) for p in images
    ]
    terms = [(e, QQ(c.numerator, c.denominator)) for e, c in f.terms]
    return from_ring_element(evaluate_terms(terms, elements, ring), num_vars, degree)


def evaluate_terms(
    terms: Iterable[Tuple[Exponent, Any]], images: List[PolyElement], ring: PolyRing
) -> PolyElement:
    """Sum of c * prod(images[i]^e_i) with per-variable power caching."""
    powers: List[Dict[int, PolyElement]] = [{1: image} for image in images]
    total = ring.zero
    for exponent, coeff in terms:
        term = ring.one
        for index, power in enumerate(exponent):
            if not power:
                continue
            cache = powers[index]
            if power not in cache:
                cache[power] = images[index] ** power
            term = term * cache[power]
        total += term.mul_ground(coeff)
    return total
