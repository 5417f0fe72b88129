"""Places of Q: the archimedean absolute value and the p-adic ones."""

import math
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Dict, List, Sequence

from sympy import factorint

from src.exceptions import InvalidParameterError
from src.reports.schemas import PlaceValue

INFINITY = "inf"


def valuation(x: Fraction, p: int) -> int:
    """v_p(x) for a nonzero rational x."""
    if not x:
        raise InvalidParameterError("valuation of zero is undefined")
    v = 0
    numerator, denominator = abs(x.numerator), x.denominator
    while numerator % p == 0:
        numerator //= p
        v += 1
    while denominator % p == 0:
        denominator //= p
        v -= 1
    return v


def prime_support(x: Fraction) -> List[int]:
    """Primes dividing the numerator or the denominator of x."""
    primes = set(factorint(abs(x.numerator))) | set(factorint(x.denominator))
    primes.discard(1)
    return sorted(primes)


def place_values(x: Fraction) -> List[PlaceValue]:
    """log|x|_v at infinity and at every prime where |x|_v != 1.

    Raises:
        InvalidParameterError: If x is zero
    """
    x = Fraction(x)
    if not x:
        raise InvalidParameterError("place values of zero are undefined")
    values = [PlaceValue(p=INFINITY, logval=math.log(abs(x)))]
    for p in prime_support(x):
        v = valuation(x, p)
        values.append(PlaceValue(p=str(p), logval=-v * math.log(p), valuation=v))
    return values


def product_formula_holds(x: Fraction) -> bool:
    """Exact check that prod_p p^(v_p(x)) reconstructs |x|, i.e. prod_v |x|_v = 1."""
    x = Fraction(x)
    if not x:
        raise InvalidParameterError("product formula needs a nonzero rational")
    reconstructed = Fraction(1)
    for p in prime_support(x):
        reconstructed *= Fraction(p) ** valuation(x, p)
    return reconstructed == abs(x)


def vector_places(coeffs: Sequence[Fraction]) -> List[PlaceValue]:
    """log max_i |a_i|_v per place for a nonzero rational vector.

    Only places with a nonzero contribution are listed besides infinity; the
    contributions sum to the height of the vector.
    """
    nonzero = [Fraction(c) for c in coeffs if c]
    if not nonzero:
        raise InvalidParameterError("height of the zero vector is undefined")
    content = Fraction(
        reduce(gcd, (abs(c.numerator) for c in nonzero)),
        reduce(lcm, (c.denominator for c in nonzero)),
    )
    places = [PlaceValue(p=INFINITY, logval=math.log(max(abs(c) for c in nonzero)))]
    for p in prime_support(content):
        v = valuation(content, p)
        places.append(PlaceValue(p=str(p), logval=-v * math.log(p), valuation=v))
    return places


def local_maxima(coeffs: Sequence[Fraction]) -> Dict[str, Fraction]:
    """max_i |a_i|_v as an exact rational for infinity and every prime in play."""
    nonzero = [Fraction(c) for c in coeffs if c]
    maxima: Dict[str, Fraction] = {INFINITY: max(abs(c) for c in nonzero)}
    primes = sorted({p for c in nonzero for p in prime_support(c)})
    for p in primes:
        worst = max(-valuation(c, p) for c in nonzero)
        maxima[str(p)] = Fraction(p) ** worst
    return maxima
