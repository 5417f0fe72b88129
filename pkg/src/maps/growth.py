"""Degree sequences of iterates and their growth classification."""

import logging
import math
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.domains import FF
from sympy.polys.rings import PolyElement, PolyRing

from src.config import settings
from src.exceptions import DegenerateCompositionError, InsufficientDataError, InvalidParameterError
from src.maps.birmap import BirMap, compose, format_map
from src.polynomials.homopoly import evaluate_terms
from src.reports.schemas import DegreeSequence, DynamicalDegreeEstimate, GrowthVerdict

logger = logging.getLogger(__name__)

LINE_PRIME = 2**61 - 1
LINE_SAMPLES = 2


def iterate_degrees(
    f: BirMap,
    N: int,
    degree_cap: Optional[int] = None,
    term_cap: Optional[int] = None,
    method: str = "exact",
    seed: Optional[int] = None,
) -> DegreeSequence:
    """Degrees of f, f^2, ..., f^N.

    Iteration stops early, with `truncated` set, once a degree exceeds
    `degree_cap` or an exact iterate exceeds `term_cap` terms.

    Args:
        f: The map to iterate
        N: Number of iterates
        degree_cap: Largest degree to keep iterating past
        term_cap: Largest total term count of an exact iterate
        method: "exact" composes full maps; "line" restricts to random lines mod a prime
        seed: Seed for the random lines of the "line" method

    Returns:
        DegreeSequence with the degrees computed so far

    Raises:
        InvalidParameterError: If N < 1 or the method is unknown
        DegenerateCompositionError: If an iterate is [0 : ... : 0]
    """
    if N < 1:
        raise InvalidParameterError(f"N must be at least 1, got {N}")
    degree_cap = degree_cap or settings.degree_cap
    term_cap = term_cap or settings.term_cap

    if method == "exact":
        degrees, reason = _exact_degrees(f, N, degree_cap, term_cap)
    elif method == "line":
        degrees, reason = _line_degrees(f, N, degree_cap, seed)
    else:
        raise InvalidParameterError(f"unknown iteration method '{method}'")

    if reason:
        logger.warning(f"Iteration of {f.identifier()} truncated after {len(degrees)}: {reason}")
    return DegreeSequence(
        map=format_map(f),
        source=f.identifier(),
        degrees=degrees,
        dim=f.dim,
        truncated=reason is not None,
        truncation_reason=reason,
        method=method,
    )


def _exact_degrees(
    f: BirMap, N: int, degree_cap: int, term_cap: int
) -> Tuple[List[int], Optional[str]]:
    degrees: List[int] = []
    current = f
    for n in range(1, N + 1):
        if n > 1:
            current = compose(f, current)
        degrees.append(current.degree)
        logger.debug(f"deg f^{n} = {current.degree} ({current.num_terms} terms)")
        if n == N:
            break
        if current.degree > degree_cap:
            return degrees, f"degree {current.degree} exceeds cap {degree_cap}"
        if current.num_terms > term_cap:
            return degrees, f"{current.num_terms} terms exceed cap {term_cap}"
    return degrees, None


def _line_degrees(
    f: BirMap, N: int, degree_cap: int, seed: Optional[int]
) -> Tuple[List[int], Optional[str]]:
    """Degrees of the iterates restricted to random lines over GF(p).

    The restriction of f^n to a line has degree deg f^n unless the line is
    special, so the maximum over a few seeded lines is exact with
    overwhelming probability.
    """
    ring = PolyRing("t", FF(LINE_PRIME))
    domain = ring.domain
    t = ring.gens[0]
    rng = np.random.default_rng(settings.default_seed if seed is None else seed)
    component_terms = [
        [(e, domain.convert(int(c) % LINE_PRIME)) for e, c in comp.terms] for comp in f.components
    ]

    lines = []
    for _ in range(LINE_SAMPLES):
        base = rng.integers(1, 2**31, size=f.num_vars)
        direction = rng.integers(1, 2**31, size=f.num_vars)
        lines.append([ring(int(b)) + t * int(d) for b, d in zip(base, direction)])

    degrees: List[int] = []
    for n in range(1, N + 1):
        step = 0
        for index, line in enumerate(lines):
            raw = [evaluate_terms(terms, line, ring) for terms in component_terms]
            lines[index] = _reduce_line(raw, f)
            step = max(step, max(p.degree() for p in lines[index] if p))
        degrees.append(step)
        if n < N and step > degree_cap:
            return degrees, f"degree {step} exceeds cap {degree_cap}"
    return degrees, None


def _reduce_line(raw: List[PolyElement], f: BirMap) -> List[PolyElement]:
    nonzero = [p for p in raw if p]
    if not nonzero:
        raise DegenerateCompositionError(f"iterate of {format_map(f)} vanishes on a line")
    common = reduce(lambda a, b: a.gcd(b), nonzero)
    if common.is_ground:
        return raw
    return [p.exquo(common) if p else p for p in raw]


def dynamical_degree_estimate(seq: DegreeSequence) -> DynamicalDegreeEstimate:
    """d_N^(1/N), d_N / d_(N-1) and their geometric mean.

    Raises:
        InsufficientDataError: If fewer than four degrees are available
    """
    degrees = seq.degrees
    if len(degrees) < 4:
        raise InsufficientDataError(f"need at least 4 degrees, got {len(degrees)}")
    n = len(degrees)
    root = math.exp(math.log(degrees[-1]) / n)
    ratio = degrees[-1] / degrees[-2]
    return DynamicalDegreeEstimate(
        nth_root=root,
        last_ratio=ratio,
        estimate=math.sqrt(root * ratio),
        spread=abs(root - ratio),
    )


def _differences(values: Sequence[int], order: int) -> List[int]:
    diffs = list(values)
    for _ in range(order):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    return diffs


def _residue_classes(tail: Sequence[int], period: int) -> List[List[int]]:
    return [list(tail[r::period]) for r in range(period)]


def _polynomial_fit(degrees: Sequence[int], order: int) -> Optional[Tuple[int, Fraction]]:
    """Smallest period on which the tail is exactly polynomial of the given order.

    Returns (period, leading coefficient per step) or None.
    """
    n = len(degrees)
    tail_length = max(order + 3, n - int(n * settings.polynomial_tail_fraction))
    tail = degrees[-tail_length:]
    for period in range(1, settings.max_period + 1):
        classes = _residue_classes(tail, period)
        if any(len(c) < order + 3 for c in classes):
            break
        if any(any(_differences(c, order + 1)) for c in classes):
            continue
        leads = {_differences(c, order)[-1] for c in classes}
        if len(leads) != 1:
            continue
        lead = leads.pop()
        if lead <= 0:
            continue
        return period, Fraction(lead, period**order)
    return None


def _consequence(growth_class: str, dim: Optional[int]) -> str:
    if growth_class == "Exponential":
        return "Undistorted"
    if growth_class in ("Linear", "Quadratic"):
        return "Undistorted" if dim in (None, 2) else "AtMostExponential"
    return "NoVerdict"


def classify_growth(seq: DegreeSequence) -> GrowthVerdict:
    """Bounded / Linear / Quadratic / Exponential by exact integer tests.

    Polynomial classes are tested first with exact differences (allowing a
    short period), so that short quadratic sequences are not mistaken for
    exponential ones by their early ratios.
    """
    degrees = seq.degrees
    n = len(degrees)
    if n < settings.growth_min_length:
        return GrowthVerdict(growth_class="Inconclusive", distortion_consequence="NoVerdict")

    half = n // 2
    peak = max(degrees)
    if max(degrees[half:]) <= max(degrees[:half]) and degrees.count(peak) >= 2:
        return GrowthVerdict(growth_class="Bounded", distortion_consequence="NoVerdict")

    linear = _polynomial_fit(degrees, 1)
    if linear is not None:
        period, slope = linear
        return GrowthVerdict(
            growth_class="Linear",
            distortion_consequence=_consequence("Linear", seq.dim),
            slope=float(slope),
            exact_slope=str(slope),
            period=period,
        )

    quadratic = _polynomial_fit(degrees, 2)
    if quadratic is not None:
        period, second = quadratic
        coefficient = second / 2
        return GrowthVerdict(
            growth_class="Quadratic",
            distortion_consequence=_consequence("Quadratic", seq.dim),
            quadratic_coefficient=float(coefficient),
            exact_slope=str(coefficient),
            period=period,
        )

    tail = degrees[half:]
    ratios = [b / a for a, b in zip(tail, tail[1:])]
    last_ratio = degrees[-1] / degrees[-2]
    if min(ratios) >= 1 + settings.exponential_margin and n * (last_ratio - 1) > 3:
        return GrowthVerdict(
            growth_class="Exponential",
            distortion_consequence="Undistorted",
            ratio=last_ratio,
        )

    return GrowthVerdict(growth_class="Inconclusive", distortion_consequence="NoVerdict")


def check_sqrt_subadditivity(degrees: Sequence[int]) -> List[Tuple[int, int]]:
    """Pairs (n, m) with sqrt(d_(n+m)) > sqrt(d_n) + sqrt(d_m); degrees[k] is d_(k+1).

    Compared exactly: sqrt(a) <= sqrt(b) + sqrt(c) iff a - b - c <= 2 sqrt(bc).
    """
    violations = []
    length = len(degrees)
    for n in range(1, length + 1):
        for m in range(1, length + 1 - n):
            a, b, c = degrees[n + m - 1], degrees[n - 1], degrees[m - 1]
            slack = a - b - c
            if slack > 0 and slack * slack > 4 * b * c:
                violations.append((n, m))
    return violations


def sqrt_slope_estimate(degrees: Sequence[int]) -> float:
    """Least-squares slope of sqrt(d_n) against n."""
    if len(degrees) < 2:
        raise InsufficientDataError("need at least 2 degrees for a slope")
    ns = np.arange(1, len(degrees) + 1, dtype=float)
    roots = np.sqrt(np.asarray(degrees, dtype=float))
    slope, _ = np.polyfit(ns, roots, 1)
    return float(slope)
