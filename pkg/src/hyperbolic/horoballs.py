"""Horoballs centred at isotropic classes, their disjointness and a witness search."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple, Union

import mpmath
import numpy as np
import sympy as sp
from scipy.optimize import minimize

from src.config import settings
from src.exceptions import FormViolationError, InvalidParameterError
from src.hyperbolic.picard_manin import (
    PMClass,
    intersection,
    is_isotropic,
    require_hyperboloid,
    w_H,
    w_J,
)
from src.reports.schemas import CertificateReport, ConstantsReport, WitnessSearchReport

logger = logging.getLogger(__name__)

EPS_J_EXPRESSION = "(sqrt(3) - 1)/2"
EPS_H_EXPRESSION = "sqrt((3*sqrt(3) + 1)/18) - sqrt(2)/6"
EPS_H_PRINTED = "0.3509"
COMPARISON_DPS = 50
FREE_LABEL = "free"

EpsilonLike = Union[int, float, str, Fraction]


def exact_epsilon(value: EpsilonLike) -> Fraction:
    """Exact rational from a number as written; floats are read through their repr."""
    try:
        if isinstance(value, (int, Fraction)):
            eps = Fraction(value)
        elif isinstance(value, float):
            eps = Fraction(repr(value))
        else:
            eps = Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidParameterError(f"cannot read epsilon '{value}'") from e
    if eps <= 0:
        raise InvalidParameterError(f"epsilon must be positive, got {value}")
    return eps


@dataclass(frozen=True)
class HoroballSpec:
    """H_w(eps) = {v : v.v = 1, 0 < v.w < eps} for an isotropic centre w."""

    center: PMClass
    epsilon: Fraction

    def __post_init__(self) -> None:
        if not is_isotropic(self.center):
            raise FormViolationError(f"horoball centre {self.center} is not isotropic")
        if self.center.e0 <= 0:
            raise FormViolationError(f"horoball centre {self.center} must satisfy w.e0 > 0")
        if self.epsilon <= 0:
            raise InvalidParameterError("horoball epsilon must be positive")


def horoball_member(v: PMClass, ball: HoroballSpec) -> bool:
    require_hyperboloid(v)
    product = intersection(v, ball.center)
    return 0 < product < ball.epsilon


def _eps_j() -> Any:
    return (mpmath.sqrt(3) - 1) / 2


def _eps_h() -> Any:
    return mpmath.sqrt((3 * mpmath.sqrt(3) + 1) / 18) - mpmath.sqrt(2) / 6


def epsilon_constants(digits: int = 20) -> ConstantsReport:
    """Both thresholds to `digits` significant digits plus their defining identities."""
    with mpmath.workdps(digits + 10):
        eps_j = _eps_j()
        eps_h = _eps_h()
        discrepancy = abs(eps_h - mpmath.mpf(EPS_H_PRINTED))
        flagged = discrepancy > mpmath.mpf("0.00005")
        printed = (
            mpmath.nstr(eps_j, digits),
            mpmath.nstr(eps_h, digits),
            mpmath.nstr(discrepancy, 6),
        )

    ej = (sp.sqrt(3) - 1) / 2
    eh = sp.sqrt((3 * sp.sqrt(3) + 1) / 18) - sp.sqrt(2) / 6
    j_identity = sp.simplify(sp.expand(ej**2 + ej - sp.Rational(1, 2))) == 0
    h_expr = sp.sqrt(2) * eh**2 + sp.Rational(2, 3) * eh - 1 / sp.sqrt(6)
    h_identity = sp.simplify(sp.expand(h_expr)) == 0

    if flagged:
        logger.info(f"Printed eps_H {EPS_H_PRINTED} differs from closed form by {printed[2]}")
    return ConstantsReport(
        eps_J=printed[0],
        eps_H=printed[1],
        eps_H_printed=EPS_H_PRINTED,
        eps_H_discrepancy=printed[2],
        eps_H_flagged=bool(flagged),
        eps_J_identity_holds=bool(j_identity),
        eps_H_identity_holds=bool(h_identity),
        digits=digits,
    )


def _check_integral_isotropic(hw: PMClass) -> None:
    if hw.e0.denominator != 1 or any(v.denominator != 1 for _, v in hw.exc):
        raise InvalidParameterError(f"{hw} must have integer coefficients")
    negative = [label for label in hw.labels if hw.multiplicity(label) < 0]
    if negative:
        raise InvalidParameterError(f"negative multiplicities at {negative} in {hw}")
    if hw.e0 <= 0:
        raise FormViolationError(f"{hw} must have positive e0 coefficient")
    if not is_isotropic(hw):
        raise FormViolationError(f"{hw} is not isotropic (self-intersection {hw.dot(hw)})")


def below_eps_j(eps: Fraction) -> bool:
    """eps < (sqrt(3) - 1)/2, decided exactly as (2 eps + 1)^2 < 3."""
    return (2 * eps + 1) ** 2 < 3


def at_most_eps_h(eps: Fraction) -> bool:
    with mpmath.workdps(COMPARISON_DPS):
        return mpmath.mpf(eps.numerator) / eps.denominator <= _eps_h()


def disjointness_certificate(
    hw: PMClass, family: str, epsilon: EpsilonLike
) -> CertificateReport:
    """Certify H_w(eps) and H_hw(eps) disjoint for the family's reference class w.

    Certified needs hw != w (hw.w > 0) and eps < eps_J for family J,
    eps <= eps_H for family H.

    Raises:
        InvalidParameterError: On non-integral classes, negative multiplicities or eps <= 0
        FormViolationError: If hw is not isotropic
    """
    if family not in ("J", "H"):
        raise InvalidParameterError(f"family must be 'J' or 'H', got '{family}'")
    eps = exact_epsilon(epsilon)
    _check_integral_isotropic(hw)

    if family == "J":
        pairing = intersection(hw, w_J())
        fits = below_eps_j(eps)
        with mpmath.workdps(COMPARISON_DPS):
            threshold = mpmath.nstr(_eps_j(), 20)
        expression = EPS_J_EXPRESSION
        data = {"s1": str(pairing)}
    else:
        pairing = intersection(hw, w_H())
        fits = at_most_eps_h(eps)
        with mpmath.workdps(COMPARISON_DPS):
            threshold = mpmath.nstr(_eps_h(), 20)
        expression = EPS_H_EXPRESSION
        data = {"S": str(pairing)}

    if pairing == 0:
        status, reason = "NotApplicable", "hw coincides with the reference class"
    elif not fits:
        status, reason = "NotApplicable", f"epsilon {eps} is above the threshold {threshold}"
    else:
        status, reason = "Certified", "distinct centres and epsilon below the threshold"

    logger.debug(f"Certificate {family} for {hw} at eps={eps}: {status}")
    return CertificateReport(
        status=status,
        family=family,
        epsilon=float(eps),
        threshold=threshold,
        threshold_expression=expression,
        m=str(hw.e0),
        reason=reason,
        **data,
    )


@dataclass(frozen=True)
class _SearchProblem:
    """Coordinates (a0, c_1..c_k, t) over the union of supports of w and hw."""

    labels: Tuple[str, ...]
    w: np.ndarray
    hw: np.ndarray

    @classmethod
    def build(cls, w: PMClass, hw: PMClass) -> "_SearchProblem":
        labels = tuple(sorted(set(w.labels) | set(hw.labels)))
        return cls(labels=labels, w=_as_vector(w, labels), hw=_as_vector(hw, labels))

    def products(self, point: np.ndarray) -> Tuple[float, float]:
        return _minkowski(point, self.w), _minkowski(point, self.hw)

    def descend(self, start: np.ndarray) -> Tuple[float, np.ndarray]:
        """Local solve of min t subject to t >= u.w, t >= u.hw, a0^2 - |c|^2 >= 1.

        Returns the objective at the point rescaled back onto the feasible
        region, so the value never undercuts the true optimum.
        """
        size = len(self.labels) + 1
        constraints = [
            {"type": "ineq", "fun": lambda x: x[-1] - _minkowski(x[:size], self.w)},
            {"type": "ineq", "fun": lambda x: x[-1] - _minkowski(x[:size], self.hw)},
            {"type": "ineq", "fun": lambda x: _minkowski(x[:size], x[:size]) - 1},
        ]
        bounds = [(1.0, None)] + [(None, None)] * (size - 1) + [(None, None)]
        result = minimize(
            lambda x: x[-1],
            start,
            method="SLSQP",
            jac=lambda x: np.eye(len(x))[-1],
            bounds=bounds,
            constraints=constraints,
            options={"maxiter": 300, "ftol": 1e-14},
        )
        return min(self.evaluate(start[:size]), self.evaluate(result.x[:size]), key=lambda r: r[0])

    def evaluate(self, raw: np.ndarray) -> Tuple[float, np.ndarray]:
        """Objective at a point pushed back onto a0^2 - |c|^2 >= 1; inf if that is impossible."""
        point = np.asarray(raw, dtype=float)
        norm = _minkowski(point, point)
        if not np.all(np.isfinite(point)) or norm <= 0 or point[0] <= 0:
            return math.inf, point
        if norm < 1:
            point = point / math.sqrt(norm)
        return max(self.products(point)), point

    def random_start(self, rng: np.random.Generator) -> np.ndarray:
        spread = rng.normal(0.0, 1.0, size=len(self.labels))
        a0 = math.sqrt(1 + float(np.dot(spread, spread))) + abs(float(rng.normal()))
        point = np.concatenate([[a0], spread])
        return np.concatenate([point, [max(self.products(point))]])


def _as_vector(u: PMClass, labels: Tuple[str, ...]) -> np.ndarray:
    coefficients = u.coefficients
    return np.array([float(u.e0)] + [float(coefficients.get(k, 0)) for k in labels])


def _minkowski(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[0] - np.dot(a[1:], b[1:]))


def _search_chunk(
    problem: _SearchProblem, seed: int, chunk: int, size: int
) -> Tuple[float, int, int, np.ndarray]:
    rng = np.random.default_rng([seed, chunk])
    best: Optional[Tuple[float, int, int, np.ndarray]] = None
    for index in range(size):
        value, point = problem.descend(problem.random_start(rng))
        if best is None or value < best[0]:
            best = (value, chunk, index, point)
    assert best is not None
    return best


def horoball_witness_search(
    w: PMClass,
    hw: PMClass,
    epsilon: EpsilonLike,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> WitnessSearchReport:
    """Look for u with u.u = 1, u.e0 > 0, 0 < u.w < eps and 0 < u.hw < eps.

    Multi-start local search from e0 and seeded random points. Random starts
    come in chunks seeded by (seed, chunk index) and are evaluated in waves of
    `witness_patience` chunks, so the outcome does not depend on `workers`.
    The search stops at the first wave that finds a witness, fails to improve
    the best value or exhausts the budget.

    Args:
        w: First isotropic centre
        hw: Second isotropic centre
        epsilon: Horoball size
        budget: Largest number of local solves
        seed: Seed of the random starts
        workers: Threads evaluating the chunks of a wave

    Returns:
        WitnessSearchReport; `margin` is best value minus epsilon, positive when nothing was found
    """
    for centre in (w, hw):
        if not is_isotropic(centre) or centre.e0 <= 0:
            raise FormViolationError(f"{centre} must be isotropic with positive e0 coefficient")
    eps = float(exact_epsilon(epsilon))
    budget = budget or settings.witness_budget
    seed = settings.default_seed if seed is None else seed
    workers = workers or settings.workers
    chunk_size = settings.witness_chunk_size
    tolerance = settings.witness_tolerance

    problem = _SearchProblem.build(w, hw)
    origin = np.zeros(len(problem.labels) + 2)
    origin[0] = 1.0
    origin[-1] = max(problem.products(origin[:-1]))
    best_value, best_point = problem.descend(origin)
    restarts = 1

    chunk = 0
    while best_value >= eps - tolerance and restarts < budget:
        wave = list(range(chunk, chunk + settings.witness_patience))
        wave = wave[: max(1, (budget - restarts + chunk_size - 1) // chunk_size)]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                outcomes = list(
                    executor.map(lambda c: _search_chunk(problem, seed, c, chunk_size), wave)
                )
        else:
            outcomes = [_search_chunk(problem, seed, c, chunk_size) for c in wave]
        restarts += len(wave) * chunk_size
        chunk += len(wave)

        value, _, _, point = min(outcomes, key=lambda o: (o[0], o[1], o[2]))
        improved = value < best_value - tolerance
        if value < best_value:
            best_value, best_point = value, point
        if not improved:
            break

    found = best_value < eps - tolerance
    report: Dict[str, Any] = {
        "found": found,
        "margin": best_value - eps,
        "restarts": restarts,
        "seed": seed,
    }
    if found:
        witness, residuals = _witness(problem, best_point)
        report["witness"] = witness
        report["residuals"] = residuals
    else:
        logger.info(f"No witness for eps={eps}: best value {best_value:.6f}")
    return WitnessSearchReport(**report)


def _witness(
    problem: _SearchProblem, point: np.ndarray
) -> Tuple[Dict[str, float], Dict[str, float]]:
    """Complete the point to u with u.u = 1 through the free label."""
    norm = point[0] ** 2 - float(np.dot(point[1:], point[1:]))
    free = math.sqrt(max(0.0, norm - 1))
    witness = {"e0": float(point[0])}
    witness.update({label: float(v) for label, v in zip(problem.labels, point[1:])})
    witness[FREE_LABEL] = free
    product_w, product_hw = problem.products(point)
    residuals = {
        "self_intersection": abs(norm - free * free - 1),
        "u.w": product_w,
        "u.hw": product_hw,
    }
    return witness, residuals

