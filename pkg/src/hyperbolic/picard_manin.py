"""Finite-support classes in the Picard-Manin space and their intersection form.

A class is e0 * e_0 + sum exc[label] * e_label, with e_0.e_0 = 1, e_l.e_l = -1
and all other products zero. Coefficients are stored with their sign, so the
class of a line through q1 is e_0 - e_q1, i.e. exc {"q1": -1}.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from src.exceptions import FormViolationError, InvalidParameterError
from src.reports.schemas import PMClassModel
from src.utils.matrices import to_fraction

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
MARKED_LABELS = tuple(f"q{i}" for i in range(1, 10))


@dataclass(frozen=True)
class PMClass:
    """Exact class with a sorted, zero-free exceptional part."""

    e0: Fraction
    exc: Tuple[Tuple[str, Fraction], ...] = ()

    @classmethod
    def from_dict(cls, e0: Scalar, exc: Optional[Mapping[str, Scalar]] = None) -> "PMClass":
        cleaned = {str(k): to_fraction(v) for k, v in (exc or {}).items()}
        return cls(
            e0=to_fraction(e0),
            exc=tuple(sorted((k, v) for k, v in cleaned.items() if v)),
        )

    @classmethod
    def from_model(cls, model: PMClassModel) -> "PMClass":
        return cls.from_dict(model.e0, model.exc)

    @property
    def coefficients(self) -> Dict[str, Fraction]:
        return dict(self.exc)

    @property
    def labels(self) -> List[str]:
        return [label for label, _ in self.exc]

    def coefficient(self, label: str) -> Fraction:
        return self.coefficients.get(label, Fraction(0))

    def multiplicity(self, label: str) -> Fraction:
        """r_label in the writing m e_0 - sum r_i e_i."""
        return -self.coefficient(label)

    def __add__(self, other: "PMClass") -> "PMClass":
        total = self.coefficients
        for label, value in other.exc:
            total[label] = total.get(label, Fraction(0)) + value
        return PMClass.from_dict(self.e0 + other.e0, total)

    def scale(self, factor: Scalar) -> "PMClass":
        factor = Fraction(factor)
        return PMClass.from_dict(self.e0 * factor, {k: v * factor for k, v in self.exc})

    def __neg__(self) -> "PMClass":
        return self.scale(-1)

    def __sub__(self, other: "PMClass") -> "PMClass":
        return self + (-other)

    def dot(self, other: "PMClass") -> Fraction:
        return intersection(self, other)

    def to_model(self) -> PMClassModel:
        return PMClassModel(e0=str(self.e0), exc={k: str(v) for k, v in self.exc})

    def __str__(self) -> str:
        pieces = [f"{self.e0}*e0"]
        for label, value in self.exc:
            sign = "-" if value < 0 else "+"
            pieces.append(f" {sign} {abs(value)}*e({label})")
        return "".join(pieces)


def intersection(u: PMClass, v: PMClass) -> Fraction:
    """u.v = u0 v0 - sum over shared labels of u_l v_l."""
    v_coefficients = v.coefficients
    shared = sum(
        value * v_coefficients[label] for label, value in u.exc if label in v_coefficients
    )
    return u.e0 * v.e0 - shared


def e0() -> PMClass:
    """Pull-back of the class of a line."""
    return PMClass.from_dict(1)


def exceptional(label: str) -> PMClass:
    """Class of the exceptional divisor over the point `label`."""
    return PMClass.from_dict(0, {label: 1})


def w_J() -> PMClass:
    """Pencil of lines through q1."""
    return PMClass.from_dict(1, {"q1": -1})


def w_H() -> PMClass:
    """Pencil of cubics through q1..q9."""
    return PMClass.from_dict(3, {label: -1 for label in MARKED_LABELS})


def halphen_class(level: int) -> PMClass:
    """c = 3l e0 - l sum_{j<=9} e(q_j), the class of a Halphen pencil of degree 3l."""
    if level < 1:
        raise InvalidParameterError(f"Halphen index must be at least 1, got {level}")
    return w_H().scale(level)


def jonquieres_pushforward(d: int) -> Tuple[PMClass, PMClass]:
    """Images of e0 and e(q1) under a Jonquieres map of degree d with 2d-1 base points."""
    if d < 1:
        raise InvalidParameterError(f"degree must be at least 1, got {d}")
    others = {f"q{i}": -1 for i in range(2, 2 * d)}
    img_e0 = PMClass.from_dict(d, {"q1": -(d - 1), **others})
    img_e1 = PMClass.from_dict(d - 1, {"q1": -(d - 2), **others})
    return img_e0, img_e1


def is_isotropic(u: PMClass) -> bool:
    return intersection(u, u) == 0


def on_hyperboloid(u: PMClass) -> bool:
    """u.u = 1 on the sheet containing e0."""
    return intersection(u, u) == 1 and u.e0 > 0


def require_hyperboloid(u: PMClass) -> None:
    if not on_hyperboloid(u):
        raise FormViolationError(f"{u} is not on the positive sheet of the hyperboloid")


def random_isotropic_vector(
    rng: np.random.Generator, family: str = "J", max_m: int = 200, size: int = 3
) -> PMClass:
    """Integer isotropic class m e0 - sum r_i e_i, different from the family's w.

    Built from u in Z^size through the identity
    (sum u_i^2)^2 = (u_0^2 - sum_{i>0} u_i^2)^2 + sum_{i>0} (2 u_0 u_i)^2;
    multiplicities go to the family's marked labels first, then to fresh ones.
    """
    if family not in ("J", "H"):
        raise InvalidParameterError(f"unknown family '{family}'")
    if size < 2 or max_m < 2:
        raise InvalidParameterError("need size >= 2 and max_m >= 2")
    marked = ["q1"] if family == "J" else list(MARKED_LABELS)
    labels = marked + [f"p{i}" for i in range(1, size + 1)]
    reference = w_J() if family == "J" else w_H()
    bound = max(1, isqrt(max_m // size))

    while True:
        u = [int(v) for v in rng.integers(-bound, bound + 1, size=size)]
        m = sum(v * v for v in u)
        if m == 0 or m > max_m:
            continue
        head = u[0] * u[0] - sum(v * v for v in u[1:])
        multiplicities = [abs(head)] + [2 * abs(u[0] * v) for v in u[1:]]
        candidate = PMClass.from_dict(m, {lab: -r for lab, r in zip(labels, multiplicities)})
        # Proportional to the reference class means the pair is degenerate
        if intersection(candidate, reference) != 0:
            return candidate
