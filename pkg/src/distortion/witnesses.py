"""Explicit short words for large powers, each verified by exact evaluation."""

import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

import mpmath
import numpy as np
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from src.config import settings
from src.distortion.groups import (
    GroupSpec,
    Word,
    baumslag_solitar,
    jordan3_group,
    monomial_affine_group,
    sl2_doubling_group,
)
from src.distortion.homeo import HomeoGroup
from src.exceptions import DigitExpansionError, InvalidParameterError, WitnessVerificationError
from src.reports.schemas import WitnessReport
from src.utils.matrices import Matrix, inverse, mat_vec, to_int_matrix

logger = logging.getLogger(__name__)


def _merge(blocks: Sequence[Tuple[str, int]]) -> Word:
    """Merge adjacent blocks of the same letter and drop zero exponents."""
    merged: List[Tuple[str, int]] = []
    for name, exponent in blocks:
        if not exponent:
            continue
        if merged and merged[-1][0] == name:
            total = merged.pop()[1] + exponent
            if total:
                merged.append((name, total))
        else:
            merged.append((name, exponent))
    return Word(tuple(merged))


def _verify(
    group: GroupSpec,
    word: Word,
    target: Any,
    kind: str,
    target_text: str,
    parameters: Dict[str, Any],
) -> WitnessReport:
    if not group.equal(group.evaluate(word), target):
        logger.error(f"{kind} witness {word} does not evaluate to {target_text}")
        raise WitnessVerificationError(f"{kind} witness does not evaluate to {target_text}")
    return WitnessReport(
        kind=kind,
        word=word.render(),
        letter_length=word.letter_length,
        block_count=word.block_count,
        verified=True,
        target=target_text,
        parameters=parameters,
    )


def sl2_doubling_witness(n: int) -> WitnessReport:
    """A^n U A^-n = U^(4^n) in SL_2(Q), a word of 2n + 1 letters."""
    if n < 0:
        raise InvalidParameterError(f"n must be non-negative, got {n}")
    group = sl2_doubling_group()
    word = Word.of(("A", n), ("U", 1), ("A", -n))
    target = group.power(group.letter("U").element, 4**n)
    return _verify(group, word, target, "sl2", f"U^{4**n}", {"n": n})


def jordan3_word(n: int) -> Word:
    """Fixed template over A..E, U with 13 blocks and 8n + 5 letters.

    With N = K^n: C^n D^-1 E C^-n = [N, 0, 0], A^n B^-1 A^-n = [0, N, 0] and
    C^n (C^n E^-1 C^-n E^-1) C^-n = [0, 0, -N(N+1)/2] in Heisenberg coordinates,
    so the product is [N, N, N(N-1)/2] = U^N.
    """
    return Word.of(
        ("C", n),
        ("D", -1),
        ("E", 1),
        ("C", -n),
        ("A", n),
        ("B", -1),
        ("A", -n),
        ("C", n),
        ("C", n),
        ("E", -1),
        ("C", -n),
        ("E", -1),
        ("C", -n),
    )


def jordan3_template(K: int, n: int) -> WitnessReport:
    """Word for U^(K^n) with a bounded number of blocks, U the 3 x 3 Jordan block.

    Raises:
        WitnessVerificationError: If the template does not evaluate to U^(K^n)
    """
    if n < 1:
        raise InvalidParameterError(f"n must be positive, got {n}")
    group = jordan3_group(K)
    N = K**n
    u = group.letter("U").element
    # U^N = [[1, N, N(N-1)/2], [0, 1, N], [0, 0, 1]]
    target = tuple(
        tuple(Fraction(v) for v in row)
        for row in ((1, N, N * (N - 1) // 2), (0, 1, N), (0, 0, 1))
    )
    if u != tuple(tuple(Fraction(v) for v in row) for row in ((1, 1, 0), (0, 1, 1), (0, 0, 1))):
        raise WitnessVerificationError("jordan3 alphabet does not contain the Jordan block")
    return _verify(group, jordan3_word(n), target, "jordan3", f"U^{N}", {"K": K, "n": n})


class _DigitExpander:
    """Greedy base-M expansion of an integer vector along stable and unstable parts.

    Each call to `expand` uses a larger digit box and a looser bound on the
    growing projection; tenacity retries on DigitExpansionError.
    """

    def __init__(self, matrix: Matrix):
        self.matrix = matrix
        self.inverse = inverse(matrix)
        eigenvalues, vectors = np.linalg.eig(np.asarray(matrix, dtype=float))
        moduli = np.abs(eigenvalues)
        if np.any(np.isclose(moduli, 1.0, atol=1e-9)):
            raise InvalidParameterError("matrix has an eigenvalue of modulus 1")
        if not np.any(moduli > 1):
            raise InvalidParameterError("matrix has spectral radius at most 1")
        left = np.linalg.inv(vectors)
        self.unstable = np.real(vectors @ np.diag((moduli > 1).astype(float)) @ left)
        self.stable = np.real(vectors @ np.diag((moduli < 1).astype(float)) @ left)
        self.growth = float(min(moduli[moduli > 1].min(), 1 / moduli[moduli < 1].max()))
        self.attempt = 0

    def _digits(
        self, x: Tuple[int, ...], step: Matrix, small: np.ndarray, big: np.ndarray
    ) -> List[Tuple[int, ...]]:
        """Digits d_0..d_K with x = sum step^j d_j; `small` is the part step^-1 expands."""
        radius = settings.digit_radius + self.attempt - 1
        bound = settings.digit_bound * self.attempt
        size = len(x)
        box = [tuple(int(v) for v in d) for d in np.ndindex(*([2 * radius + 1] * size))]
        candidates = sorted(
            (tuple(v - radius for v in d) for d in box), key=lambda d: sum(abs(v) for v in d)
        )
        step_inverse = inverse(step)
        norm = float(np.abs(np.asarray(x, dtype=float)).sum())
        max_steps = int(4 * math.log(2 + norm) / math.log(self.growth)) + 64

        digits = []
        for _ in range(max_steps):
            if max(abs(v) for v in x) <= radius:
                digits.append(x)
                return digits
            best = None
            fallback = None
            for delta in candidates:
                shifted = [a - b for a, b in zip(x, delta)]
                y = tuple(int(v) for v in mat_vec(step_inverse, shifted))
                y_array = np.asarray(y, dtype=float)
                small_norm = float(np.linalg.norm(small @ y_array))
                big_norm = float(np.linalg.norm(big @ y_array))
                cost = sum(abs(v) for v in delta)
                if small_norm <= bound:
                    key = (cost, small_norm, big_norm)
                    if best is None or key < best[0]:
                        best = (key, delta, y)
                if fallback is None or small_norm < fallback[0]:
                    fallback = (small_norm, delta, y)
            _, delta, y = best if best is not None else fallback
            digits.append(delta)
            x = y
        raise DigitExpansionError(
            f"digit expansion did not terminate in {max_steps} steps "
            f"(radius {radius}, bound {bound})"
        )

    @retry(
        stop=stop_after_attempt(settings.digit_attempts),
        retry=retry_if_exception_type(DigitExpansionError),
        reraise=True,
    )
    def expand(self, v: Sequence[int]) -> Word:
        self.attempt += 1
        if self.attempt > 1:
            logger.info(f"Retrying digit expansion with a larger digit box, attempt {self.attempt}")
        vector = np.asarray(v, dtype=float)
        a = tuple(int(round(c)) for c in self.unstable @ vector)
        b = tuple(int(x) - y for x, y in zip(v, a))

        blocks: List[Tuple[str, int]] = []
        expanding = self._digits(a, self.matrix, self.stable, self.unstable)
        for index, digit in enumerate(expanding):
            if index:
                blocks.append(("M", 1))
            blocks.extend(_translation(digit))
        blocks.append(("M", -(len(expanding) - 1)))

        contracting = self._digits(b, self.inverse, self.unstable, self.stable)
        for index, digit in enumerate(contracting):
            if index:
                blocks.append(("M", -1))
            blocks.extend(_translation(digit))
        blocks.append(("M", len(contracting) - 1))
        return _merge(blocks)


def _translation(digit: Sequence[int]) -> List[Tuple[str, int]]:
    return [(f"e{j + 1}", int(c)) for j, c in enumerate(digit) if c]


def monomial_translation_word(
    matrix: Sequence[Sequence[Any]], target: Sequence[int]
) -> WitnessReport:
    """Word over M and unit translations equal to the translation (I, v).

    v = sum M^j d_j + sum M^-j d'_j with digits from a small box, so the word
    has O(log |v|) letters.

    Raises:
        InvalidParameterError: If M is not hyperbolic, not unimodular or v = 0
        DigitExpansionError: If no attempt produced a terminating expansion
        WitnessVerificationError: If the word does not evaluate to (I, v)
    """
    m = to_int_matrix(matrix)
    v = tuple(int(x) for x in target)
    if len(v) != len(m):
        raise InvalidParameterError(f"target has {len(v)} entries, matrix is {len(m)} x {len(m)}")
    if not any(v):
        raise InvalidParameterError("target must be nonzero")
    group = monomial_affine_group(m)
    if any(c.denominator != 1 for row in inverse(m) for c in row):
        raise InvalidParameterError("monomial matrix must be unimodular")

    word = _DigitExpander(m).expand(v)
    target_element = (group.identity()[0], v)
    parameters = {"matrix": [list(row) for row in m], "target": [str(x) for x in v]}
    return _verify(group, word, target_element, "monomial", f"(I, {list(v)})", parameters)


def bs_witnesses(k: int, ell: int, n: int) -> List[WitnessReport]:
    """t^n x t^-n = x^(k^n) in BS(1,k) and its conjugate word for y^(l^(k^n)).

    The first is checked exactly in the matrix model. The second is checked in
    the homeomorphism model: exactly at 0 and at high precision at a few other
    points, against s + l^(k^n).
    """
    if k < 2 or ell < 2 or n < 0:
        raise InvalidParameterError(f"need k, l >= 2 and n >= 0, got k={k}, l={ell}, n={n}")
    N = k**n
    matrix_group = baumslag_solitar(k)
    x_word = Word.of(("t", n), ("x", 1), ("t", -n))
    x_target = matrix_group.power(matrix_group.letter("x").element, N)
    parameters = {"k": k, "ell": ell, "n": n}
    x_report = _verify(matrix_group, x_word, x_target, "bs-x", f"x^{N}", parameters)

    homeo = HomeoGroup(k, ell)
    y_word = _merge(
        [("T", n), ("X", 1), ("T", -n), ("Y", 1), ("T", n), ("X", -1), ("T", -n)]
    )
    shift = ell**N
    if homeo.value_at(y_word, 0) != shift:
        raise WitnessVerificationError(f"bs-y witness does not send 0 to {ell}^{N}")
    digits = int(N * math.log10(ell) + math.log10(N + 1)) + settings.homeo_extra_digits
    with mpmath.workdps(digits):
        tolerance = mpmath.mpf(10) ** (-(settings.homeo_extra_digits // 2))
        for point in (1, -1, mpmath.mpf(1) / 2, 3):
            value = homeo.value_at_mp(y_word, point, digits)
            if abs(value - (point + shift)) > tolerance:
                message = f"bs-y witness disagrees with y^({ell}^{N}) at {mpmath.nstr(point, 5)}"
                raise WitnessVerificationError(message)
    y_report = WitnessReport(
        kind="bs-y",
        word=y_word.render(),
        letter_length=y_word.letter_length,
        block_count=y_word.block_count,
        verified=True,
        target=f"y^({ell}^{N})",
        parameters=parameters,
    )
    return [x_report, y_report]


WITNESS_KINDS = ("sl2", "jordan3", "monomial", "bs")
