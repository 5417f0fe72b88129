"""Piecewise-power homeomorphisms of the line generating a double Baumslag-Solitar group.

T(s) = sign(s)|s|^k, X(s) = l*s and Y(s) = s + 1 satisfy T X T^-1 = X^k and
X Y X^-1 = Y^l. Words act as compositions: the rightmost letter is applied
first. Only falsification is supported; equality of words is never asserted.
"""

import logging
import math
from fractions import Fraction
from typing import Any, Hashable, List, Optional, Sequence, Union

import mpmath
import numpy as np
from sympy import integer_nthroot

from src.config import settings
from src.distortion.groups import GroupSpec, Letter, Word
from src.exceptions import InvalidParameterError
from src.reports.schemas import HomeoGrowthReport

logger = logging.getLogger(__name__)

HOMEO_LETTERS = ("T", "X", "Y")


def _exact_root(value: int, k: int) -> Optional[int]:
    root, exact = integer_nthroot(value, k)
    return int(root) if exact else None


class HomeoGroup(GroupSpec):
    """Falsifier domain: elements are words, compared only through evaluations."""

    exact = False

    def __init__(self, k: int = 2, ell: int = 2):
        if k < 2 or ell < 2:
            raise InvalidParameterError(f"need k, l >= 2, got k={k}, l={ell}")
        self.k = k
        self.ell = ell
        letters = [Letter(name, Word.of((name, 1)), Word.of((name, -1))) for name in HOMEO_LETTERS]
        super().__init__(f"BS(1,{k})*BS(1,{ell})", letters)

    def identity(self) -> Word:
        return Word()

    def multiply(self, a: Word, b: Word) -> Word:
        blocks = list(a.blocks)
        for name, exponent in b.blocks:
            if blocks and blocks[-1][0] == name:
                merged = blocks[-1][1] + exponent
                blocks.pop()
                if merged:
                    blocks.append((name, merged))
            else:
                blocks.append((name, exponent))
        return Word(tuple(blocks))

    def canonical(self, a: Word) -> Hashable:
        raise InvalidParameterError("homeomorphism words have no canonical form")

    def size(self, a: Word) -> int:
        return a.letter_length

    def _exact_step(self, name: str, s: Fraction) -> Optional[Fraction]:
        if name == "Y":
            return s + 1
        if name == "Y-":
            return s - 1
        if name == "X":
            return s * self.ell
        if name == "X-":
            return s / self.ell
        sign = 1 if s >= 0 else -1
        if name == "T":
            bits = max(abs(s.numerator).bit_length(), s.denominator.bit_length()) * self.k
            if bits > settings.homeo_max_bits:
                return None
            return sign * abs(s) ** self.k
        numerator = _exact_root(abs(s.numerator), self.k)
        denominator = _exact_root(s.denominator, self.k)
        if numerator is None or denominator is None:
            return None
        return Fraction(sign * numerator, denominator)

    def value_at(self, word: Word, s: Union[int, Fraction]) -> Optional[Fraction]:
        """Exact w(s), or None when a T^-1 step meets a non-k-th power."""
        value = Fraction(s)
        for name, exponent in reversed(word.blocks):
            step = name if exponent > 0 else f"{name}-"
            for _ in range(abs(exponent)):
                stepped = self._exact_step(step, value)
                if stepped is None:
                    return None
                value = stepped
        return value

    def value_at_mp(self, word: Word, s: Any, dps: int) -> Any:
        """w(s) in mpmath at `dps` significant digits."""
        with mpmath.workdps(dps):
            value = mpmath.mpf(s)
            for name, exponent in reversed(word.blocks):
                if name == "Y":
                    value = value + exponent
                elif name == "X":
                    value = value * mpmath.power(self.ell, exponent)
                else:
                    power = mpmath.power(self.k, exponent)
                    value = mpmath.sign(value) * mpmath.power(abs(value), power)
            return +value

    def distinguishes(
        self, a: Word, b: Word, points: Sequence[Any] = (0, 1, -1, Fraction(1, 2), 3)
    ) -> bool:
        """True when a and b differ at some sample point; False proves nothing."""
        for point in points:
            left, right = self.value_at(a, point), self.value_at(b, point)
            if left is not None and right is not None and left != right:
                return True
        return False


def random_homeo_words(rng: np.random.Generator, count: int, max_len: int) -> List[Word]:
    """Freely reduced words over T, X, Y and their inverses with 1..max_len letters."""
    if count < 0 or max_len < 1:
        raise InvalidParameterError(f"need count >= 0 and max_len >= 1, got {count}, {max_len}")
    group = HomeoGroup()
    letters = [(name, sign) for name in HOMEO_LETTERS for sign in (1, -1)]
    words = []
    for _ in range(count):
        length = int(rng.integers(1, max_len + 1))
        word = Word()
        previous = None
        for _ in range(length):
            choices = letters
            if previous:
                choices = [pair for pair in letters if pair != (previous[0], -previous[1])]
            previous = choices[int(rng.integers(len(choices)))]
            word = group.multiply(word, Word.of(previous))
        words.append(word)
    return words


def homeo_growth_check(k: int, ell: int, words: Sequence[Word]) -> HomeoGrowthReport:
    """Check |w(0)| <= (2l)^(k^|w|) in log form for each word.

    Words leaving the exactly representable values are skipped and counted.
    """
    group = HomeoGroup(k, ell)
    checked = skipped = violations = 0
    max_ratio = 0.0
    log_base = math.log(2 * ell)
    for word in words:
        value = group.value_at(word, 0)
        if value is None:
            skipped += 1
            logger.warning(f"Skipping {word}: value at 0 is not exactly representable")
            continue
        checked += 1
        if abs(value) <= 1:
            continue
        log_value = math.log(abs(value.numerator)) - math.log(value.denominator)
        bound = float(k**word.letter_length) * log_base
        ratio = log_value / bound
        max_ratio = max(max_ratio, ratio)
        if ratio > 1:
            violations += 1
            logger.error(f"Growth bound violated by {word}: log|w(0)| = {log_value:.3f}")
    return HomeoGrowthReport(
        k=k,
        ell=ell,
        checked=checked,
        skipped=skipped,
        violations=violations,
        max_ratio=max_ratio,
    )
