"""Unit tests for verified witness words."""

import math
from unittest.mock import patch

import pytest

from src.config import settings
from src.distortion import (
    bs_witnesses,
    jordan3_template,
    monomial_translation_word,
    sl2_doubling_witness,
)
from src.distortion.witnesses import _DigitExpander
from src.exceptions import DigitExpansionError, InvalidParameterError


@pytest.mark.parametrize("n", range(0, 21, 4))
def test_sl2_doubling_witness(n):
    """Test A^n U A^-n = U^(4^n) with 2n + 1 letters."""
    report = sl2_doubling_witness(n)

    assert report.verified
    assert report.letter_length == 2 * n + 1
    assert report.target == f"U^{4**n}"


def test_sl2_witness_at_zero_is_the_letter():
    assert sl2_doubling_witness(0).word == "U"

    with pytest.raises(InvalidParameterError):
        sl2_doubling_witness(-1)


@pytest.mark.parametrize("K,n", [(2, 1), (2, 5), (2, 16), (3, 1), (3, 8)])
def test_jordan3_template(K, n):
    """Test a fixed 13-block template of 8n + 5 letters for U^(K^n)."""
    report = jordan3_template(K, n)

    assert report.verified
    assert report.letter_length == 8 * n + 5
    assert report.block_count == 13
    assert report.target == f"U^{K**n}"


def test_jordan3_template_needs_positive_n():
    with pytest.raises(InvalidParameterError):
        jordan3_template(2, 0)


def test_monomial_word_for_unit_translations():
    assert monomial_translation_word([[2, 1], [1, 1]], [1, 0]).word == "e1"
    assert monomial_translation_word([[2, 1], [1, 1]], [0, -1]).word == "e2^-1"


def test_monomial_word_is_logarithmic():
    """Test a verified word for (I, (10^6, 0)) within 6 log|v| + 20 letters."""
    report = monomial_translation_word([[2, 1], [1, 1]], [10**6, 0])

    assert report.verified
    assert report.letter_length <= 6 * math.log(10**6) + 20
    assert report.parameters["target"] == ["1000000", "0"]


@pytest.mark.parametrize(
    "matrix,target",
    [
        ([[2, 0], [0, 1]], [5, 0]),
        ([[1, 1], [0, 1]], [5, 0]),
        ([[2, 1], [1, 1]], [0, 0]),
        ([[2, 1], [1, 1]], [1, 2, 3]),
    ],
)
def test_monomial_word_rejects_bad_input(matrix, target):
    with pytest.raises(InvalidParameterError):
        monomial_translation_word(matrix, target)


def test_digit_expansion_retries_then_gives_up():
    """Test that a failing expansion is retried digit_attempts times and re-raised."""
    expander = _DigitExpander(((2, 1), (1, 1)))

    with patch.object(
        _DigitExpander, "_digits", side_effect=DigitExpansionError("no digits")
    ) as digits:
        with pytest.raises(DigitExpansionError):
            expander.expand((7, 3))

    assert digits.call_count == settings.digit_attempts
    assert expander.attempt == settings.digit_attempts


def test_bs_witnesses():
    """Test t^n x t^-n = x^(k^n) and its conjugate for y^(l^(k^n))."""
    x_report, y_report = bs_witnesses(2, 2, 3)

    assert x_report.kind == "bs-x"
    assert x_report.target == "x^8"
    assert x_report.letter_length == 7
    assert y_report.kind == "bs-y"
    assert y_report.verified
    assert y_report.letter_length == 4 * 3 + 3
    assert y_report.target == "y^(2^8)"


def test_bs_witness_at_zero():
    _, y_report = bs_witnesses(3, 2, 0)

    assert y_report.word == "X Y X^-1"


@pytest.mark.parametrize("k,ell,n", [(1, 2, 2), (2, 1, 2), (2, 2, -1)])
def test_bs_witnesses_reject_bad_parameters(k, ell, n):
    with pytest.raises(InvalidParameterError):
        bs_witnesses(k, ell, n)


def test_digits_prefer_the_smallest_residual():
    """Test ties between equally cheap digits go to the smallest leftover part."""
    word = _DigitExpander(((2, 1), (1, 1))).expand((10**5, 3))
    m_letters = sum(abs(e) for name, e in word.blocks if name == "M")
    digit_letters = word.letter_length - m_letters

    assert digit_letters <= 0.45 * m_letters + 4
