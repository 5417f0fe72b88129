"""Unit tests for the piecewise-power homeomorphism model."""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.distortion import HomeoGroup, homeo_growth_check, parse_word, random_homeo_words
from src.distortion.witnesses import bs_witnesses
from src.exceptions import InvalidParameterError


@pytest.fixture
def group():
    return HomeoGroup(2, 3)


def test_letters_act_on_the_line(group):
    """Test Y^m(0) = m, XY(0) = l and TY(0) = 1; the rightmost letter acts first."""
    assert group.value_at(parse_word("Y^5"), 0) == 5
    assert group.value_at(parse_word("X Y"), 0) == 3
    assert group.value_at(parse_word("Y X"), 0) == 1
    assert group.value_at(parse_word("T Y"), 0) == 1
    assert group.value_at(parse_word("T"), Fraction(-3, 2)) == Fraction(-9, 4)


def test_inverse_power_leaves_exact_values(group):
    assert group.value_at(parse_word("T^-1"), 2) is None
    assert group.value_at(parse_word("T^-1"), Fraction(9, 4)) == Fraction(3, 2)
    assert float(group.value_at_mp(parse_word("T^-1"), 2, 30)) == pytest.approx(math.sqrt(2))


def test_relations_are_never_falsified():
    """Test T X T^-1 = X^k at every sample point where both sides are exact."""
    group = HomeoGroup(2, 2)

    assert group.distinguishes(parse_word("X Y"), parse_word("Y X"))
    assert not group.distinguishes(parse_word("T X T^-1"), parse_word("X^2"))
    assert not group.distinguishes(parse_word("X Y X^-1"), parse_word("Y^2"))


def test_homeo_group_has_no_canonical_form(group):
    with pytest.raises(InvalidParameterError):
        group.canonical(parse_word("T"))
    with pytest.raises(InvalidParameterError):
        HomeoGroup(1, 2)


def test_multiply_merges_blocks(group):
    product = group.multiply(parse_word("T Y^2"), parse_word("Y^-2 X"))

    assert product.render() == "T X"


def test_random_homeo_words_are_seeded():
    words = random_homeo_words(np.random.default_rng(5), 30, 6)
    again = random_homeo_words(np.random.default_rng(5), 30, 6)

    assert words == again
    assert all(1 <= word.letter_length <= 6 for word in words)

    with pytest.raises(InvalidParameterError):
        random_homeo_words(np.random.default_rng(5), 3, 0)


def test_homeo_growth_check():
    """Test |w(0)| <= (2l)^(k^|w|) over random words."""
    words = random_homeo_words(np.random.default_rng(11), 40, 5)

    report = homeo_growth_check(2, 2, words)

    assert report.violations == 0
    assert report.checked + report.skipped == 40
    assert report.max_ratio <= 1


def test_bs_y_witness_value():
    """Test the conjugate word sends 0 to l^(k^n)."""
    _, y_report = bs_witnesses(2, 2, 2)
    word = parse_word(y_report.word)

    assert HomeoGroup(2, 2).value_at(word, 0) == 16
