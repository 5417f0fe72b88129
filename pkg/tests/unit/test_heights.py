"""Unit tests for heights, places and linear distortion classes."""

import math
from fractions import Fraction

import pytest

from src.exceptions import InvalidParameterError, PolynomialError
from src.heights import (
    active_places,
    distortion_class_of_linear,
    gelfond_check,
    linear_height_growth,
    map_height,
    place_values,
    poly_height,
    product_formula_holds,
    verify_word_height,
    word_height_bound,
    word_height_fixtures,
)
from src.maps import compose, linear_map, parse_map
from src.polynomials import HomoPoly, parse_poly
from src.utils.matrices import diagonal


def P(text):
    return parse_poly(text, 3)


def test_poly_height():
    """Test h(x + 2y) = log 2."""
    report = poly_height(P("x + 2*y"))

    assert report.H == 2
    assert report.h == pytest.approx(math.log(2))


def test_poly_height_is_scale_invariant():
    assert poly_height(P("1/3*x + 2/3*y")).H == 2
    assert poly_height(P("-6*x - 12*y")).H == 2


def test_height_serializes_as_decimal_string():
    report = poly_height(P("x + 123456789012345678901234567890*y"))

    assert report.model_dump(mode="json")["H"] == "123456789012345678901234567890"


def test_height_of_zero_fails():
    with pytest.raises(PolynomialError):
        poly_height(HomoPoly.zero(3, 1))


def test_place_contributions_sum_to_height():
    """Test that the per-place logs add up to h for a rational vector."""
    report = poly_height(P("1/2*x + 3/4*y + 5*z"))

    assert sum(place.logval for place in report.places) == pytest.approx(report.h)


def test_diagonal_powers_have_height_two_to_the_n():
    """Test H(diag(2,1,1)^n) = 2^n."""
    heights = linear_height_growth(diagonal([2, 1, 1]), 6)

    assert heights == pytest.approx([n * math.log(2) for n in range(1, 7)])
    assert map_height(linear_map(diagonal([8, 1, 1]))).H == 8


def test_gelfond_gap():
    """Test h((x + 2y)(3x + y)) - h(x + 2y) - h(3x + y) = log(7/6)."""
    report = gelfond_check([P("x + 2*y"), P("3*x + y")])

    assert report.gap == pytest.approx(math.log(7 / 6))
    assert report.delta == 4
    assert report.holds


def test_gelfond_needs_two_factors():
    with pytest.raises(InvalidParameterError):
        gelfond_check([P("x")])


def test_place_values_and_product_formula():
    """Test the places of 12/5 and the product formula."""
    values = {place.p: place for place in place_values(Fraction(12, 5))}

    assert values["2"].valuation == 2
    assert values["3"].valuation == 1
    assert values["5"].valuation == -1
    assert sum(place.logval for place in values.values()) == pytest.approx(0.0)
    assert product_formula_holds(Fraction(-12, 5))


def test_place_values_of_zero():
    with pytest.raises(InvalidParameterError):
        place_values(Fraction(0))


def test_word_height_bound_for_sigma(sigma):
    """Test the explicit bound (3 log 2 + log 8) * 2^6 for length 3."""
    bound = word_height_bound([sigma, sigma], 3)

    assert bound == pytest.approx((3 * math.log(2) + math.log(8)) * 64)


def test_word_height_bound_uses_active_places():
    """Test that diag(2,1,1) makes the 2-adic place active."""
    generators, inverses = word_height_fixtures()["diagonal-sigma"]

    places = active_places(generators + inverses)

    assert places == {"2": 2, "inf": 2}


def test_word_height_bound_rejects_empty():
    with pytest.raises(InvalidParameterError):
        word_height_bound([], 3)


@pytest.mark.parametrize("name", ["jonquieres", "sigma", "sigma-shear", "diagonal-sigma"])
def test_verify_word_height_fixtures(name):
    """Test that sampled words never exceed the height bound."""
    generators, inverses = word_height_fixtures()[name]

    report = verify_word_height(generators, trials=40, max_len=4, inverses=inverses, seed=5)

    assert report.violations == 0
    assert report.checked + report.skipped == 40
    assert report.worst_ratio <= 1


def test_verify_word_height_is_reproducible():
    generators, inverses = word_height_fixtures()["sigma-shear"]

    first = verify_word_height(generators, trials=30, max_len=4, inverses=inverses, seed=9)
    second = verify_word_height(
        generators, trials=30, max_len=4, inverses=inverses, seed=9, workers=3
    )

    assert first == second


def test_verify_word_height_checks_inverses(jonquieres):
    f, f_inv = jonquieres

    with pytest.raises(InvalidParameterError):
        verify_word_height([f], inverses=[f])
    with pytest.raises(InvalidParameterError):
        verify_word_height([f])

    report = verify_word_height([f, f_inv], trials=10, max_len=3)
    assert report.violations == 0


@pytest.mark.parametrize(
    "matrix,expected",
    [
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], "FiniteOrder"),
        ([[0, 1, 0], [0, 0, 1], [1, 0, 0]], "FiniteOrder"),
        ([[1, 1, 0], [0, 1, 1], [0, 0, 1]], "DoublyExpDistorted"),
        ([[-1, 1, 0], [0, -1, 0], [0, 0, 1]], "DoublyExpDistorted"),
        ([[2, 0, 0], [0, 1, 0], [0, 0, 1]], "ExpDistorted"),
        ([[2, 1, 0], [1, 1, 0], [0, 0, 1]], "ExpDistorted"),
    ],
)
def test_distortion_class_of_linear(matrix, expected):
    assert distortion_class_of_linear(matrix).classification == expected


def test_identity_has_order_one():
    report = distortion_class_of_linear([[3, 0, 0], [0, 3, 0], [0, 0, 3]])

    assert report.classification == "FiniteOrder"
    assert report.order == 1


def test_distortion_class_rejects_singular():
    with pytest.raises(InvalidParameterError):
        distortion_class_of_linear([[1, 0, 0], [0, 0, 0], [0, 0, 1]])


def test_jonquieres_fixture_mixes_in_the_swap():
    """Test {J, swap} generates maps beyond the Jonquieres degree 2."""
    generators, inverses = word_height_fixtures()["jonquieres"]
    j, swap = generators

    assert swap == parse_map("[y : x : z]")
    assert inverses[1] == swap
    assert compose(compose(j, swap), j).degree == 3


def test_sigma_words_have_height_zero():
    """Test the single involution only yields words of length one, all of height 0."""
    generators, inverses = word_height_fixtures()["sigma"]

    report = verify_word_height(generators, trials=15, max_len=6, inverses=inverses, seed=2)

    assert report.checked == 15
    assert report.violations == 0
    assert report.worst_ratio == 0.0


def _random_fraction(rng):
    numerator = int(rng.integers(1, 10**6)) * int(rng.choice([-1, 1]))
    return Fraction(numerator, int(rng.integers(1, 10**6)))


def test_product_formula_on_random_rationals(rng):
    for _ in range(50):
        assert product_formula_holds(_random_fraction(rng))


def test_height_ignores_scalars_on_random_polynomials(rng, random_poly):
    """Test H(a f) = H(f) for random f and random nonzero a."""
    for _ in range(25):
        f = random_poly(rng, int(rng.integers(1, 4)))
        a = _random_fraction(rng)

        assert poly_height(f.scale(a)).H == poly_height(f).H


def test_gelfond_holds_on_random_pairs(rng, random_poly):
    for _ in range(25):
        f = random_poly(rng, int(rng.integers(1, 4)))
        g = random_poly(rng, int(rng.integers(1, 4)))

        report = gelfond_check([f, g])

        assert report.holds
        assert report.gap <= report.delta * math.log(2) + 1e-9
