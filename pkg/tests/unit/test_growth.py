"""Unit tests for degree sequences and growth classification."""

import math

import pytest

from src.exceptions import InsufficientDataError, InvalidParameterError
from src.maps import (
    builtin_family,
    check_sqrt_subadditivity,
    classify_growth,
    dynamical_degree_estimate,
    identity_map,
    iterate_degrees,
    parse_map,
    sqrt_slope_estimate,
)
from src.reports.schemas import DegreeSequence


def sequence(degrees, dim=2):
    return DegreeSequence(map="synthetic", source="synthetic", degrees=degrees, dim=dim)


def test_jonquieres_degrees_grow_linearly(jonquieres):
    """Test deg (x, x^n y) = n + 1 and the Undistorted verdict."""
    f, _ = jonquieres

    seq = iterate_degrees(f, 30)
    verdict = classify_growth(seq)

    assert seq.degrees == list(range(2, 32))
    assert not seq.truncated
    assert verdict.growth_class == "Linear"
    assert verdict.slope == pytest.approx(1.0)
    assert verdict.distortion_consequence == "Undistorted"


def test_henon_degrees_double(henon):
    """Test deg f^n = 2^n for the quadratic Henon map."""
    seq = iterate_degrees(henon, 6)

    assert seq.degrees == [2**n for n in range(1, 7)]


def test_line_method_matches_exact(henon, jonquieres):
    """Test that restriction to random lines gives the exact degrees."""
    f, _ = jonquieres

    assert iterate_degrees(henon, 6, method="line", seed=7).degrees == [2, 4, 8, 16, 32, 64]
    assert iterate_degrees(f, 12, method="line", seed=7).degrees == list(range(2, 14))


def test_line_method_is_seeded(henon):
    first = iterate_degrees(henon, 5, method="line", seed=11)
    second = iterate_degrees(henon, 5, method="line", seed=11)

    assert first == second


def test_monomial_dynamical_degree():
    """Test that [[2,1],[1,1]] has dynamical degree close to (3 + sqrt 5)/2."""
    f = builtin_family("monomial", {"matrix": [[2, 1], [1, 1]]})

    seq = iterate_degrees(f, 12, degree_cap=10**7)
    estimate = dynamical_degree_estimate(seq)
    verdict = classify_growth(seq)

    golden_square = (3 + math.sqrt(5)) / 2
    assert estimate.estimate == pytest.approx(golden_square, rel=0.05)
    assert estimate.last_ratio == pytest.approx(golden_square, rel=1e-3)
    assert verdict.growth_class == "Exponential"
    assert verdict.distortion_consequence == "Undistorted"


def test_degree_cap_truncates(henon):
    """Test that exceeding the degree cap stops iteration without failing."""
    seq = iterate_degrees(henon, 10, degree_cap=20)

    assert seq.truncated
    assert seq.degrees == [2, 4, 8, 16, 32]
    assert "cap" in seq.truncation_reason


def test_iterate_degrees_rejects_bad_arguments(sigma):
    with pytest.raises(InvalidParameterError):
        iterate_degrees(sigma, 0)
    with pytest.raises(InvalidParameterError):
        iterate_degrees(sigma, 3, method="guess")


def test_sigma_and_linear_maps_are_bounded(sigma):
    assert classify_growth(iterate_degrees(sigma, 10)).growth_class == "Bounded"
    assert classify_growth(iterate_degrees(identity_map(2), 10)).growth_class == "Bounded"


def test_linear_growth_in_dimension_three():
    """Test that polynomial growth on P^3 only gives the weaker consequence."""
    f = parse_map("[x0*x3 : x0*x1 : x2*x3 : x3^2]")

    seq = iterate_degrees(f, 10)
    verdict = classify_growth(seq)

    assert seq.degrees == list(range(2, 12))
    assert verdict.growth_class == "Linear"
    assert verdict.distortion_consequence == "AtMostExponential"


def test_quadratic_sequence():
    """Test n^2 + 1 is Quadratic with coefficient 1."""
    verdict = classify_growth(sequence([n * n + 1 for n in range(1, 9)]))

    assert verdict.growth_class == "Quadratic"
    assert verdict.quadratic_coefficient == pytest.approx(1.0)
    assert verdict.distortion_consequence == "Undistorted"


def test_exponential_sequence():
    verdict = classify_growth(sequence([2**n for n in range(1, 11)]))

    assert verdict.growth_class == "Exponential"
    assert verdict.ratio == pytest.approx(2.0)


def test_short_sequence_is_inconclusive():
    verdict = classify_growth(sequence([2, 3, 4, 5, 6, 7, 8]))

    assert verdict.growth_class == "Inconclusive"
    assert verdict.distortion_consequence == "NoVerdict"


def test_degree_sequence_rejects_nonpositive():
    with pytest.raises(ValueError):
        sequence([1, 0, 2])


def test_dynamical_degree_needs_four_terms():
    with pytest.raises(InsufficientDataError):
        dynamical_degree_estimate(sequence([2, 4, 8]))


def test_sqrt_subadditivity():
    """Test sqrt(d_(n+m)) <= sqrt(d_n) + sqrt(d_m) with equality for n^2."""
    assert check_sqrt_subadditivity([n * n for n in range(1, 10)]) == []
    assert check_sqrt_subadditivity([1, 1, 100]) == [(1, 2), (2, 1)]


def test_sqrt_slope():
    assert sqrt_slope_estimate([n * n for n in range(1, 10)]) == pytest.approx(1.0)

    with pytest.raises(InsufficientDataError):
        sqrt_slope_estimate([4])
