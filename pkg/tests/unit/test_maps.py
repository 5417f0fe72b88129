"""Unit tests for birational maps and their named families."""

from fractions import Fraction

import pytest

from src.exceptions import DegenerateCompositionError, InvalidParameterError, PolynomialError
from src.maps import (
    builtin_family,
    compose,
    format_map,
    henon_map,
    identity_map,
    is_identity,
    iterate,
    linear_map,
    monomial_map,
    parse_map,
    power_by_squaring,
)
from src.utils.matrices import diagonal


def test_sigma_is_an_involution(sigma):
    """Test sigma o sigma = id after removing the common factor xyz."""
    assert is_identity(compose(sigma, sigma))


def test_jonquieres_inverse(jonquieres):
    """Test (x, xy) composed with (x, y/x) in both orders."""
    f, f_inv = jonquieres

    assert is_identity(compose(f, f_inv))
    assert is_identity(compose(f_inv, f))


def test_parse_normalizes_scale_and_common_factor():
    """Test that scalar multiples and common factors give the same map."""
    plain = parse_map("[x*z : x*y : z^2]")

    assert parse_map("[2*x*z : 2*x*y : 2*z^2]") == plain
    assert parse_map("[-x*z : -x*y : -z^2]") == plain
    assert is_identity(parse_map("[x^2 : x*y : x*z]"))


def test_format_sigma(sigma):
    assert format_map(sigma) == "[y*z : x*z : x*y]"
    assert parse_map(format_map(sigma)) == sigma


@pytest.mark.parametrize(
    "text",
    ["x : y : z", "[x : y^2 : z]", "[x]", "[x : : z]"],
)
def test_parse_map_rejects_bad_input(text):
    with pytest.raises(PolynomialError):
        parse_map(text)


def test_parse_zero_map():
    with pytest.raises(DegenerateCompositionError):
        parse_map("[0 : 0 : 0]")


def test_degenerate_composition():
    """Test that a map vanishing on the image of another cannot be composed."""
    f = parse_map("[x - y : y - z : x - z]")
    g = parse_map("[x : x : x]")

    with pytest.raises(DegenerateCompositionError):
        compose(f, g)


def test_compose_dimension_mismatch():
    with pytest.raises(PolynomialError):
        compose(identity_map(2), identity_map(3))


def test_degree_is_submultiplicative(sigma, henon):
    composed = compose(henon, sigma)

    assert composed.degree <= henon.degree * sigma.degree


def test_iterate_agrees_with_power_by_squaring(jonquieres, henon):
    """Test that both association orders give the same iterate."""
    f, _ = jonquieres

    assert iterate(f, 5) == power_by_squaring(f, 5)
    assert iterate(henon, 3) == power_by_squaring(henon, 3)
    assert iterate(f, 0) == identity_map(2)


def test_iterate_rejects_negative(sigma):
    with pytest.raises(PolynomialError):
        iterate(sigma, -1)


def test_monomial_map_row_convention():
    """Test [[1,0],[1,1]] is (x, y) -> (x, xy)."""
    assert monomial_map([[1, 0], [1, 1]]) == parse_map("[x*z : x*y : z^2]")


def test_monomial_map_clears_negative_exponents():
    """Test [[-1,0],[0,-1]] is the standard involution (1/x, 1/y)."""
    assert monomial_map([[-1, 0], [0, -1]]) == parse_map("[y*z : x*z : x*y]")


def test_monomial_map_needs_unimodular():
    with pytest.raises(InvalidParameterError):
        monomial_map([[2, 0], [0, 1]])


def test_henon_family_matches_text(henon):
    assert henon_map([Fraction(0), Fraction(0), Fraction(1)]) == henon


def test_henon_rejects_low_degree():
    with pytest.raises(InvalidParameterError):
        henon_map([Fraction(0), Fraction(1)])


def test_linear_map_needs_invertible():
    with pytest.raises(InvalidParameterError):
        linear_map(diagonal([1, 0, 1]))


@pytest.mark.parametrize(
    "name,params,expected",
    [
        ("identity", {"dim": 2}, "[x : y : z]"),
        ("sigma", {}, "[y*z : x*z : x*y]"),
        ("diagonal", {"entries": "[2,1,1]"}, "[2*x : y : z]"),
        ("jonquieres", {"Q": "x"}, "[x*z : x*y : z^2]"),
        ("jonquieres", {"Q": "x", "inverse": "true"}, "[x^2 : y*z : x*z]"),
        ("henon", {"p": "y^2"}, "[y*z : -x*z + y^2 : z^2]"),
        ("monomial", {"matrix": "[[1,0],[1,1]]"}, "[x*z : x*y : z^2]"),
    ],
)
def test_builtin_families(name, params, expected):
    assert builtin_family(name, params) == parse_map(expected)


def test_builtin_family_unknown():
    with pytest.raises(InvalidParameterError):
        builtin_family("quartic")


def test_identifier_is_stable(sigma):
    assert sigma.identifier() == parse_map("[y*z : x*z : x*y]").identifier()
    assert len(sigma.identifier()) == 16


def test_family_polynomial_text_is_restricted():
    """Test family parameters only accept polynomial text in the family's variable."""
    with pytest.raises(InvalidParameterError):
        builtin_family("henon", {"p": "__import__('os').getcwd()"})
    with pytest.raises(InvalidParameterError):
        builtin_family("jonquieres", {"Q": "y"})

    expected = parse_map("[y*z : -x*z + y^2 + z^2 : z^2]")
    assert builtin_family("henon", {"p": "y^2 + 1"}) == expected
