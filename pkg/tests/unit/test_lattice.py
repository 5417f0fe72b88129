"""Unit tests for integer isometries of Z^{1,k}."""

import math

import pytest

from src.exceptions import FormViolationError, InvalidParameterError
from src.hyperbolic import (
    classify_lattice_isometry,
    halphen_class_degrees,
    halphen_parabolic_fixture,
    orbit_growth,
    reflection,
)
from src.hyperbolic.lattice import (
    elliptic_fixture,
    fit_orbit_exponent,
    fixtures,
    loxodromic_fixture,
    minkowski,
    parabolic_fixture,
    validate_isometry,
)
from src.maps import check_sqrt_subadditivity


@pytest.mark.parametrize("name,matrix", fixtures())
def test_fixtures_preserve_the_form(name, matrix):
    assert validate_isometry(matrix) == matrix


def test_loxodromic_fixture():
    """Test spectral radius 2 + sqrt 3 and translation length log(2 + sqrt 3)."""
    report = classify_lattice_isometry(loxodromic_fixture())

    assert report.isometry_type == "Loxodromic"
    assert report.spectral_radius == pytest.approx(2 + math.sqrt(3))
    assert report.translation_length == pytest.approx(math.log(2 + math.sqrt(3)))


def test_parabolic_fixture_fixes_isotropic_ray():
    report = classify_lattice_isometry(parabolic_fixture())

    assert report.isometry_type == "Parabolic"
    assert report.translation_length == 0.0
    assert report.fixed_ray == ["1", "1", "0"]
    ray = [int(x) for x in report.fixed_ray]
    assert minkowski(ray, ray) == 0


def test_elliptic_fixture():
    report = classify_lattice_isometry(elliptic_fixture())

    assert report.isometry_type == "Elliptic"
    assert report.cyclotomic_orders == [1, 2]


def test_identity_is_elliptic():
    assert classify_lattice_isometry([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).isometry_type == "Elliptic"


def test_halphen_fixture_is_parabolic():
    report = classify_lattice_isometry(halphen_parabolic_fixture())

    assert report.isometry_type == "Parabolic"
    assert report.fixed_ray is not None


def test_halphen_orbit_grows_quadratically():
    """Test (T^n e0).e0 = 1 + 9 n^2 and a fitted exponent of 2."""
    ns = [10, 20, 40, 80]

    values = orbit_growth(halphen_parabolic_fixture(), ns)

    assert values == [1 + 9 * n * n for n in ns]
    assert fit_orbit_exponent(ns, values) == pytest.approx(2.0, abs=0.01)


def test_halphen_class_degrees_are_sqrt_subadditive():
    degrees = halphen_class_degrees(12)

    assert degrees[:3] == [10, 37, 82]
    assert check_sqrt_subadditivity(degrees) == []


def test_loxodromic_orbit_grows_exponentially():
    values = orbit_growth(loxodromic_fixture(), range(1, 12))

    assert values[-1] / values[-2] == pytest.approx(2 + math.sqrt(3), rel=1e-3)


def test_reflection_is_an_involutive_isometry():
    s = reflection([1, -1, -1, -1])

    assert validate_isometry(s) == s
    assert orbit_growth(s, [2]) == [1]


def test_reflection_rejects_other_norms():
    with pytest.raises(InvalidParameterError):
        reflection([1, 0, 0])


@pytest.mark.parametrize(
    "matrix",
    [
        [[2, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[-1, 0, 0], [0, 1, 0], [0, 0, 1]],
    ],
)
def test_rejects_non_isometries(matrix):
    with pytest.raises(FormViolationError):
        classify_lattice_isometry(matrix)
