"""Shared fixtures for the unit and integration suites."""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from src.config import settings
from src.maps import jonquieres_map, parse_map, sigma_map
from src.polynomials import HomoPoly


@pytest.fixture
def rng():
    """Seeded generator so sampled inputs are the same on every run."""
    return np.random.default_rng(settings.default_seed)


@pytest.fixture
def random_poly():
    """Factory for nonzero homogeneous polynomials with small rational coefficients."""

    def build(rng, degree, num_vars=3, scale=5):
        exponents = [e for e in product(range(degree + 1), repeat=num_vars) if sum(e) == degree]
        terms = {}
        for exponent in exponents:
            if rng.random() < 0.6:
                numerator = int(rng.integers(-scale, scale + 1))
                terms[exponent] = Fraction(numerator, int(rng.integers(1, 4)))
        if not any(terms.values()):
            terms[exponents[int(rng.integers(len(exponents)))]] = Fraction(1)
        return HomoPoly.from_terms(num_vars, terms, degree=degree)

    return build


@pytest.fixture
def sigma():
    """Standard quadratic involution [yz : xz : xy]."""
    return sigma_map()


@pytest.fixture
def jonquieres():
    """(x, y) -> (x, xy) and its inverse."""
    q = [Fraction(0), Fraction(1)]
    return jonquieres_map(q), jonquieres_map(q, inverse=True)


@pytest.fixture
def henon():
    """Quadratic Henon map [yz : y^2 - xz : z^2]."""
    return parse_map("[y*z : y^2 - x*z : z^2]")
