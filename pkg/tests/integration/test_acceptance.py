"""End-to-end acceptance checks for the distortion experiments.

These tests run each experiment at the sizes its reports are quoted at:
degree sequences of the standard families, exact distortion profiles,
verified witness words up to their largest parameters, the horoball
constants and the full CLI path from arguments to a written report.
"""

import json
import math
from fractions import Fraction

import numpy as np
import pytest

from src.cli.main import main
from src.distortion import (
    PowerAlphabetGroup,
    distortion_profile,
    jordan3_template,
    monomial_translation_word,
    sl2_doubling_witness,
)
from src.distortion.groups import baumslag_solitar, heisenberg
from src.heights import (
    gelfond_check,
    linear_height_growth,
    map_height,
    poly_height,
    product_formula_holds,
    verify_word_height,
    word_height_fixtures,
)
from src.hyperbolic import (
    PMClass,
    disjointness_certificate,
    halphen_class_degrees,
    halphen_parabolic_fixture,
    horoball_witness_search,
    orbit_growth,
    random_isotropic_vector,
    thb_length_lower_bound,
    w_J,
)
from src.hyperbolic.lattice import fit_orbit_exponent
from src.maps import (
    check_sqrt_subadditivity,
    classify_growth,
    dynamical_degree_estimate,
    iterate_degrees,
    linear_map,
    monomial_map,
    parse_map,
)
from src.utils.matrices import diagonal

pytestmark = pytest.mark.slow


def test_heisenberg_centre_reaches_nine_in_twelve_letters():
    """[a^3, b^3] = c^9 has 12 letters."""
    group = heisenberg()

    profile = distortion_profile(group, group.distinguished["c"], 12, element_name="c")

    assert not profile.truncated
    assert profile.deltas[12] >= 9


def test_power_alphabet_matches_rescaled_profile():
    base = baumslag_solitar(2)
    x = base.distinguished["x"]

    direct = distortion_profile(base, x, 9)
    rescaled = distortion_profile(PowerAlphabetGroup(base, 3), x, 3)

    assert rescaled.deltas == [direct.deltas[3 * n] for n in range(4)]


def test_largest_witnesses_verify():
    assert sl2_doubling_witness(20).letter_length == 41
    assert jordan3_template(3, 8).letter_length == 69

    report = monomial_translation_word([[2, 1], [1, 1]], [10**9, -(10**9) + 7])
    assert report.verified
    assert report.letter_length <= 6 * math.log(math.hypot(10**9, 10**9 - 7)) + 20


def test_henon_line_degrees():
    """The line method reproduces deg f^n = 2^n for the Henon map."""
    f = parse_map("[y*z : y^2 - x*z : z^2]")

    seq = iterate_degrees(f, 10, method="line", seed=3)

    assert seq.degrees == [2**n for n in range(1, 11)]
    assert classify_growth(seq).growth_class == "Exponential"


def test_monomial_dynamical_degree():
    f = monomial_map([[2, 1], [1, 1]])

    seq = iterate_degrees(f, 12, degree_cap=10**7)

    assert dynamical_degree_estimate(seq).estimate == pytest.approx(
        (3 + math.sqrt(5)) / 2, rel=0.05
    )


@pytest.mark.parametrize(
    "name,trials,max_len",
    [
        ("sigma", 500, 6),
        ("diagonal-sigma", 500, 6),
        ("jonquieres", 500, 6),
        ("sigma-shear", 200, 5),
    ],
)
def test_word_height_bound_holds(name, trials, max_len):
    generators, inverses = word_height_fixtures()[name]

    report = verify_word_height(
        generators, trials=trials, max_len=max_len, inverses=inverses, seed=1
    )

    assert report.violations == 0
    assert report.checked + report.skipped == trials


def test_horoball_certificate_agrees_with_search():
    """No witness is found below the threshold once a certificate is issued."""
    hw = PMClass.from_dict(13, {"q1": -5, "p1": -12})

    certificate = disjointness_certificate(hw, "J", 0.36)
    search = horoball_witness_search(w_J(), hw, 0.36, budget=256, seed=2)

    assert certificate.status == "Certified"
    assert not search.found


def test_cli_end_to_end(tmp_path):
    out = tmp_path / "bs.json"

    code = main(["distortion", "--group", "bs", "--param", "k=2", "--n", "9", "--out", str(out)])

    report = json.loads(out.read_text())
    assert code == 0
    assert report["command"] == "distortion"
    deltas = [row["delta"] for row in report["result"]["rows"]]
    assert deltas == [0, 1, 2, 3, 4, 6, 8, 12, 16, 24]


def test_henon_exact_degrees_and_dynamical_degree():
    """Exact composition agrees with deg f^n = 2^n up to n = 8."""
    f = parse_map("[y*z : y^2 - x*z : z^2]")

    seq = iterate_degrees(f, 8)

    assert seq.degrees == [2**n for n in range(1, 9)]
    assert not seq.truncated
    assert 1.9 <= dynamical_degree_estimate(seq).estimate <= 2.0 + 1e-9


def test_diagonal_heights_up_to_sixty_four():
    heights = linear_height_growth(diagonal([2, 1, 1]), 64)

    assert heights == pytest.approx([n * math.log(2) for n in range(1, 65)])
    for n in (1, 17, 33, 64):
        assert map_height(linear_map(diagonal([2**n, 1, 1]))).H == 2**n


def _random_fraction(rng):
    numerator = int(rng.integers(1, 10**9)) * int(rng.choice([-1, 1]))
    return Fraction(numerator, int(rng.integers(1, 10**9)))


def test_height_invariants_on_random_inputs(rng, random_poly):
    """Product formula, scalar invariance and the Gelfond gap on 1000 samples each."""
    for _ in range(1000):
        assert product_formula_holds(_random_fraction(rng))

    for _ in range(1000):
        f = random_poly(rng, int(rng.integers(1, 5)))
        g = random_poly(rng, int(rng.integers(1, 5)))

        assert poly_height(f.scale(_random_fraction(rng))).H == poly_height(f).H
        assert gelfond_check([f, g]).holds


def test_horoballs_are_disjoint_for_random_classes(rng):
    """10^4 certificates at eps = 0.36, and no witness on 100 of the pairs."""
    classes = [random_isotropic_vector(rng, "J", max_m=500) for _ in range(10_000)]

    for hw in classes:
        assert disjointness_certificate(hw, "J", 0.36).status == "Certified"

    for index, hw in enumerate(classes[:100]):
        search = horoball_witness_search(w_J(), hw, 0.36, budget=256, seed=index)

        assert not search.found
        assert search.margin > 0


def test_halphen_orbit_is_quadratic_and_undistorted():
    """cosh dist(T^n e0, e0) grows like n^2 up to n = 10^4."""
    ns = [10, 100, 1000, 10_000]

    values = orbit_growth(halphen_parabolic_fixture(), ns)

    assert fit_orbit_exponent(ns, values) == pytest.approx(2.0, abs=0.1)
    for n in ns:
        assert thb_length_lower_bound(2, 2, 1, n) >= n // 2 - 2


def test_halphen_degrees_are_sqrt_subadditive():
    degrees = halphen_class_degrees(100)

    assert check_sqrt_subadditivity(degrees) == []
    assert degrees == sorted(degrees)


def test_monomial_words_grow_at_most_six_log():
    """Fitted slope of word length against log|v| over log-uniform targets."""
    rng = np.random.default_rng(7)
    norms, lengths = [], []
    for _ in range(100):
        radius = 10 ** rng.uniform(1, 6)
        angle = rng.uniform(0, 2 * math.pi)
        v = [int(round(radius * math.cos(angle))), int(round(radius * math.sin(angle)))]
        if not any(v):
            v = [1, 0]

        report = monomial_translation_word([[2, 1], [1, 1]], v)

        assert report.verified
        norm = math.hypot(*v)
        assert report.letter_length <= 6 * math.log(norm) + 20
        norms.append(norm)
        lengths.append(report.letter_length)

    slope, _ = np.polyfit(np.log(norms), lengths, 1)
    assert slope <= 6
