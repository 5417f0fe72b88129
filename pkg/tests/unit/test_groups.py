"""Unit tests for group specifications, words and fixture groups."""

import pytest

from src.distortion import BirMapGroup, Word, group_catalog, nilpotent_example, parse_word
from src.distortion.groups import (
    baumslag_solitar,
    free_abelian,
    heisenberg,
    involution_group,
    jordan3_group,
    monomial_affine_group,
    sl2_doubling_group,
)
from src.exceptions import InvalidParameterError
from src.utils.matrices import mat_pow


def test_parse_and_render_word():
    word = parse_word("A^10 U A^-10")

    assert word.blocks == (("A", 10), ("U", 1), ("A", -10))
    assert word.letter_length == 21
    assert word.block_count == 3
    assert word.render() == "A^10 U A^-10"
    assert word.inverse().render() == "A^10 U^-1 A^-10"


def test_parse_empty_word():
    assert parse_word("1") == Word()
    assert parse_word("  ") == Word()
    assert Word().render() == "1"


@pytest.mark.parametrize("text", ["A^", "A^1.5", "^2", "A-1"])
def test_parse_word_rejects_bad_tokens(text):
    with pytest.raises(InvalidParameterError):
        parse_word(text)


def test_parse_word_checks_alphabet():
    with pytest.raises(InvalidParameterError):
        parse_word("t x q", alphabet=["t", "x"])


def test_word_rejects_zero_exponent():
    with pytest.raises(InvalidParameterError):
        Word((("a", 0),))


def test_baumslag_solitar_relation():
    """Test t x t^-1 = x^k."""
    group = baumslag_solitar(3)
    x = group.letter("x").element

    assert group.equal(group.evaluate(parse_word("t x t^-1")), group.power(x, 3))


def test_sl2_doubling_relation():
    group = sl2_doubling_group()
    u = group.letter("U").element

    assert group.evaluate(parse_word("A U A^-1")) == group.power(u, 4)


def test_heisenberg_commutator_is_central_generator():
    group = heisenberg()

    assert group.evaluate(parse_word("a b a^-1 b^-1")) == group.distinguished["c"]


def test_free_abelian_group():
    group = free_abelian(2)

    element = group.evaluate(parse_word("e1^3 e2^-2 e1"))

    assert element[1] == (4, -2)


def test_monomial_affine_multiplication():
    """Test (M, 0)(I, e1)(M, 0)^-1 is the translation by M e1."""
    group = monomial_affine_group([[2, 1], [1, 1]])

    element = group.evaluate(parse_word("M e1 M^-1"))

    assert element == (((1, 0), (0, 1)), (2, 1))


def test_jordan3_alphabet_contains_jordan_block():
    group = jordan3_group(2)
    u = group.letter("U").element

    assert mat_pow(u, 4)[0] == (1, 4, 6)


def test_generating_set_drops_repeated_inverses():
    """Test that an involution contributes a single generator."""
    assert len(involution_group().generating_set()) == 1
    assert len(baumslag_solitar(2).generating_set()) == 4


@pytest.mark.parametrize("d", [1, 2, 3])
def test_nilpotent_example_corner(d):
    group = nilpotent_example(d)
    corner = group.distinguished["U"]

    assert group.dimension == d + 2
    assert corner[0][d + 1] == 1


@pytest.mark.parametrize("d", [0, 5])
def test_nilpotent_example_depth_range(d):
    with pytest.raises(InvalidParameterError):
        nilpotent_example(d)


def test_birmap_group_checks_inverses(jonquieres, sigma):
    f, f_inv = jonquieres

    group = BirMapGroup("J", {"j": (f, f_inv), "s": (sigma, sigma)})
    assert group.evaluate(parse_word("j j^-1 s s")) == group.identity()

    with pytest.raises(InvalidParameterError):
        BirMapGroup("bad", {"j": (f, f)})


def test_group_catalog():
    catalog = group_catalog()

    assert catalog.build("bs", k=3).name == "BS(1,3)"
    assert catalog.build("Z2").name == "Z^2"
    assert catalog.build("nilpotent", d=2).dimension == 4

    with pytest.raises(InvalidParameterError):
        catalog.build("lamplighter")


def test_letter_lookup():
    with pytest.raises(InvalidParameterError):
        heisenberg().letter("z")


@pytest.mark.parametrize("k", range(1, 6))
def test_nilpotent_depth_two_corner_is_cubically_distorted(k):
    """Test [[x0^k, x1^k], x2^k] = U^(k^3) with 10k letters."""
    group = nilpotent_example(2)
    word = Word.of(
        ("x0", k), ("x1", k), ("x0", -k), ("x1", -k),
        ("x2", k),
        ("x1", k), ("x0", k), ("x1", -k), ("x0", -k),
        ("x2", -k),
    )

    assert word.letter_length == 10 * k
    assert group.equal(group.evaluate(word), group.power(group.distinguished["U"], k**3))
