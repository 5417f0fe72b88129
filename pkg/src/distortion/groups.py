"""Finitely generated groups with exact canonical forms, and words in their generators."""

import logging
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

from src.config import settings
from src.exceptions import InvalidParameterError
from src.maps.birmap import BirMap, compose, format_map, identity_map
from src.utils.matrices import (
    Matrix,
    bit_size,
    diagonal,
    identity,
    inverse,
    mat_mul,
    mat_vec,
    to_matrix,
)

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class Word:
    """Run-length word: blocks (letter, nonzero exponent), read left to right."""

    blocks: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        if any(exponent == 0 for _, exponent in self.blocks):
            raise InvalidParameterError("word blocks must have nonzero exponents")

    @classmethod
    def of(cls, *blocks: Tuple[str, int]) -> "Word":
        return cls(tuple((name, int(exp)) for name, exp in blocks if exp))

    @property
    def letter_length(self) -> int:
        return sum(abs(exponent) for _, exponent in self.blocks)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def inverse(self) -> "Word":
        return Word(tuple((name, -exponent) for name, exponent in reversed(self.blocks)))

    def __add__(self, other: "Word") -> "Word":
        return Word(self.blocks + other.blocks)

    def render(self) -> str:
        if not self.blocks:
            return "1"
        return " ".join(name if exp == 1 else f"{name}^{exp}" for name, exp in self.blocks)

    def __str__(self) -> str:
        return self.render()


def parse_word(text: str, alphabet: Optional[Sequence[str]] = None) -> Word:
    """Parse "A^10 U A^-10"; "1" or "" is the empty word.

    Raises:
        InvalidParameterError: On malformed tokens or letters outside the alphabet
    """
    stripped = text.strip()
    if stripped in ("", "1"):
        return Word()
    blocks = []
    for token in stripped.split():
        match = _TOKEN.match(token)
        if not match:
            raise InvalidParameterError(f"cannot parse word token '{token}'")
        name, exponent = match.group(1), int(match.group(2) or 1)
        if alphabet is not None and name not in alphabet:
            raise InvalidParameterError(f"letter '{name}' is not in {list(alphabet)}")
        if exponent:
            blocks.append((name, exponent))
    return Word(tuple(blocks))


@dataclass(frozen=True)
class Letter:
    name: str
    element: Any
    inverse: Any


class GroupSpec(ABC):
    """Group generated by named letters, each given with its inverse.

    Subclasses fix the element domain: identity, multiplication, a hashable
    canonical form compatible with multiplication and a size used by caps.
    """

    exact = True

    def __init__(
        self,
        name: str,
        letters: Sequence[Letter],
        distinguished: Optional[Dict[str, Any]] = None,
    ):
        if not letters:
            raise InvalidParameterError("a group needs at least one generator")
        self.name = name
        self.letters = list(letters)
        self.distinguished = dict(distinguished or {})
        self._by_name = {letter.name: letter for letter in self.letters}

    @abstractmethod
    def identity(self) -> Any:
        ...

    @abstractmethod
    def multiply(self, a: Any, b: Any) -> Any:
        ...

    @abstractmethod
    def canonical(self, a: Any) -> Hashable:
        ...

    @abstractmethod
    def size(self, a: Any) -> int:
        """Magnitude compared against the caps (bit length or degree)."""

    def exceeds(self, a: Any, max_size: Optional[int] = None) -> bool:
        limit = max_size if max_size is not None else settings.max_coefficient_bits
        return self.size(a) > limit

    def letter(self, name: str) -> Letter:
        if name not in self._by_name:
            raise InvalidParameterError(f"'{name}' is not a generator of {self.name}")
        return self._by_name[name]

    @property
    def alphabet(self) -> List[str]:
        return [letter.name for letter in self.letters]

    def generating_set(self) -> List[Tuple[str, Any]]:
        """Symmetric generating set S without the identity and without repeats."""
        seen = {self.canonical(self.identity())}
        generators = []
        for letter in self.letters:
            pair = ((letter.name, letter.element), (f"{letter.name}^-1", letter.inverse))
            for label, element in pair:
                key = self.canonical(element)
                if key not in seen:
                    seen.add(key)
                    generators.append((label, element))
        return generators

    def power(self, a: Any, m: int) -> Any:
        if m < 0:
            raise InvalidParameterError("use the inverse letter for negative powers")
        result = self.identity()
        base = a
        while m:
            if m & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            m >>= 1
        return result

    def evaluate(self, word: Word) -> Any:
        result = self.identity()
        for name, exponent in word.blocks:
            letter = self.letter(name)
            element = letter.element if exponent > 0 else letter.inverse
            result = self.multiply(result, self.power(element, abs(exponent)))
        return result

    def equal(self, a: Any, b: Any) -> bool:
        return self.canonical(a) == self.canonical(b)


class MatrixGroup(GroupSpec):
    """Invertible rational matrices; the canonical form is the entry tuple itself."""

    def __init__(
        self,
        name: str,
        matrices: Dict[str, Any],
        distinguished: Optional[Dict[str, Any]] = None,
    ):
        letters = []
        for letter_name, rows in matrices.items():
            m = to_matrix(rows)
            letters.append(Letter(letter_name, m, inverse(m)))
        special = {k: to_matrix(v) for k, v in (distinguished or {}).items()}
        super().__init__(name, letters, special)
        self.dimension = len(letters[0].element)

    def identity(self) -> Matrix:
        return to_matrix(identity(self.dimension))

    def multiply(self, a: Matrix, b: Matrix) -> Matrix:
        return mat_mul(a, b)

    def canonical(self, a: Matrix) -> Hashable:
        return a

    def size(self, a: Matrix) -> int:
        return bit_size([v for row in a for v in row])


AffineElement = Tuple[Matrix, Tuple[int, ...]]


class AffineGroup(GroupSpec):
    """Pairs (M, v) in GL_m(Z) x Z^m with (M1, v1)(M2, v2) = (M1 M2, v1 + M1 v2)."""

    def __init__(
        self,
        name: str,
        elements: Dict[str, AffineElement],
        distinguished: Optional[Dict[str, AffineElement]] = None,
    ):
        letters = [Letter(key, value, self.invert(value)) for key, value in elements.items()]
        super().__init__(name, letters, distinguished)
        self.dimension = len(letters[0].element[1])

    @staticmethod
    def invert(a: AffineElement) -> AffineElement:
        matrix, vector = a
        inv = inverse(matrix)
        return inv, tuple(-x for x in mat_vec(inv, vector))

    def identity(self) -> AffineElement:
        return identity(self.dimension), (0,) * self.dimension

    def multiply(self, a: AffineElement, b: AffineElement) -> AffineElement:
        (m1, v1), (m2, v2) = a, b
        shifted = mat_vec(m1, v2)
        return mat_mul(m1, m2), tuple(x + y for x, y in zip(v1, shifted))

    def canonical(self, a: AffineElement) -> Hashable:
        return a

    def size(self, a: AffineElement) -> int:
        matrix, vector = a
        return bit_size([v for row in matrix for v in row] + list(vector))


class BirMapGroup(GroupSpec):
    """Subgroup of Bir(P^m) given by maps and their inverses."""

    def __init__(
        self,
        name: str,
        maps: Dict[str, Tuple[BirMap, BirMap]],
        distinguished: Optional[Dict[str, BirMap]] = None,
    ):
        letters = [Letter(key, f, f_inv) for key, (f, f_inv) in maps.items()]
        for letter in letters:
            if compose(letter.element, letter.inverse) != identity_map(letter.element.dim):
                inverse_text = format_map(letter.inverse)
                message = f"{inverse_text} is not the inverse of {format_map(letter.element)}"
                raise InvalidParameterError(message)
        super().__init__(name, letters, distinguished)
        self.dim = letters[0].element.dim

    def identity(self) -> BirMap:
        return identity_map(self.dim)

    def multiply(self, a: BirMap, b: BirMap) -> BirMap:
        return compose(a, b)

    def canonical(self, a: BirMap) -> Hashable:
        return a

    def size(self, a: BirMap) -> int:
        return a.degree

    def exceeds(self, a: BirMap, max_size: Optional[int] = None) -> bool:
        limit = max_size if max_size is not None else settings.max_birmap_degree
        coefficient_bits = bit_size(a.coefficient_stream())
        return a.degree > limit or coefficient_bits > settings.max_coefficient_bits


class PowerAlphabetGroup(GroupSpec):
    """The same group generated by S^k, the elements of word length at most k in S."""

    def __init__(self, base: GroupSpec, k: int):
        from src.distortion.profiler import ball

        if k < 1:
            raise InvalidParameterError(f"k must be positive, got {k}")
        self.base = base
        self.k = k
        radius_k = ball(base, k)
        identity_key = base.canonical(base.identity())
        letters = []
        for index, (key, (element, _)) in enumerate(radius_k.elements.items()):
            if key != identity_key:
                letters.append(Letter(f"s{index}", element, None))
        super().__init__(f"{base.name}^{k}", letters, base.distinguished)

    def identity(self) -> Any:
        return self.base.identity()

    def multiply(self, a: Any, b: Any) -> Any:
        return self.base.multiply(a, b)

    def canonical(self, a: Any) -> Hashable:
        return self.base.canonical(a)

    def size(self, a: Any) -> int:
        return self.base.size(a)

    def exceeds(self, a: Any, max_size: Optional[int] = None) -> bool:
        return self.base.exceeds(a, max_size)

    def generating_set(self) -> List[Tuple[str, Any]]:
        # Balls are symmetric, so S^k already contains every inverse
        return [(letter.name, letter.element) for letter in self.letters]


def _unit(m: int, j: int) -> Tuple[int, ...]:
    return tuple(1 if i == j else 0 for i in range(m))


def free_abelian(m: int) -> AffineGroup:
    """Z^m by unit translations e1..em."""
    if m < 1:
        raise InvalidParameterError(f"rank must be positive, got {m}")
    one = identity(m)
    return AffineGroup(
        f"Z^{m}",
        {f"e{j + 1}": (one, _unit(m, j)) for j in range(m)},
        {"e1": (one, _unit(m, 0))},
    )


def free_group_rank2() -> MatrixGroup:
    """Sanov's free subgroup of SL_2(Z)."""
    return MatrixGroup("F2", {"a": [[1, 2], [0, 1]], "b": [[1, 0], [2, 1]]})


def cyclic_unipotent() -> MatrixGroup:
    return MatrixGroup("Z", {"t": [[1, 1], [0, 1]]})


def involution_group() -> MatrixGroup:
    return MatrixGroup("Z/2", {"s": [[0, 1], [1, 0]]})


def baumslag_solitar(k: int = 2) -> MatrixGroup:
    """BS(1, k) as t = diag(k, 1) and the unit translation x."""
    if k < 2:
        raise InvalidParameterError(f"k must be at least 2, got {k}")
    return MatrixGroup(
        f"BS(1,{k})",
        {"t": [[k, 0], [0, 1]], "x": [[1, 1], [0, 1]]},
        {"x": [[1, 1], [0, 1]]},
    )


def _unitriangular(size: int, entries: Dict[Tuple[int, int], Any]) -> List[List[Fraction]]:
    rows = [[Fraction(1 if i == j else 0) for j in range(size)] for i in range(size)]
    for (i, j), value in entries.items():
        rows[i][j] = Fraction(value)
    return rows


def heisenberg() -> MatrixGroup:
    """Integer Heisenberg group; c = [a, b] is central."""
    return MatrixGroup(
        "H3",
        {"a": _unitriangular(3, {(0, 1): 1}), "b": _unitriangular(3, {(1, 2): 1})},
        {"c": _unitriangular(3, {(0, 2): 1})},
    )


def sl2_doubling_group() -> MatrixGroup:
    """A = diag(2, 1/2) and U unipotent, with A U A^-1 = U^4."""
    return MatrixGroup(
        "SL2-doubling",
        {"A": diagonal([2, Fraction(1, 2)]), "U": [[1, 1], [0, 1]]},
        {"U": [[1, 1], [0, 1]]},
    )


def _heis3(a: Any, b: Any, c: Any) -> List[List[Fraction]]:
    """[a, b, c] = [[1, a, c], [0, 1, b], [0, 0, 1]]."""
    return _unitriangular(3, {(0, 1): a, (1, 2): b, (0, 2): c})


def jordan3_group(K: int = 2) -> MatrixGroup:
    """Alphabet A..E, U in which U^(K^n) has a word of 8n + 5 letters.

    A = diag(1, K, 1) and C = diag(K, 1, 1) rescale the unipotent coordinates;
    B, D, E are fixed unipotents and U is the 3 x 3 Jordan block.
    """
    if K < 2:
        raise InvalidParameterError(f"K must be at least 2, got {K}")
    half = Fraction(1, 2)
    jordan = _heis3(1, 1, 0)
    return MatrixGroup(
        f"Jordan3(K={K})",
        {
            "A": diagonal([1, K, 1]),
            "B": _heis3(0, -1, 0),
            "C": diagonal([K, 1, 1]),
            "D": _heis3(-1, 0, half),
            "E": _heis3(0, 0, half),
            "U": jordan,
        },
        {"U": jordan},
    )


def monomial_affine_group(matrix: Sequence[Sequence[Any]]) -> AffineGroup:
    """GL_m(Z) x Z^m restricted to <M> and the unit translations."""
    rows = to_matrix(matrix)
    if any(v.denominator != 1 for row in rows for v in row):
        raise InvalidParameterError("monomial matrix must be integral")
    m = tuple(tuple(int(v) for v in row) for row in rows)
    size = len(m)
    one = identity(size)
    elements: Dict[str, AffineElement] = {"M": (m, (0,) * size)}
    for j in range(size):
        elements[f"e{j + 1}"] = (one, _unit(size, j))
    return AffineGroup("GL(Z) x Z^m", elements)


def nilpotent_example(d: int) -> MatrixGroup:
    """Unitriangular (d+2) x (d+2) matrices with elementary generators x_i = I + E_(i,i+1).

    U = I + E_(0,d+1) is an iterated commutator of length d+1 and its
    distortion grows like n^(d+1).
    """
    if not 1 <= d <= 4:
        raise InvalidParameterError(f"depth must lie in 1..4, got {d}")
    size = d + 2
    generators = {f"x{i}": _unitriangular(size, {(i, i + 1): 1}) for i in range(size - 1)}
    corner = _unitriangular(size, {(0, size - 1): 1})
    return MatrixGroup(f"N{d}", generators, {"U": corner})


@dataclass
class FixtureCatalog:
    """Named fixture groups for the CLI."""

    builders: Dict[str, Any] = field(default_factory=dict)

    def build(self, name: str, **params: Any) -> GroupSpec:
        key = name.strip().lower()
        if key not in self.builders:
            known = sorted(self.builders)
            raise InvalidParameterError(f"unknown group '{name}'; known: {known}")
        return self.builders[key](**params)


def group_catalog() -> FixtureCatalog:
    return FixtureCatalog(
        {
            "z2": lambda **p: free_abelian(int(p.get("m", 2))),
            "free2": lambda **p: free_group_rank2(),
            "cyclic": lambda **p: cyclic_unipotent(),
            "involution": lambda **p: involution_group(),
            "bs": lambda **p: baumslag_solitar(int(p.get("k", 2))),
            "heisenberg": lambda **p: heisenberg(),
            "sl2": lambda **p: sl2_doubling_group(),
            "jordan3": lambda **p: jordan3_group(int(p.get("K", 2))),
            "nilpotent": lambda **p: nilpotent_example(int(p.get("d", 1))),
            "monomial": lambda **p: monomial_affine_group(p.get("matrix", [[2, 1], [1, 1]])),
        }
    )
