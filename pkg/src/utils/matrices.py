"""Exact dense matrices as tuples of rows.

Entries are Fractions (or plain ints for integer lattices); sympy is used only
where an exact algorithm is needed (determinant, inverse, characteristic
polynomial).
"""

import json
from fractions import Fraction
from typing import Any, List, Sequence, Tuple, Union

import sympy as sp

from src.exceptions import InvalidParameterError

Number = Union[int, Fraction]
Matrix = Tuple[Tuple[Any, ...], ...]
Vector = Tuple[Any, ...]


def to_fraction(value: Any) -> Fraction:
    """Exact conversion of ints, rational strings ("1/2") and sympy rationals."""
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, sp.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    raise InvalidParameterError(f"cannot read {value!r} as an exact rational")


def to_matrix(rows: Sequence[Sequence[Any]]) -> Matrix:
    """Rational square matrix from nested sequences."""
    matrix = tuple(tuple(to_fraction(v) for v in row) for row in rows)
    size = len(matrix)
    if size == 0 or any(len(row) != size for row in matrix):
        raise InvalidParameterError(f"expected a non-empty square matrix, got {rows!r}")
    return matrix


def to_int_matrix(rows: Sequence[Sequence[Any]]) -> Matrix:
    """Integer square matrix; fails on non-integral entries."""
    matrix = to_matrix(rows)
    if any(v.denominator != 1 for row in matrix for v in row):
        raise InvalidParameterError("matrix must have integer entries")
    return tuple(tuple(int(v) for v in row) for row in matrix)


def parse_matrix(text: str) -> Matrix:
    """Parse JSON-style text such as "[[2,1],[1,1]]" or "[["1/2",0],[0,2]]"."""
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidParameterError(f"cannot parse matrix '{text}': {e}") from e
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InvalidParameterError(f"matrix must be a list of rows, got '{text}'")
    return to_matrix(rows)


def identity(size: int, one: Number = 1) -> Matrix:
    """Identity matrix whose entries share the type of `one`."""
    zero = one - one
    return tuple(tuple(one if i == j else zero for j in range(size)) for i in range(size))


def diagonal(entries: Sequence[Any]) -> Matrix:
    """Diagonal matrix with rational entries."""
    values = [to_fraction(v) for v in entries]
    size = len(values)
    return tuple(
        tuple(values[i] if i == j else Fraction(0) for j in range(size)) for i in range(size)
    )


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Exact product a * b of tuple matrices."""
    columns = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in columns) for row in a)


def mat_vec(a: Matrix, v: Sequence[Any]) -> Vector:
    """Exact product a * v for a column vector v."""
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: Matrix) -> Matrix:
    """Rows become columns."""
    return tuple(zip(*a))


def to_sympy(a: Matrix) -> sp.Matrix:
    """sympy Matrix with Rational entries."""
    return sp.Matrix(
        [[sp.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in row] for row in a]
    )


def from_sympy(m: sp.Matrix) -> Matrix:
    """Tuple matrix of Fractions from a sympy Matrix."""
    return tuple(tuple(to_fraction(m[i, j]) for j in range(m.cols)) for i in range(m.rows))


def determinant(a: Matrix) -> Fraction:
    """Exact determinant through sympy."""
    return to_fraction(to_sympy(a).det())


def inverse(a: Matrix) -> Matrix:
    """Exact inverse; integer matrices stay integer when unimodular."""
    if determinant(a) == 0:
        raise InvalidParameterError("matrix is singular")
    result = from_sympy(to_sympy(a).inv())
    if all(isinstance(v, int) for row in a for v in row) and all(
        v.denominator == 1 for row in result for v in row
    ):
        return tuple(tuple(int(v) for v in row) for row in result)
    return result


def mat_pow(a: Matrix, exponent: int) -> Matrix:
    """Binary exponentiation; negative exponents go through the exact inverse."""
    if exponent < 0:
        return mat_pow(inverse(a), -exponent)
    result = identity(len(a))
    base = a
    while exponent:
        if exponent & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        exponent >>= 1
    return result


def is_identity(a: Matrix) -> bool:
    """True when a equals the identity entrywise."""
    return all(v == (1 if i == j else 0) for i, row in enumerate(a) for j, v in enumerate(row))


def bit_size(values: Sequence[Any]) -> int:
    """Largest numerator or denominator bit length among rational entries."""
    size = 0
    for v in values:
        f = Fraction(v)
        size = max(size, abs(f.numerator).bit_length(), f.denominator.bit_length())
    return size


def format_matrix(a: Matrix) -> List[List[str]]:
    return [[str(v) for v in row] for row in a]
