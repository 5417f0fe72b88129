"""Weil heights of polynomials and maps, Gelfond's inequality and word-height bounds."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import settings
from src.exceptions import DegenerateCompositionError, InvalidParameterError, PolynomialError
from src.heights.places import local_maxima, vector_places
from src.maps.birmap import BirMap, compose, format_map, identity_map
from src.maps.families import jonquieres_map, linear_map, sigma_map
from src.polynomials.homopoly import HomoPoly, delta_degree_sum
from src.reports.schemas import GelfondReport, HeightReport, WordHeightReport
from src.utils.matrices import diagonal, to_matrix

logger = logging.getLogger(__name__)


def _vector_height(coeffs: Sequence[Fraction]) -> HeightReport:
    nonzero = [Fraction(c) for c in coeffs if c]
    # The primitive integer vector is the input divided by its content
    scale = Fraction(
        reduce(math.gcd, (abs(c.numerator) for c in nonzero)),
        reduce(math.lcm, (c.denominator for c in nonzero)),
    )
    H = int(max(abs(c) for c in nonzero) / scale)
    return HeightReport(H=H, h=math.log(H), places=vector_places(nonzero))


def poly_height(f: HomoPoly) -> HeightReport:
    """Height of the coefficient vector of f; invariant under rescaling.

    Raises:
        PolynomialError: If f is zero
    """
    if f.is_zero:
        raise PolynomialError("height of the zero polynomial is undefined")
    return _vector_height([c for _, c in f.terms])


def map_height(f: BirMap) -> HeightReport:
    """Joint height of all coefficients of [f_0 : ... : f_m]."""
    return _vector_height([Fraction(c) for c in f.coefficient_stream()])


def gelfond_check(factors: Sequence[HomoPoly]) -> GelfondReport:
    """Compare h(prod f_i) with sum h(f_i); the gap is at most Delta(prod) * log 2.

    Raises:
        InvalidParameterError: If fewer than two factors are given
        PolynomialError: If a factor is zero
    """
    if len(factors) < 2:
        raise InvalidParameterError("gelfond_check needs at least two factors")
    if any(f.is_zero for f in factors):
        raise PolynomialError("gelfond_check factors must be nonzero")

    product = reduce(lambda a, b: a * b, factors)
    gap = poly_height(product).h - sum(poly_height(f).h for f in factors)
    delta = delta_degree_sum(product)
    bound = delta * math.log(2)
    return GelfondReport(gap=gap, delta=delta, bound=bound, holds=abs(gap) <= bound + 1e-12)


def _generator_coefficients(g: BirMap) -> List[Fraction]:
    """Coefficients scaled so that the canonically first one equals 1."""
    stream = [Fraction(c) for c in g.coefficient_stream() if c]
    first = stream[0]
    return [c / first for c in stream]


def active_places(generators: Sequence[BirMap]) -> Dict[str, Fraction]:
    """Places v with M(v) = max over S of max |a|_v greater than 1."""
    maxima: Dict[str, Fraction] = {}
    for g in generators:
        for place, value in local_maxima(_generator_coefficients(g)).items():
            maxima[place] = max(maxima.get(place, Fraction(1)), value)
    return {place: value for place, value in sorted(maxima.items()) if value > 1}


def word_height_bound(generators: Sequence[BirMap], length: int) -> float:
    """Explicit bound on h(w) for words w of the given length in S.

    ((m+1) log 2 + sum_v log M(v) + log(m d^m)) * d^(2 length), d = max(2, deg S).

    Raises:
        InvalidParameterError: If S is empty or the dimensions differ
    """
    if not generators:
        raise InvalidParameterError("word_height_bound needs a non-empty generating set")
    dims = {g.dim for g in generators}
    if len(dims) != 1:
        raise InvalidParameterError(f"generators act on different spaces P^{sorted(dims)}")
    m = dims.pop()
    d = max(2, max(g.degree for g in generators))
    local = sum(math.log(value) for value in active_places(generators).values())
    constant = (m + 1) * math.log(2) + local + math.log(m * d**m)
    return constant * float(d) ** (2 * length)


def _symmetric_alphabet(
    generators: Sequence[BirMap], inverses: Optional[Sequence[BirMap]]
) -> Tuple[List[BirMap], List[int]]:
    """Letters closed under inversion and the index of each letter's inverse.

    Raises:
        InvalidParameterError: If a claimed inverse is wrong or S is not symmetric
    """
    letters: List[BirMap] = []
    for g in list(generators) + list(inverses or []):
        if g not in letters:
            letters.append(g)

    if inverses is not None:
        if len(inverses) != len(generators):
            raise InvalidParameterError("need exactly one inverse per generator")
        for g, g_inv in zip(generators, inverses):
            if compose(g, g_inv) != identity_map(g.dim):
                message = f"{format_map(g_inv)} is not the inverse of {format_map(g)}"
                raise InvalidParameterError(message)

    identity = identity_map(letters[0].dim)
    inverse_index = []
    for g in letters:
        matches = [j for j, h in enumerate(letters) if compose(g, h) == identity]
        if not matches:
            message = f"generating set is not symmetric: {format_map(g)} has no inverse"
            raise InvalidParameterError(message)
        inverse_index.append(matches[0])
    return letters, inverse_index


def _random_reduced_words(
    rng: np.random.Generator, inverse_index: List[int], trials: int, max_len: int
) -> List[List[int]]:
    words = []
    size = len(inverse_index)
    for _ in range(trials):
        target = int(rng.integers(1, max_len + 1))
        word: List[int] = []
        while len(word) < target:
            allowed = [i for i in range(size) if not word or i != inverse_index[word[-1]]]
            if not allowed:
                break
            word.append(allowed[int(rng.integers(len(allowed)))])
        words.append(word)
    return words


def _word_heights(
    letters: List[BirMap], words: List[List[int]]
) -> List[Optional[Tuple[float, int]]]:
    """(h(w), |w|) per word; None for degenerate or oversized compositions."""
    results: List[Optional[Tuple[float, int]]] = []
    for word in words:
        current = identity_map(letters[0].dim)
        try:
            for index in word:
                current = compose(current, letters[index])
                if current.degree > settings.max_birmap_degree:
                    raise DegenerateCompositionError(f"degree {current.degree} over cap")
        except DegenerateCompositionError as e:
            logger.warning(f"Skipping word {word}: {e.message}")
            results.append(None)
            continue
        results.append((map_height(current).h, len(word)))
    return results


def verify_word_height(
    generators: Sequence[BirMap],
    trials: int = 200,
    max_len: int = 5,
    inverses: Optional[Sequence[BirMap]] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> WordHeightReport:
    """Sample random reduced words and check h(w(S)) <= word_height_bound(S, |w|).

    Args:
        generators: Generating set S
        trials: Number of sampled words
        max_len: Longest word length
        inverses: Explicit inverses of the generators; when omitted S must be symmetric
        seed: Seed of the word sampler, recorded in the report
        workers: Threads evaluating chunks of words

    Returns:
        WordHeightReport with violation count and worst height/bound ratio
    """
    if trials < 1 or max_len < 1:
        raise InvalidParameterError("trials and max_len must be positive")
    seed = settings.default_seed if seed is None else seed
    workers = workers or settings.workers
    letters, inverse_index = _symmetric_alphabet(generators, inverses)
    names = [format_map(g) for g in letters]

    rng = np.random.default_rng(seed)
    words = _random_reduced_words(rng, inverse_index, trials, max_len)
    chunk = settings.word_height_chunk_size
    chunks = [words[i : i + chunk] for i in range(0, len(words), chunk)]

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(lambda c: _word_heights(letters, c), chunks))
    else:
        outcomes = [_word_heights(letters, c) for c in chunks]

    checked = skipped = violations = 0
    worst_ratio = 0.0
    worst_word = None
    for word, outcome in zip(words, (o for part in outcomes for o in part)):
        if outcome is None:
            skipped += 1
            continue
        checked += 1
        h, length = outcome
        ratio = h / word_height_bound(letters, length)
        if ratio > 1:
            violations += 1
            logger.error(f"Height bound violated by word {word} (ratio {ratio:.3f})")
        if ratio > worst_ratio or worst_word is None:
            worst_ratio = ratio
            worst_word = " ".join(names[i] for i in word)

    return WordHeightReport(
        seed=seed,
        trials=trials,
        max_len=max_len,
        checked=checked,
        skipped=skipped,
        violations=violations,
        worst_ratio=worst_ratio,
        worst_word=worst_word,
        active_places={p: str(v) for p, v in active_places(letters).items()},
    )


def word_height_fixtures() -> Dict[str, Tuple[List[BirMap], List[BirMap]]]:
    """Generator sets with explicit inverses used by the height checks."""
    swap = linear_map(to_matrix(((0, 1, 0), (1, 0, 0), (0, 0, 1))))
    shear = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
    unshear = ((1, -1, 0), (0, 1, 0), (0, 0, 1))
    return {
        "jonquieres": (
            [jonquieres_map([Fraction(0), Fraction(1)]), swap],
            [jonquieres_map([Fraction(0), Fraction(1)], inverse=True), swap],
        ),
        "sigma": ([sigma_map()], [sigma_map()]),
        "sigma-shear": (
            [sigma_map(), linear_map(to_matrix(shear))],
            [sigma_map(), linear_map(to_matrix(unshear))],
        ),
        "diagonal-sigma": (
            [linear_map(diagonal([2, 1, 1])), sigma_map()],
            [linear_map(diagonal([1, 2, 2])), sigma_map()],
        ),
    }
