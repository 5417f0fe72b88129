"""Word metrics, distortion profiles and verified witness words."""

from src.distortion.groups import (
    AffineGroup,
    BirMapGroup,
    GroupSpec,
    MatrixGroup,
    PowerAlphabetGroup,
    Word,
    group_catalog,
    nilpotent_example,
    parse_word,
)
from src.distortion.homeo import HomeoGroup, homeo_growth_check, random_homeo_words
from src.distortion.profiler import Ball, Caps, ball, distortion_profile
from src.distortion.witnesses import (
    bs_witnesses,
    jordan3_template,
    monomial_translation_word,
    sl2_doubling_witness,
)

__all__ = [
    "AffineGroup",
    "BirMapGroup",
    "GroupSpec",
    "MatrixGroup",
    "PowerAlphabetGroup",
    "Word",
    "group_catalog",
    "nilpotent_example",
    "parse_word",
    "HomeoGroup",
    "homeo_growth_check",
    "random_homeo_words",
    "Ball",
    "Caps",
    "ball",
    "distortion_profile",
    "bs_witnesses",
    "jordan3_template",
    "monomial_translation_word",
    "sl2_doubling_witness",
]
