"""Pydantic schemas for every report the library emits."""

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_serializer, field_validator

GrowthClass = Literal["Bounded", "Linear", "Quadratic", "Exponential", "Inconclusive"]
DistortionConsequence = Literal["Undistorted", "AtMostExponential", "NoVerdict"]
LinearClass = Literal["FiniteOrder", "DoublyExpDistorted", "ExpDistorted"]
IsometryType = Literal["Elliptic", "Parabolic", "Loxodromic"]


class DegreeSequence(BaseModel):
    """Degrees of f, f^2, ..., f^N."""

    map: str
    source: str
    degrees: List[int]
    dim: Optional[int] = None
    truncated: bool = False
    truncation_reason: Optional[str] = None
    method: str = "exact"

    @field_validator("degrees")
    @classmethod
    def _positive_degrees(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("degree sequence must not be empty")
        if any(d < 1 for d in value):
            raise ValueError("degrees must be positive")
        return value


class GrowthVerdict(BaseModel):
    """Growth class of a degree sequence and what it implies for distortion."""

    growth_class: GrowthClass
    distortion_consequence: DistortionConsequence
    slope: Optional[float] = None
    exact_slope: Optional[str] = None
    quadratic_coefficient: Optional[float] = None
    ratio: Optional[float] = None
    period: Optional[int] = None


class DynamicalDegreeEstimate(BaseModel):
    """Two estimates of the dynamical degree and their geometric mean."""

    nth_root: float
    last_ratio: float
    estimate: float
    spread: float


class PlaceValue(BaseModel):
    """log max|a|_v at one place; `valuation` is exact at finite places."""

    p: str
    logval: float
    valuation: Optional[int] = None


class HeightReport(BaseModel):
    """Projective height of a coefficient vector."""

    H: int
    h: float
    places: List[PlaceValue] = Field(default_factory=list)

    @field_serializer("H")
    def _decimal_string(self, value: int) -> str:
        return str(value)


class GelfondReport(BaseModel):
    gap: float
    delta: int
    bound: float
    holds: bool


class WordHeightReport(BaseModel):
    """Outcome of sampling random words against the explicit height bound."""

    seed: int
    trials: int
    max_len: int
    checked: int
    skipped: int
    violations: int
    worst_ratio: float
    worst_word: Optional[str] = None
    active_places: Dict[str, str] = Field(default_factory=dict)


class LinearClassReport(BaseModel):
    classification: LinearClass
    charpoly: str
    cyclotomic_orders: List[int] = Field(default_factory=list)
    order: Optional[int] = None


class PMClassModel(BaseModel):
    """Exact JSON form of a Picard-Manin class."""

    e0: str
    exc: Dict[str, str] = Field(default_factory=dict)


class CertificateReport(BaseModel):
    status: Literal["Certified", "NotApplicable"]
    family: Literal["J", "H"]
    epsilon: float
    threshold: str
    threshold_expression: str
    m: str
    s1: Optional[str] = None
    S: Optional[str] = None
    reason: str


class WitnessSearchReport(BaseModel):
    found: bool
    margin: float
    restarts: int
    seed: int
    witness: Optional[Dict[str, float]] = None
    residuals: Dict[str, float] = Field(default_factory=dict)


class ConstantsReport(BaseModel):
    eps_J: str
    eps_H: str
    eps_H_printed: str
    eps_H_discrepancy: str
    eps_H_flagged: bool
    eps_J_identity_holds: bool
    eps_H_identity_holds: bool
    digits: int


class IsometryReport(BaseModel):
    isometry_type: IsometryType
    translation_length: float
    charpoly: str
    spectral_radius: float
    cyclotomic_orders: List[int] = Field(default_factory=list)
    fixed_ray: Optional[List[str]] = None


class ProfileRow(BaseModel):
    n: int
    delta: Optional[int]
    ball_size: int
    truncated: bool


class DistortionProfile(BaseModel):
    """Measured distortion function of one element."""

    group: str
    element: str
    rows: List[ProfileRow]
    truncated: bool
    stable_length: Optional[float] = None
    finite_order: Optional[int] = None
    membership_verified: bool = True
    power_lengths: Dict[int, int] = Field(default_factory=dict)

    @property
    def deltas(self) -> List[Optional[int]]:
        return [row.delta for row in self.rows]


class WitnessReport(BaseModel):
    kind: str
    word: str
    letter_length: int
    block_count: int
    verified: bool
    target: str
    parameters: Dict[str, Any] = Field(default_factory=dict)


class HomeoGrowthReport(BaseModel):
    k: int
    ell: int
    checked: int
    skipped: int
    violations: int
    max_ratio: float


class RunReport(BaseModel):
    """Envelope written by every CLI command.

    `config` is the ExperimentConfig without `output` and `format`: where and how
    the report is written does not change the result, and leaving them out keeps
    reports of the same run byte-identical across destinations.
    """

    schema_version: str
    command: str
    config: Dict[str, Any]
    versions: Dict[str, str]
    seed: int
    caps: Dict[str, int]
    truncated: bool = False
    result: Any = None


class ExperimentConfig(BaseModel):
    """Everything a CLI run depends on; embedded in its report minus output and format."""

    command: str
    params: Dict[str, Any] = Field(default_factory=dict)
    caps: Dict[str, int] = Field(default_factory=dict)
    seed: int
    workers: int = 1
    output: Optional[str] = None
    format: Literal["json", "csv"] = "json"

    @field_validator("caps")
    @classmethod
    def _positive_caps(cls, value: Dict[str, int]) -> Dict[str, int]:
        bad = [name for name, cap in value.items() if cap < 1]
        if bad:
            raise ValueError(f"caps must be positive: {bad}")
        return value
