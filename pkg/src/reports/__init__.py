"""Report schemas."""

from src.reports.schemas import (
    CertificateReport,
    ConstantsReport,
    DegreeSequence,
    DistortionProfile,
    DynamicalDegreeEstimate,
    ExperimentConfig,
    GelfondReport,
    GrowthVerdict,
    HeightReport,
    HomeoGrowthReport,
    IsometryReport,
    LinearClassReport,
    PlaceValue,
    PMClassModel,
    ProfileRow,
    RunReport,
    WitnessReport,
    WitnessSearchReport,
    WordHeightReport,
)

__all__ = [
    "CertificateReport",
    "ConstantsReport",
    "DegreeSequence",
    "DistortionProfile",
    "DynamicalDegreeEstimate",
    "ExperimentConfig",
    "GelfondReport",
    "GrowthVerdict",
    "HeightReport",
    "HomeoGrowthReport",
    "IsometryReport",
    "LinearClassReport",
    "PlaceValue",
    "PMClassModel",
    "ProfileRow",
    "RunReport",
    "WitnessReport",
    "WitnessSearchReport",
    "WordHeightReport",
]
