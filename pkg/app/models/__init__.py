"""Data models for grids, couplings, field pairs and solver results"""
from app.models.enums import (
    Branch,
    Command,
    Conclusion,
    Hypothesis,
    InitKind,
    Parity,
    PerturbationKind,
    SolitonMethod,
    Verdict,
)
from app.models.grid import RadialGrid, ScalarField
from app.models.couplings import Couplings, FieldPair, PeriodicModulation, PerturbationProfile
from app.models.reports import (
    Barycenter,
    ComparisonReport,
    ContinuationRecord,
    GammaPoint,
    GroundStateReport,
    SolitonSolution,
    SpectrumReport,
    SynchronizedSolution,
    ThresholdReport,
)

__all__ = [
    "Branch",
    "Command",
    "Conclusion",
    "Hypothesis",
    "InitKind",
    "Parity",
    "PerturbationKind",
    "SolitonMethod",
    "Verdict",
    "RadialGrid",
    "ScalarField",
    "Couplings",
    "FieldPair",
    "PeriodicModulation",
    "PerturbationProfile",
    "Barycenter",
    "ComparisonReport",
    "ContinuationRecord",
    "GammaPoint",
    "GroundStateReport",
    "SolitonSolution",
    "SpectrumReport",
    "SynchronizedSolution",
    "ThresholdReport",
]
