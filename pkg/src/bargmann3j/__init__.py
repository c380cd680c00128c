"""Wigner 3j-symbols: exact values, stationary-point geometry and leading-order asymptotics."""

from .exact import (
    ExactValue,
    InvalidConfig,
    bargmann_moment_3j,
    normalization_N,
    racah_3j,
)
from .geometry import (
    Branch,
    Classification,
    GeometryError,
    classify_configuration,
    stationarity_residual,
    stationary_point,
)
from .halfint import HalfInt, JmConfig, SelectionOutcome, SignedSqrtRational, parse_halfint, selection_rules
from .semiclassical import (
    AsymptoticResult,
    CausticError,
    Convention,
    SignConvention,
    asymptotic_3j,
    phase_S_closed_form,
    prefactor_check,
)

__all__ = [
    "AsymptoticResult",
    "Branch",
    "CausticError",
    "Classification",
    "Convention",
    "ExactValue",
    "GeometryError",
    "HalfInt",
    "InvalidConfig",
    "JmConfig",
    "SelectionOutcome",
    "SignConvention",
    "SignedSqrtRational",
    "asymptotic_3j",
    "bargmann_moment_3j",
    "classify_configuration",
    "normalization_N",
    "parse_halfint",
    "phase_S_closed_form",
    "prefactor_check",
    "racah_3j",
    "selection_rules",
    "stationarity_residual",
    "stationary_point",
]
