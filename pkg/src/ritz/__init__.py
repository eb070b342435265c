"""Ritz variational method for nonlinear ODEs, checked against exact and
shooting solutions."""

from . import bratu, classic_problems, kinetics, numerics, oracle, ritz_engine, specfun
from .errors import (
    BranchCrossing,
    NoConvergence,
    NoSignChange,
    NoSolution,
    RatioOutOfRange,
    RitzError,
    ToleranceNotMet,
)

__version__ = "0.1.0"

__all__ = [
    "bratu",
    "classic_problems",
    "kinetics",
    "numerics",
    "oracle",
    "ritz_engine",
    "specfun",
    "BranchCrossing",
    "NoConvergence",
    "NoSignChange",
    "NoSolution",
    "RatioOutOfRange",
    "RitzError",
    "ToleranceNotMet",
]
