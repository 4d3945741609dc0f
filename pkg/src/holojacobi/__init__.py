"""Exact symbolic validators for Jacobi, holomorphic Poisson and generalized structures."""
from .errors import (
    ChartMismatchError,
    CompatibilityError,
    DegeneracyError,
    DegreeError,
    ExtractionError,
    GeometryError,
    ParseError,
    UnknownIdentifierError,
    ValidationError,
)
from .expr import Chart, ScalarExpr, parse
from .report import EquivalenceReport, Report

__all__ = [
    "Chart",
    "ScalarExpr",
    "parse",
    "Report",
    "EquivalenceReport",
    "GeometryError",
    "ParseError",
    "UnknownIdentifierError",
    "ChartMismatchError",
    "DegreeError",
    "CompatibilityError",
    "ExtractionError",
    "DegeneracyError",
    "ValidationError",
]
