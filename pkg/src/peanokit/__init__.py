"""Fractal Peano curves and their worst-case square-to-linear ratio."""

from .curve import (
    AccelerationClass,
    Cell,
    CornerMoment,
    CurveClass,
    FractalCurve,
    FractionSpec,
    Shape,
    ValidationReport,
    acceleration_class,
    classify,
    corner_moments,
    displacement,
    entry_exit,
    fraction_frame,
    fraction_shape,
    internal_corner_moments,
    is_turn,
    validate,
)
from .errors import InvalidCurveError, InvariantViolationError, ResourceCapError
from .geometry import (
    Point,
    Rational,
    SquareIsometry,
    apply_isometry,
    compose,
    isometry_from_code,
    squared_distance,
)

__version__ = "0.1.0"

__all__ = [
    "AccelerationClass",
    "Cell",
    "CornerMoment",
    "CurveClass",
    "FractalCurve",
    "FractionSpec",
    "InvalidCurveError",
    "InvariantViolationError",
    "Point",
    "Rational",
    "ResourceCapError",
    "Shape",
    "SquareIsometry",
    "ValidationReport",
    "acceleration_class",
    "apply_isometry",
    "classify",
    "compose",
    "corner_moments",
    "displacement",
    "entry_exit",
    "fraction_frame",
    "fraction_shape",
    "internal_corner_moments",
    "is_turn",
    "isometry_from_code",
    "squared_distance",
    "validate",
]
