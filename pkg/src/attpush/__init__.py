"""Attentional Push augmentation of saliency maps and fixation-based evaluation."""

from attpush.errors import (
    AttPushError,
    DegenerateDirection,
    DimensionMismatch,
    EmptyInput,
    NoFixations,
    ParseError,
    SchemaVersionMismatch,
    TimeBeforeOnset,
    ZeroVariance,
)
from attpush.gridmap import GridMap, combine, minmax_normalize, skewness, standardize

__version__ = "0.1.0"

__all__ = [
    "AttPushError",
    "DegenerateDirection",
    "DimensionMismatch",
    "EmptyInput",
    "GridMap",
    "NoFixations",
    "ParseError",
    "SchemaVersionMismatch",
    "TimeBeforeOnset",
    "ZeroVariance",
    "__version__",
    "combine",
    "minmax_normalize",
    "skewness",
    "standardize",
]
