"""Exact constructions, counts and certificates for zero sets on Cartesian grids."""

from .polyring import (
    ParseError,
    Polynomial,
    RationalFunction,
    UniverseMismatch,
    eval_poly,
    parse_poly,
    partial_derivative,
    poly_arith,
    rf_is_zero,
)
from .grid import Axis, GridSpec

__version__ = "0.1.0"
