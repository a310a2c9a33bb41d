"""arthurkit: exact combinatorics of local Arthur packets via extended
multi-segments for Sp(2n) and split SO(2n+1)."""

from .halfint import HalfInt, hi
from .core import (
    ArthurParameter,
    GroupSpec,
    MultiSegment,
    RhoLabel,
    Row,
    row,
    diagonal_restriction,
    equivalent,
    psi_of,
    render_pictograph,
    validate,
)
from .nonvanishing import is_nonzero
from .ldata import LData, compute_ldata, highest_derivative, socle_add

__all__ = [
    "HalfInt",
    "hi",
    "ArthurParameter",
    "GroupSpec",
    "MultiSegment",
    "RhoLabel",
    "Row",
    "row",
    "diagonal_restriction",
    "equivalent",
    "psi_of",
    "render_pictograph",
    "validate",
    "is_nonzero",
    "LData",
    "compute_ldata",
    "highest_derivative",
    "socle_add",
]
