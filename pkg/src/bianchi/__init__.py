"""Bianchi polyhedron - fundamental polyhedra and homology of Bianchi groups.

A Python library and CLI that computes, in exact arithmetic, a fundamental
polyhedron for SL2 of the ring of integers of Q(sqrt(-m)) acting on
hyperbolic 3-space, the quotient cell complex, and from it the cuspidal
first homology and the Farrell supplement.
"""

__version__ = "0.1.0"
__author__ = "mberetvas"
__license__ = "MIT"

from bianchi.arithmetic.field import AlgInt, FieldCtx, FieldElem
from bianchi.core.models import AbelianGroup, DbRecord, RunConfig, TableRow
from bianchi.homology.invariants import PipelineResult, run_pipeline, table_row
from bianchi.utils.exceptions import (
    BianchiError,
    DatabaseError,
    DegenerateCollectionError,
    ExcludedFieldError,
    GeometryError,
    IdentificationError,
    InvalidFieldError,
    InvariantViolationError,
    NotSquareFreeError,
    UnmatchedCellError,
)

__all__ = [
    # Field
    "FieldCtx",
    "AlgInt",
    "FieldElem",
    # Models
    "AbelianGroup",
    "TableRow",
    "RunConfig",
    "DbRecord",
    # Pipeline
    "PipelineResult",
    "run_pipeline",
    "table_row",
    # Exceptions
    "BianchiError",
    "InvalidFieldError",
    "ExcludedFieldError",
    "NotSquareFreeError",
    "GeometryError",
    "DegenerateCollectionError",
    "IdentificationError",
    "UnmatchedCellError",
    "InvariantViolationError",
    "DatabaseError",
]
