"""Custom exceptions for the Bianchi polyhedron pipeline.

This module defines application-specific exceptions so that invalid input,
incomplete geometric data and broken invariants are told apart by the CLI.
"""


class BianchiError(Exception):
    """Base exception for all errors raised by this package."""
    pass


class InvalidFieldError(BianchiError, ValueError):
    """Raised when m does not define a supported imaginary quadratic field."""
    pass


class ExcludedFieldError(InvalidFieldError):
    """Raised for m = 1 and m = 3, whose rings have extra units."""
    pass


class NotSquareFreeError(InvalidFieldError):
    """Raised when m is not a square-free positive integer."""
    pass


class GeometryError(BianchiError):
    """Raised when a geometric object is undefined for the given hemispheres."""
    pass


class DegenerateCollectionError(BianchiError):
    """Raised when the hemisphere list does not yet cover the complex plane.

    The polyhedron loop treats this as a signal to raise the norm horizon.
    """
    pass


class IdentificationError(BianchiError):
    """Raised when a matrix cannot act on a point or is not in SL2(O)."""
    pass


class UnmatchedCellError(BianchiError):
    """Raised when a cell of the fundamental patch has no partner under the group."""
    pass


class InvariantViolationError(BianchiError):
    """Raised when a mathematical invariant checked by the pipeline fails."""
    pass


class DatabaseError(BianchiError):
    """Raised when database files cannot be read, parsed or written."""
    pass
