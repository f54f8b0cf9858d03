"""Exception types shared across the package.

Two failure families matter to callers: bad input (PreconditionError,
DegenerateInputError, plain ValueError) and violations of invariants the
library relies on for correctness (InvariantViolation).  The CLI maps the
first family to exit code 1 and the second to exit code 2.
"""
from __future__ import annotations


class WPolyError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(WPolyError):
    """An operation was called on input outside its contract."""


class DegenerateInputError(WPolyError):
    """Geometric input with no valid polygon (too few points, collinear)."""


class InvariantViolation(WPolyError):
    """A derived invariant failed; indicates a genuine internal problem.

    Raised when two independent computations of the same quantity
    disagree, or when a structural guarantee (integrality, existence of
    a determinant-d triple, case identities) does not hold.
    """
