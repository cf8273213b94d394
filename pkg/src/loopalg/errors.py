"""Exception hierarchy shared across the package.

Input mistakes (bad flags, preconditions, cutoff misuse) raise ValueError
subclasses; broken invariants detected mid-computation raise EngineError
subclasses.  The CLI maps the former to exit code 2 and the latter to 1.
"""

from __future__ import annotations


class EngineError(Exception):
    """Invariant violation detected during a computation."""


class DifferentialError(EngineError):
    """A scheduled differential fails d*d = 0 or is ill-defined on a page."""


class RangeIncompleteError(EngineError):
    """A requested slice cannot be closed inside the configured cutoffs."""


class OracleMismatchError(EngineError):
    """Two independent computations of the same quantity disagree."""


class CutoffError(ValueError):
    """A request exceeds the cutoffs an object was built with."""
