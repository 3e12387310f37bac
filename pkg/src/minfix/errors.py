"""Exception hierarchy shared across the package."""

from __future__ import annotations


class MinfixError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(MinfixError):
    """A vector's length does not match the system dimension."""


class InvalidSystem(MinfixError):
    """An operation required a valid system but validation failed."""


class InvalidPolicy(MinfixError):
    """A policy references an action index that does not exist."""


class NoFiniteFixedPoint(MinfixError):
    """The value-determination program is infeasible: the selected
    one-player map has no fixed point in R^d."""


class UnboundedBelow(MinfixError):
    """The value-determination program is unbounded: the selected
    one-player map has no smallest finite fixed point."""


class Undecidable(MinfixError):
    """The negative-cone radius test was inconclusive within its
    iteration cap (only possible for non-unit-gradient derivatives)."""


class InvariantBroken(MinfixError):
    """An internal algorithm invariant failed; indicates an upstream bug."""


class MonotonicityViolation(MinfixError):
    """Successive policy values failed to decrease strictly."""


class NormalizationTooLarge(MinfixError):
    """Canonical min-of-max form exceeded the configured term budget."""


class ParseError(MinfixError):
    """Syntax or static-semantics error in an input file."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {col}" if col is not None else "")
        super().__init__(message + where)
