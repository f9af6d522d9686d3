"""Exception hierarchy shared across the package."""


class MacroqError(Exception):
    """Base class for all package-specific failures."""


class TruncationError(MacroqError):
    """Fock-space truncation or dimension budget is inadequate for the request."""


class StateValidationError(MacroqError):
    """A state violates one of its invariants (norm, trace, Hermiticity, PSD, tail)."""


class ConsistencyError(MacroqError):
    """Two internal evaluation routes disagree beyond tolerance.

    Raised when redundant formulations of the same quantity (alternative trace
    forms, operator vs phase-space pipelines, exact algebraic identities) fail
    to agree, which signals either inadequate truncation or an implementation
    bug rather than bad user input.
    """
