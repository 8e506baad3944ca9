"""Exception types shared across the toolkit."""


class DilationLabError(Exception):
    """Base class for all toolkit errors."""


class PreconditionError(DilationLabError):
    """An operation was called on data that violates its mathematical
    preconditions (e.g. not a row contraction, not pure enough at the
    requested truncation degree). The message names the failing bound."""


class CharacterizationMismatch(DilationLabError):
    """The two independent characterizations of the maximal commuting piece
    disagreed beyond tolerance. Usually signals numerical rank instability;
    the tolerances need adjusting."""


class DiagonalizationError(DilationLabError):
    """Joint diagonalization of a commuting normal family failed to resolve
    eigenspaces within the allowed number of coefficient re-draws."""
