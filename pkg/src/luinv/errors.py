"""Exception types shared across the package."""


class Error(Exception):
    """Base class for all package errors."""


class ParseError(Error):
    """Malformed textual input (arrays, states, permutation files)."""


class SymbolRangeError(ParseError):
    """A symbol lies outside the declared alphabet {0..d-1}."""


class ArgumentError(Error):
    """An argument violates an operation precondition."""


class DuplicateRowError(Error):
    """An array expected to have distinct rows contains a repeat."""


class CatalogError(Error):
    """Unknown catalog state name."""


class CapacityError(Error):
    """A dense expansion or contraction exceeds the configured cap."""


class WitnessError(Error):
    """A witness object violates its structural invariants."""
