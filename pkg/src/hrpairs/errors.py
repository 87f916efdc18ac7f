"""Typed errors shared across the package."""


class HRPairsError(Exception):
    """Base class for all errors raised by this package."""


class DegreeError(HRPairsError):
    """Graded degrees of the operands do not line up."""


class ConstructionError(HRPairsError):
    """A ring model could not be built from the given data.

    Carries a ``witness`` attribute with whatever detected the problem
    (a monomial that reduces two ways, a basis triple violating
    associativity, ...).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SingularPairingError(HRPairsError):
    """Class division hit a singular multiplication map.

    ``witness`` holds a kernel vector of the map when one is available.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConsistencyError(HRPairsError):
    """Two computations that must agree did not (internal cross-check)."""


class ConfigError(HRPairsError):
    """Malformed user-facing input: spec files, CLI expressions, options."""
