"""Exception hierarchy shared by every module in the package."""


class ExplainSimError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(ExplainSimError, ValueError):
    """An argument is outside the domain of the operation."""


class BeliefStateError(ExplainSimError, ValueError):
    """A belief is inconsistent with the number of nodes left to search."""


class ImpossibleFailureError(BeliefStateError):
    """A failed draw was observed although the belief made success certain."""


class InfeasiblePlacementError(ExplainSimError):
    """Not enough eligible nodes to place the requested overlap set."""
