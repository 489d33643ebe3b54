"""Exception hierarchy shared across the package."""


class GGCError(Exception):
    """Base class for all package errors."""


class GraphError(GGCError):
    """Invalid graph construction or an unknown generator family."""


class ParseError(GraphError):
    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)


class CapExceeded(GraphError):
    """Object count n + m is above the configured cap."""


class IllegalMove(GGCError):
    pass


class BudgetExceeded(GGCError):
    """A solver or verifier ran out of its node budget."""

    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"node budget exhausted after {nodes} nodes")


class InconsistencyError(GGCError):
    """A computed value contradicts a proven bound.

    Raised when, e.g., Alice still loses at the greedy upper bound, or a
    corpus row violates gcol' <= gcol''.
    """


class StrategyError(GGCError):
    """A strategy was used outside its preconditions."""


class CacheError(GGCError):
    pass
