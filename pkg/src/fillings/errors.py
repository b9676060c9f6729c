"""Exception types shared across the package."""

from __future__ import annotations


class FillingError(ValueError):
    """Input does not satisfy an operation's precondition."""


class BoundaryError(FillingError):
    """The boundary of a complex is not the single cycle an operation needs."""


class SeparationError(FillingError):
    """A vertex set fails to separate the two boundary arcs.

    ``witness`` is a path from L to R avoiding the set.
    """

    def __init__(self, message: str, witness: list[int]):
        super().__init__(message)
        self.witness = witness


class InvariantError(RuntimeError):
    """An internal invariant was violated; indicates a bug, not bad input."""


class BudgetExceeded(RuntimeError):
    """Search or enumeration ran out of its node or time budget."""

    def __init__(self, message: str, nodes: int, seconds: float):
        super().__init__(message)
        self.nodes = nodes
        self.seconds = seconds


class MeshError(RuntimeError):
    """A stage of the meshing pipeline failed. ``stage`` names it."""

    def __init__(self, stage: str, message: str, detail=None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.detail = detail
