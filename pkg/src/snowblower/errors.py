"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class SnowblowerError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SnowblowerError):
    """Malformed ASCII map, tour JSON, or other input."""


class ValidationError(SnowblowerError):
    """Domain violates an assumption required by the planners.

    ``kind`` is one of ``"disconnected"``, ``"hole"``, ``"articulation"``,
    ``"garage"`` or ``"depth"``.
    """

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class ClassificationError(SnowblowerError):
    """A Voronoi cell is neither a line, a comb nor a double-sided comb."""


class PlanningError(SnowblowerError):
    """A planner could not build a tour fragment."""


class SimulationError(SnowblowerError):
    """A move is illegal or violates the depth bound.

    ``kind`` is one of ``"outside"``, ``"throw"``, ``"depth"`` or ``"start"``;
    ``index`` is the offending move index once the error leaves ``simulate``.
    """

    def __init__(self, kind: str, message: str, index: int | None = None):
        super().__init__(message)
        self.kind = kind
        self.index = index

    def __str__(self) -> str:
        base = super().__str__()
        return base if self.index is None else f"move {self.index}: {base}"


class OracleExhausted(SnowblowerError):
    """The exhaustive search hit its state or cost limit."""


class InfeasibleInstance(SnowblowerError):
    """No clearing tour exists for the instance."""
