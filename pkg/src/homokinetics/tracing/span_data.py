from __future__ import annotations

import abc
from typing import Any


class SpanData(abc.ABC):
    """
    Represents span data in the trace.
    """

    @abc.abstractmethod
    def export(self) -> dict[str, Any]:
        """Export the span data as a dictionary."""
        pass

    @property
    @abc.abstractmethod
    def type(self) -> str:
        """Return the type of the span."""
        pass


class ReplicaSpanData(SpanData):
    """
    Represents one simulated replica of a particle run.
    """

    __slots__ = ("scenario", "replica", "particles", "rows", "steps", "collisions")

    def __init__(self, scenario: str, replica: int, particles: int) -> None:
        self.scenario = scenario
        self.replica = replica
        self.particles = particles
        self.rows = 0
        self.steps = 0
        self.collisions = 0

    @property
    def type(self) -> str:
        return "replica"

    def export(self) -> dict[str, Any]:
        return {
            "type": self.type,
            "scenario": self.scenario,
            "replica": self.replica,
            "particles": self.particles,
            "rows": self.rows,
            "steps": self.steps,
            "collisions": self.collisions,
        }


class AssemblySpanData(SpanData):
    """
    Represents the quadrature assembly of a linearized operator matrix.
    """

    __slots__ = ("gamma", "angular", "basis_size", "points", "quad_error")

    def __init__(self, gamma: float, angular: str, basis_size: int) -> None:
        self.gamma = gamma
        self.angular = angular
        self.basis_size = basis_size
        self.points = 0
        self.quad_error: float | None = None

    @property
    def type(self) -> str:
        return "assembly"

    def export(self) -> dict[str, Any]:
        return {
            "type": self.type,
            "gamma": self.gamma,
            "angular": self.angular,
            "basis_size": self.basis_size,
            "points": self.points,
            "quad_error": self.quad_error,
        }


class FitSpanData(SpanData):
    """
    Represents a power-law fit of one series column.
    """

    __slots__ = ("column", "coordinate", "slope", "points")

    def __init__(self, column: str, coordinate: str) -> None:
        self.column = column
        self.coordinate = coordinate
        self.slope: float | None = None
        self.points = 0

    @property
    def type(self) -> str:
        return "fit"

    def export(self) -> dict[str, Any]:
        return {
            "type": self.type,
            "column": self.column,
            "coordinate": self.coordinate,
            "slope": self.slope,
            "points": self.points,
        }
