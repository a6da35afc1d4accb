"""Exception types shared across the package."""

from __future__ import annotations


class GrowthLabError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(GrowthLabError, ValueError):
    """A constructor or probe parameter lies outside its mathematical domain."""


class ConstructionError(GrowthLabError):
    """An iterative sequence construction could not satisfy its constraints.

    Carries the level at which the selection failed and, when applicable,
    the admissible band the selector could not land in.
    """

    def __init__(self, message: str, *, level: int | None = None,
                 band: tuple[float, float] | None = None) -> None:
        super().__init__(message)
        self.level = level
        self.band = band


class SequenceIndexError(GrowthLabError, IndexError):
    """A quotient index lies outside the constructed range."""


class WeightDomainError(GrowthLabError, ValueError):
    """A weight function was evaluated beyond its representable domain."""


class DivergenceError(GrowthLabError, ArithmeticError):
    """A tail integral diverges; carries the observed growth witness."""

    def __init__(self, message: str, *, panel: int | None = None,
                 growth_ratio: float | None = None) -> None:
        super().__init__(message)
        self.panel = panel
        self.growth_ratio = growth_ratio
