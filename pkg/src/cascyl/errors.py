"""Exception types shared across the package."""

from __future__ import annotations

__all__ = ["ToleranceError", "GammaPoleError", "IntegralDivergenceError"]


class ToleranceError(RuntimeError):
    """Requested tolerance could not be met; carries the partial result."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class GammaPoleError(ValueError):
    """A gamma-function argument hit a nonpositive integer."""


class IntegralDivergenceError(ValueError):
    """Parameters lie outside the convergence domain of a defining integral."""
