from __future__ import annotations

from typing import Optional, Sequence


class NumericalError(RuntimeError):
    """A solver failed; ``residuals`` carries whatever diagnostics were available."""

    def __init__(self, message: str, residuals: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.residuals = list(residuals) if residuals is not None else None


class DimensionLimitError(NumericalError):
    pass
