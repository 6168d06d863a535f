from .errors import DimensionLimitError, NumericalError

__all__ = ["DimensionLimitError", "NumericalError"]
