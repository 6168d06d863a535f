from .core import KinkSimulator
from .utils import DimensionLimitError, NumericalError

__all__ = [
    "DimensionLimitError",
    "KinkSimulator",
    "NumericalError",
]
