"""Exact Landau-Ginzburg residue computations and mirror-identity checks."""

from .rings import MPoly, QSeries

__version__ = "0.1.0"
__all__ = ["MPoly", "QSeries", "__version__"]
