from .mpoly import MPoly, coeff_extract, grlex_key, mpoly_arith, variables_poly
from .qseries import PrecisionError, QSeries, euler_derivative, series_arith
from .rational import Scalar, render_scalar, to_scalar

__all__ = [
    "MPoly",
    "PrecisionError",
    "QSeries",
    "Scalar",
    "coeff_extract",
    "euler_derivative",
    "grlex_key",
    "mpoly_arith",
    "render_scalar",
    "series_arith",
    "to_scalar",
    "variables_poly",
]
