"""Forward and inverse spectral solver for Dirac systems with interior singularities."""

from ._core import (
    NumericalError,
    Problem,
    SpectralData,
    ValidationError,
    __version__,
    char_matrix,
    fundamental_matrix,
    reconstruct,
    spectral_data,
    weyl_function,
)

__all__ = [
    "NumericalError",
    "Problem",
    "SpectralData",
    "ValidationError",
    "__version__",
    "char_matrix",
    "fundamental_matrix",
    "reconstruct",
    "spectral_data",
    "weyl_function",
]
