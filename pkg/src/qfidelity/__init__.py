"""Uhlmann fidelity between mixed quantum states by five interchangeable routes."""

from ._jit import BACKEND
from .errors import (
    ConvergenceError,
    DimensionMismatchError,
    FidelityRangeError,
    MatrixError,
    MatrixFormatError,
    NotHermitianError,
    NotPSDError,
    SpectrumClampError,
    ValidationError,
)
from .routes import (
    FidelityMethod,
    FidelityValue,
    all_methods,
    check_cyclicity,
    check_mapped_cyclicity,
    fidelity,
    fidelity_eigvals,
    fidelity_sqrtm_svd_svd,
    fidelity_sqrtmh_eigvalsh,
    fidelity_three_svd,
    fidelity_two_sqrtm,
    spread,
    sqrt_fidelity,
)
from .states import (
    DensityMatrix,
    StateFamily,
    random_commuting_pair,
    random_density,
    random_pure,
    read_matrix,
    validate,
    write_matrix,
)

__version__ = "0.1.0"
