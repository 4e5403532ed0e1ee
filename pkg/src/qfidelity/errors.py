"""Exception types raised across the package."""

import numpy as np


class MatrixError(ValueError):
    """Input is not a finite square complex matrix."""


class DimensionMismatchError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


class ConvergenceError(np.linalg.LinAlgError):
    """A dense eigen/singular value solver failed to converge."""


class SpectrumClampError(ValueError):
    """A spectrum that should be non-negative real is materially not.

    Raised when eigenvalues of a PSD product carry imaginary parts or negative
    real parts larger than the cleanup tolerance, which means either the inputs
    were not PSD or the solver returned garbage.
    """


class ValidationError(ValueError):
    """A matrix failed density-matrix validation.

    ``causes`` lists every failed check, drawn from ``not-hermitian``,
    ``trace-not-one`` and ``not-psd``; ``cause`` is the first of them.
    """

    def __init__(self, causes, detail=""):
        self.causes = tuple(causes)
        self.cause = self.causes[0]
        msg = ", ".join(self.causes)
        super().__init__(f"{msg}: {detail}" if detail else msg)


class MatrixFormatError(ValueError):
    """Text matrix file could not be parsed."""


class FidelityRangeError(ValueError):
    """A computed fidelity fell outside [-eps, 1 + eps]."""
