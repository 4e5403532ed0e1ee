"""Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2.

Five interchangeable routes compute the same number:

``two_sqrtm``        two Hermitian square roots, trace of the outer one
``three_svd``        trace norm of sqrt(rho) sqrt(sigma), every step by SVD
``sqrtmh_eigvalsh``  Hermitian square root of rho, then eigenvalues only
``sqrtm_svd_svd``    as above with SVDs in place of eigensolvers
``eigvals``          sum of square roots of the eigenvalues of rho @ sigma

The last one needs a single general eigenvalue call and no eigenvectors,
because the spectrum of rho @ sigma equals that of sqrt(rho) sigma sqrt(rho).
``two_sqrtm`` is the reference everything else is compared against.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _kernels
from .errors import (
    DimensionMismatchError,
    FidelityRangeError,
    NotPSDError,
    SpectrumClampError,
)
from .matkernel import (
    CLAMP_RTOL,
    Spectrum,
    SpectrumKind,
    as_matrix,
    clamp_spectrum,
    eigvals_general,
    psd_tolerance,
    sqrtm_psd,
)
from .states import DensityMatrix, validate

RANGE_ATOL = 1e-9


class FidelityMethod(enum.Enum):
    TWO_SQRTM = "two_sqrtm"
    THREE_SVD = "three_svd"
    SQRTMH_EIGVALSH = "sqrtmh_eigvalsh"
    SQRTM_SVD_SVD = "sqrtm_svd_svd"
    EIGVALS = "eigvals"

    @property
    def label(self) -> str:
        """Legend label used in benchmark plots."""
        return _LABELS[self]


_LABELS = {
    FidelityMethod.TWO_SQRTM: "2x sqrtm",
    FidelityMethod.THREE_SVD: "3x svd",
    FidelityMethod.SQRTMH_EIGVALSH: "sqrtmh + eigvalsh",
    FidelityMethod.SQRTM_SVD_SVD: "sqrtm_svd + svd",
    FidelityMethod.EIGVALS: "eigvals",
}


@dataclass(frozen=True)
class FidelityValue:
    """Fidelity clamped to [0, 1]; ``raw`` keeps the unclamped number."""

    value: float
    method: FidelityMethod
    raw: float

    def __float__(self) -> float:
        return self.value


def _operands(rho, sigma) -> tuple[np.ndarray, np.ndarray]:
    r = (rho if isinstance(rho, DensityMatrix) else validate(rho)).mat
    s = (sigma if isinstance(sigma, DensityMatrix) else validate(sigma)).mat
    if r.shape != s.shape:
        raise DimensionMismatchError(
            f"dimension mismatch: {r.shape[0]} vs {s.shape[0]}"
        )
    return np.ascontiguousarray(r), np.ascontiguousarray(s)


def _finish(root_sum: float, method: FidelityMethod) -> FidelityValue:
    f = float(root_sum) ** 2
    if not (-RANGE_ATOL <= f <= 1.0 + RANGE_ATOL):
        raise FidelityRangeError(f"{method.value} produced F = {f!r}")
    return FidelityValue(min(max(f, 0.0), 1.0), method, f)


def fidelity_two_sqrtm(rho, sigma) -> FidelityValue:
    r, s = _operands(rho, sigma)
    return _finish(_kernels.fid_two_sqrtm(r, s), FidelityMethod.TWO_SQRTM)


def fidelity_three_svd(rho, sigma) -> FidelityValue:
    r, s = _operands(rho, sigma)
    return _finish(_kernels.fid_three_svd(r, s), FidelityMethod.THREE_SVD)


def fidelity_sqrtmh_eigvalsh(rho, sigma) -> FidelityValue:
    r, s = _operands(rho, sigma)
    return _finish(_kernels.fid_sqrtmh_eigvalsh(r, s), FidelityMethod.SQRTMH_EIGVALSH)


def fidelity_sqrtm_svd_svd(rho, sigma) -> FidelityValue:
    r, s = _operands(rho, sigma)
    return _finish(_kernels.fid_sqrtm_svd_svd(r, s), FidelityMethod.SQRTM_SVD_SVD)


def fidelity_eigvals(rho, sigma) -> FidelityValue:
    """Fidelity from the spectrum of ``rho @ sigma`` alone.

    The product is not Hermitian, so a general eigenvalue solver is used; its
    spectrum is non-negative real in exact arithmetic.  Rounding dust is
    cleaned up, while anything off the non-negative axis by more than
    ``1e-8`` of the spectral radius raises SpectrumClampError.
    """
    r, s = _operands(rho, sigma)
    t, worst = _kernels.fid_eigvals(r, s)
    if worst > CLAMP_RTOL:
        raise SpectrumClampError(
            f"spectrum of rho @ sigma off the non-negative axis by {worst:.3g} "
            "relative to its largest eigenvalue"
        )
    return _finish(t, FidelityMethod.EIGVALS)


METHODS: dict[FidelityMethod, Callable[..., FidelityValue]] = {
    FidelityMethod.TWO_SQRTM: fidelity_two_sqrtm,
    FidelityMethod.THREE_SVD: fidelity_three_svd,
    FidelityMethod.SQRTMH_EIGVALSH: fidelity_sqrtmh_eigvalsh,
    FidelityMethod.SQRTM_SVD_SVD: fidelity_sqrtm_svd_svd,
    FidelityMethod.EIGVALS: fidelity_eigvals,
}


def fidelity(rho, sigma, method: FidelityMethod | str = FidelityMethod.EIGVALS) -> FidelityValue:
    """Dispatch to one of the five routes; ``method`` may be the enum or its tag."""
    return METHODS[FidelityMethod(method)](rho, sigma)


def sqrt_fidelity(rho, sigma, method: FidelityMethod | str = FidelityMethod.EIGVALS) -> float:
    """Root fidelity sqrt(F), the convention some texts call fidelity."""
    return float(np.sqrt(fidelity(rho, sigma, method).value))


def all_methods(rho, sigma) -> dict[FidelityMethod, FidelityValue]:
    return {m: fn(rho, sigma) for m, fn in METHODS.items()}


def spread(values) -> float:
    """Largest pairwise difference among fidelity values."""
    v = [float(x) for x in values]
    return max(v) - min(v) if v else 0.0


# -- spectrum cyclicity ------------------------------------------------------

@dataclass(frozen=True)
class CyclicityReport:
    ok: bool
    max_deviation: float
    threshold: float

    def __bool__(self) -> bool:
        return self.ok


def match_spectra(x, y) -> float:
    """Max pairwise gap after optimally pairing two eigenvalue multisets.

    Pairing by minimum-cost assignment rather than by sort order keeps nearly
    tied real parts from swapping partners between the two lists.
    """
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"spectra of sizes {x.size} and {y.size}")
    if x.size == 0:
        return 0.0
    cost = np.abs(x[:, None] - y[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def check_cyclicity(a, b, tol: float = 1e-8) -> CyclicityReport:
    """Compare the spectra of ``a @ b`` and ``b @ a``.

    Passes when every matched eigenvalue pair differs by at most
    ``tol * max(1, |a b|_F)``.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    ab, ba = a @ b, b @ a
    dev = match_spectra(eigvals_general(ab).values, eigvals_general(ba).values)
    thr = tol * max(1.0, float(np.linalg.norm(ab)), float(np.linalg.norm(ba)))
    return CyclicityReport(dev <= thr, dev, thr)


def _root_spectrum(prod: np.ndarray) -> np.ndarray:
    raw = eigvals_general(prod).values
    lam = clamp_spectrum(Spectrum(raw)).values.real
    noise = float(max(np.abs(raw.imag).max(), -raw.real.min(), 0.0))
    return np.sqrt(_kernels.floor_eigenvalues(np.ascontiguousarray(lam), noise))


def check_mapped_cyclicity(a, b, tol: float = 1e-8) -> CyclicityReport:
    """Compare sqrt-mapped spectra of ``a @ b`` and ``b @ a`` for PSD inputs.

    Both spectra are cleaned with :func:`clamp_spectrum` before the square
    root, so a product that is not a PSD product surfaces as
    SpectrumClampError.  ``tol`` is absolute on the mapped values.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    for name, m in (("a", a), ("b", b)):
        lam = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        if lam[0] < -psd_tolerance(m):
            raise NotPSDError(f"{name} has eigenvalue {lam[0]:.3g}")
    dev = match_spectra(_root_spectrum(a @ b), _root_spectrum(b @ a))
    return CyclicityReport(dev <= tol, dev, tol)


def hermitian_form_roots(a, b) -> np.ndarray:
    """Eigenvalues of sqrt(sqrt(a) b sqrt(a)), ascending.

    This is the Hermitian arrangement (sqrt(b) sqrt(a))^H (sqrt(b) sqrt(a))
    whose square-root spectrum must coincide with that of ``a @ b``.
    """
    ra = sqrtm_psd(a)
    m = _kernels.hermitian_part(ra @ as_matrix(b) @ ra)
    return np.linalg.eigvalsh(sqrtm_psd(m))


def product_root_spectrum(a, b) -> Spectrum:
    """Sqrt-mapped, clamped spectrum of ``a @ b`` for PSD ``a``, ``b``."""
    a, b = as_matrix(a), as_matrix(b)
    return Spectrum(np.sort(_root_spectrum(a @ b)).astype(np.complex128),
                    SpectrumKind.NONNEGATIVE)
