"""Dense complex linear algebra used by the fidelity routes.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128; use
:func:`as_matrix` to coerce and check user input.  Decompositions bind to
LAPACK through numpy, the square-root assembly and spectrum cleanup go through
the kernels in :mod:`qfidelity._kernels`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import (
    ConvergenceError,
    DimensionMismatchError,
    MatrixError,
    NotHermitianError,
    NotPSDError,
    SpectrumClampError,
)

HERMITIAN_RTOL = 1e-10
PSD_RTOL = 1e-10
CLAMP_RTOL = 1e-8


class SpectrumKind(enum.Enum):
    GENERAL = "general-complex"
    REAL = "real"
    NONNEGATIVE = "nonnegative-real"


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset (with multiplicity) of a square matrix."""

    values: np.ndarray
    kind: SpectrumKind = SpectrumKind.GENERAL

    def __len__(self) -> int:
        return len(self.values)

    def sorted(self) -> np.ndarray:
        """Values ordered by real part, then imaginary part."""
        v = np.asarray(self.values)
        order = np.lexsort((v.imag, v.real))
        return v[order]


class EighResult(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


class SvdResult(NamedTuple):
    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a C-contiguous complex128 square matrix.

    Raises MatrixError for non-square, empty or non-finite input.
    """
    m = np.ascontiguousarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise MatrixError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise MatrixError("matrix has non-finite entries")
    return m


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


def hermiticity_error(a: np.ndarray) -> float:
    """Frobenius norm of the anti-Hermitian part ``a - a^H``."""
    return float(np.linalg.norm(a - a.conj().T))


def is_hermitian(a: np.ndarray) -> bool:
    return hermiticity_error(a) <= HERMITIAN_RTOL * np.linalg.norm(a)


def psd_tolerance(a: np.ndarray) -> float:
    return PSD_RTOL * max(1.0, abs(np.trace(a).real))


def _require_hermitian(a: np.ndarray) -> None:
    err = hermiticity_error(a)
    if err > HERMITIAN_RTOL * np.linalg.norm(a):
        raise NotHermitianError(f"|A - A^H|_F = {err:.3g} exceeds tolerance")


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return a @ b


def eigh(a) -> EighResult:
    """Hermitian eigendecomposition, eigenvalues ascending.

    The input must already be Hermitian to within ``1e-10 |A|_F``; symmetrize
    products such as ``R @ S @ R`` with :func:`hermitian_part` first.
    """
    a = as_matrix(a)
    _require_hermitian(a)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return EighResult(w, v)


def eigvals_general(a) -> Spectrum:
    a = as_matrix(a)
    try:
        lam = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return Spectrum(lam.astype(np.complex128), SpectrumKind.GENERAL)


def svd(a) -> SvdResult:
    a = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return SvdResult(u, s, vh.conj().T)


def hermitian_part(a) -> np.ndarray:
    return _kernels.hermitian_part(as_matrix(a))


def sqrtm_psd(a, route: str = "eigh") -> np.ndarray:
    """Positive square root of a Hermitian PSD matrix.

    ``route`` selects the decomposition: ``"eigh"`` (Hermitian eigensolver) or
    ``"svd"``.  Eigenvalues below the rounding floor, including small negative
    ones, are treated as zero; an eigenvalue below ``-1e-10 max(1, Tr A)``
    raises NotPSDError.
    """
    a = as_matrix(a)
    _require_hermitian(a)
    try:
        if route == "eigh":
            w, basis = np.linalg.eigh(a)
        elif route == "svd":
            u, s, vh = np.linalg.svd(a)
            w, basis = _kernels.svd_eigenvalues(u, s, vh), u
        else:
            raise ValueError(f"unknown square-root route {route!r}")
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    if w.min() < -psd_tolerance(a):
        raise NotPSDError(f"minimum eigenvalue {w.min():.3g} is materially negative")
    return _kernels.psd_root_from(np.ascontiguousarray(w), np.ascontiguousarray(basis))


def trace_norm(a) -> float:
    return float(np.sum(svd(a).singular_values))


def clamp_spectrum(s: Spectrum, scale: float | None = None) -> Spectrum:
    """Project the spectrum of a PSD product onto the non-negative reals.

    Imaginary parts and negative real parts no larger than ``1e-8 * scale`` are
    zeroed; anything larger raises SpectrumClampError.  ``scale`` defaults to
    the largest eigenvalue modulus (1 for an all-zero spectrum).
    """
    v = np.asarray(s.values, dtype=np.complex128)
    if scale is None:
        scale = float(np.max(np.abs(v))) if len(v) else 0.0
        if scale == 0.0:
            scale = 1.0
    tol = CLAMP_RTOL * scale
    im_bad = np.abs(v.imag) > tol
    re_bad = v.real < -tol
    if np.any(im_bad) or np.any(re_bad):
        worst = max(np.max(np.abs(v.imag)), -np.min(v.real))
        raise SpectrumClampError(
            f"eigenvalue off the non-negative axis by {worst:.3g} (tolerance {tol:.3g})"
        )
    re = np.where(v.real < 0.0, 0.0, v.real)
    return Spectrum(re.astype(np.complex128), SpectrumKind.NONNEGATIVE)
