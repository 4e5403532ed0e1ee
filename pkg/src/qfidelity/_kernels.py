"""Hot kernels on raw complex128 arrays.

Everything here is restricted to the numpy subset numba can compile; see
``_jit``.  Inputs are assumed C-contiguous complex128 and square, callers in
``matkernel`` and ``fidelity`` take care of that.  Each ``fid_*`` kernel
returns the *root sum* t = sum_i sqrt(lambda_i); the fidelity is t**2.
"""

import numpy as np

from ._jit import njit

EPS = np.finfo(np.float64).eps


@njit
def dagger(a):
    return np.ascontiguousarray(a.conj().T)


@njit
def hermitian_part(a):
    return 0.5 * (a + dagger(a))


# Eigenvalues that are zero in exact arithmetic come back as +-dust.  The
# negative and imaginary dust in a spectrum measures the solver noise of that
# very computation, so positive values within NOISE_WITNESS times it are
# treated as zero too.  BASE_FLOOR covers spectra with no visible dust.
NOISE_WITNESS = 16.0
BASE_FLOOR = 1.0


@njit
def spectrum_floor(w_real, noise):
    n = w_real.shape[0]
    scale = 0.0
    for i in range(n):
        if abs(w_real[i]) > scale:
            scale = abs(w_real[i])
    for i in range(n):
        if -w_real[i] > noise:
            noise = -w_real[i]
    return max(NOISE_WITNESS * noise, BASE_FLOOR * n * EPS * scale)


@njit
def floor_eigenvalues(w, noise):
    cut = spectrum_floor(w, noise)
    out = w.copy()
    for i in range(out.shape[0]):
        if out[i] <= cut:
            out[i] = 0.0
    return out


@njit
def cap_rank(w, rank):
    """Zero all but the ``rank`` largest entries of ``w``."""
    out = w.copy()
    n = out.shape[0]
    if rank >= n:
        return out
    order = np.argsort(out)
    for i in range(n - rank):
        out[order[i]] = 0.0
    return out


@njit
def root_sum(w, noise, rank):
    """Sum of sqrt over the ``rank`` largest values of a real spectrum.

    Dust at or below the floor is dropped.
    """
    w = cap_rank(w, rank)
    cut = spectrum_floor(w, noise)
    t = 0.0
    for i in range(w.shape[0]):
        if w[i] > cut:
            t += np.sqrt(w[i])
    return t


@njit
def psd_root_from(w, v):
    """sqrt of V diag(w) V^H with dust and negative eigenvalues floored."""
    w = floor_eigenvalues(w, 0.0)
    return (v * np.sqrt(w)) @ dagger(v)


@njit
def numerical_rank(w):
    w = floor_eigenvalues(w, 0.0)
    r = 0
    for i in range(w.shape[0]):
        if w[i] > 0.0:
            r += 1
    return r


@njit
def svd_eigenvalues(u, s, vh):
    # For Hermitian A = U S V^H, column pairs agree up to sign; the sign of
    # u_i^H v_i recovers the eigenvalue so negative dust is not folded upward.
    overlap = (np.conj(u) * np.conj(vh).T).real.sum(axis=0)
    return np.where(overlap >= 0.0, s, -s)


@njit
def sqrtm_eigh(a):
    w, v = np.linalg.eigh(a)
    return psd_root_from(w, v)


@njit
def sqrtm_svd(a):
    u, s, vh = np.linalg.svd(a)
    return psd_root_from(svd_eigenvalues(u, s, vh), u)


# The product routes below form M = sqrt(rho) sigma sqrt(rho).  Its rank is at
# most rank(rho), which the first decomposition already tells us for free, so
# structural zeros of M are dropped by rank rather than by magnitude: their
# dust is positive as often as not and sqrt turns eps into 1e-8.

@njit
def fid_two_sqrtm(rho, sigma):
    w, v = np.linalg.eigh(rho)
    r = psd_root_from(w, v)
    m = hermitian_part(r @ sigma @ r)
    w2, v2 = np.linalg.eigh(m)
    return np.trace(psd_root_from(cap_rank(w2, numerical_rank(w)), v2)).real


@njit
def fid_three_svd(rho, sigma):
    prod = sqrtm_svd(rho) @ sqrtm_svd(sigma)
    return np.sum(np.linalg.svd(prod)[1])


@njit
def fid_sqrtmh_eigvalsh(rho, sigma):
    w, v = np.linalg.eigh(rho)
    r = psd_root_from(w, v)
    m = hermitian_part(r @ sigma @ r)
    return root_sum(np.linalg.eigvalsh(m), 0.0, numerical_rank(w))


@njit
def fid_sqrtm_svd_svd(rho, sigma):
    u, s, vh = np.linalg.svd(rho)
    w = svd_eigenvalues(u, s, vh)
    r = psd_root_from(w, u)
    m = hermitian_part(r @ sigma @ r)
    u2, s2, vh2 = np.linalg.svd(m)
    return root_sum(svd_eigenvalues(u2, s2, vh2), 0.0, numerical_rank(w))


@njit
def product_spectrum_violation(lam):
    """Largest relative departure of ``lam`` from the non-negative reals."""
    scale = 0.0
    for i in range(lam.shape[0]):
        if abs(lam[i]) > scale:
            scale = abs(lam[i])
    if scale == 0.0:
        scale = 1.0
    worst = 0.0
    for i in range(lam.shape[0]):
        bad = max(abs(lam[i].imag), -lam[i].real) / scale
        if bad > worst:
            worst = bad
    return worst


@njit
def fid_eigvals(rho, sigma):
    """Root sum over the spectrum of rho @ sigma, plus its clamp violation."""
    lam = np.linalg.eigvals(rho @ sigma)
    worst = product_spectrum_violation(lam)
    noise = 0.0
    for i in range(lam.shape[0]):
        if abs(lam[i].imag) > noise:
            noise = abs(lam[i].imag)
    return root_sum(lam.real, noise, lam.shape[0]), worst


@njit
def naive_matmul(a, b):
    n, m = a.shape
    p = b.shape[1]
    out = np.zeros((n, p), dtype=np.complex128)
    for i in range(n):
        for k in range(m):
            aik = a[i, k]
            for j in range(p):
                out[i, j] += aik * b[k, j]
    return out
