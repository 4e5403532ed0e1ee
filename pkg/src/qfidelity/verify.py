"""Seeded property suites behind ``qfidelity verify``.

Each suite sweeps ``trials`` seeded draws per dimension and reports the worst
deviation it saw against its tolerance.  The same seed reproduces the same
deviations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import SpectrumClampError
from .routes import (
    METHODS,
    check_cyclicity,
    check_mapped_cyclicity,
    fidelity_eigvals,
    fidelity_two_sqrtm,
    hermitian_form_roots,
    product_root_spectrum,
)
from .matkernel import clamp_spectrum, eigvals_general
from .states import (
    StateFamily,
    commuting_pair_parts,
    haar_unitary,
    projector,
    random_commuting_pair,
    random_state_vector,
    sample_family,
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    cases: int

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name} cases={self.cases} "
                f"max_dev={float(self.max_deviation)!r} tol={float(self.tolerance)!r}")


def _seeds(seed: int, suite: int, dim: int, trials: int) -> Iterator[int]:
    ss = np.random.SeedSequence([seed, suite, dim])
    yield from (int(s) for s in ss.generate_state(trials, np.uint64))


def random_general(dim: int, seed: int) -> np.ndarray:
    """Ginibre matrix scaled by 1/sqrt(dim) (spectral radius about 1)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return g / np.sqrt(dim)


def _trace_sum(dim, seed):
    a = random_general(dim, seed)
    tr = np.trace(a)
    return abs(np.sum(eigvals_general(a).values) - tr) / (1.0 + abs(tr)), 1e-10


def _cyclic(dim, seed):
    a = random_general(dim, seed)
    b = random_general(dim, seed ^ 0x9E3779B97F4A7C15)
    tol = 1e-8
    rep = check_cyclicity(a, b, tol=tol)
    # report relative to max(1, |AB|_F) so the deviation compares against tol
    return rep.max_deviation * tol / rep.threshold, tol


def _mapped(dim, seed):
    rho, sigma = sample_family(StateFamily.MIXED_FULL_RANK, dim, seed)
    rep = check_mapped_cyclicity(rho.mat, sigma.mat, tol=1e-8)
    herm = hermitian_form_roots(rho.mat, sigma.mat)
    mapped = product_root_spectrum(rho.mat, sigma.mat).values.real
    return max(rep.max_deviation, float(np.max(np.abs(np.sort(herm) - mapped)))), 1e-8


_FAMILIES = tuple(StateFamily)


def _family_pair(dim, seed):
    fam = _FAMILIES[seed % len(_FAMILIES)]
    return sample_family(fam, dim, seed)


def _cross_method(dim, seed):
    rho, sigma = _family_pair(dim, seed)
    vals = [fn(rho, sigma).raw for fn in METHODS.values()]
    oracle = fidelity_two_sqrtm(rho, sigma).raw
    return max(max(vals) - min(vals), abs(fidelity_eigvals(rho, sigma).raw - oracle)), 1e-9


def _symmetry(dim, seed):
    rho, sigma = _family_pair(dim, seed)
    return abs(fidelity_eigvals(rho, sigma).raw - fidelity_eigvals(sigma, rho).raw), 1e-10


def _range(dim, seed):
    rho, sigma = _family_pair(dim, seed)
    worst = 0.0
    for fn in METHODS.values():
        f = fn(rho, sigma).raw
        worst = max(worst, -f, f - 1.0, 1.0 - fn(rho, rho).raw)
    return worst, 1e-10


def _commuting(dim, seed):
    _, p, q = commuting_pair_parts(dim, seed)
    rho, sigma = random_commuting_pair(dim, seed)
    expect = np.sum(np.sqrt(p * q)) ** 2
    return max(abs(fn(rho, sigma).raw - expect) for fn in METHODS.values()), 1e-10


def _pure(dim, seed):
    psi = random_state_vector(dim, seed)
    phi = random_state_vector(dim, seed ^ 0x5851F42D4C957F2D)
    rho, sigma = projector(psi), projector(phi)
    expect = abs(np.vdot(psi, phi)) ** 2
    return max(abs(fn(rho, sigma).raw - expect) for fn in METHODS.values()), 1e-10


def _unitary(dim, seed):
    rho, sigma = _family_pair(dim, seed)
    u = haar_unitary(dim, np.random.Generator(np.random.PCG64(seed)))
    ud = u.conj().T
    r2, s2 = u @ rho.mat @ ud, u @ sigma.mat @ ud
    r2, s2 = 0.5 * (r2 + r2.conj().T), 0.5 * (s2 + s2.conj().T)
    return abs(fidelity_eigvals(r2, s2).raw - fidelity_eigvals(rho, sigma).raw), 1e-9


def _nonneg(dim, seed):
    rho, sigma = _family_pair(dim, seed)
    try:
        clamp_spectrum(eigvals_general(rho.mat @ sigma.mat))
    except SpectrumClampError:
        return float("inf"), 0.0
    return 0.0, 0.0


SUITES: dict[str, Callable[[int, int], tuple[float, float]]] = {
    "trace-eigensum": _trace_sum,
    "spectrum-cyclicity": _cyclic,
    "mapped-cyclicity": _mapped,
    "cross-method-equality": _cross_method,
    "symmetry": _symmetry,
    "range": _range,
    "commuting-reduction": _commuting,
    "pure-reduction": _pure,
    "unitary-invariance": _unitary,
    "nonnegative-product-spectrum": _nonneg,
}


def run_suites(dims: Sequence[int], trials: int, seed: int = 0,
               names: Sequence[str] | None = None) -> list[SuiteResult]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    out = []
    for idx, (name, fn) in enumerate(SUITES.items()):
        if names is not None and name not in names:
            continue
        worst, tol, cases = 0.0, 0.0, 0
        for dim in dims:
            for s in _seeds(seed, idx, dim, trials):
                dev, tol = fn(dim, s)
                worst = max(worst, dev)
                cases += 1
        out.append(SuiteResult(name, worst <= tol, worst, tol, cases))
    return out
