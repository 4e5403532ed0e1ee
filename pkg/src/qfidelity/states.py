"""Density matrices: validation, seeded random families and a text file format.

All generators draw from ``numpy.random.Generator(PCG64(seed))`` with
``seed`` a 64-bit unsigned integer, so outputs are bit-identical for a given
``(dim, rank, seed)`` on any platform numpy supports.  Complex Gaussians have
independent unit-variance real and imaginary parts.
"""

from __future__ import annotations

import enum
import io
import os
import re
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .errors import MatrixFormatError, ValidationError
from .matkernel import as_matrix, hermiticity_error, psd_tolerance, HERMITIAN_RTOL

TRACE_ATOL = 1e-12


class StateFamily(enum.Enum):
    MIXED_FULL_RANK = "mixed-full-rank"
    PURE = "pure"
    COMMUTING_PAIR = "commuting-pair"
    RANK_DEFICIENT = "rank-deficient"
    IDENTICAL_PAIR = "identical-pair"

    @property
    def is_pair(self) -> bool:
        return self in (StateFamily.COMMUTING_PAIR, StateFamily.IDENTICAL_PAIR)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix.  Build through :func:`validate`."""

    mat: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def qubits(self) -> int | None:
        k = self.dim.bit_length() - 1
        return k if k >= 1 and 1 << k == self.dim else None

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)


def validate(m) -> DensityMatrix:
    """Check that ``m`` is Hermitian, unit trace and PSD.

    All three checks run; the raised ValidationError lists every failure.
    """
    m = as_matrix(m)
    causes = []
    details = []
    herr = hermiticity_error(m)
    if herr > HERMITIAN_RTOL * np.linalg.norm(m):
        causes.append("not-hermitian")
        details.append(f"|A - A^H|_F = {herr:.3g}")
    tr = np.trace(m)
    if abs(tr - 1.0) > TRACE_ATOL:
        causes.append("trace-not-one")
        details.append(f"trace = {tr.real:.17g}{tr.imag:+.3g}i")
    herm = 0.5 * (m + m.conj().T)
    lam_min = np.linalg.eigvalsh(herm)[0]
    if lam_min < -psd_tolerance(m):
        causes.append("not-psd")
        details.append(f"min eigenvalue = {lam_min:.3g}")
    if causes:
        raise ValidationError(causes, "; ".join(details))
    m = m.copy()
    m.flags.writeable = False
    return DensityMatrix(m)


def _rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return re + 1j * im


def _check_dim(dim: int) -> int:
    dim = int(dim)
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    return dim


def _frozen(m: np.ndarray) -> DensityMatrix:
    m = np.ascontiguousarray(m)
    m.flags.writeable = False
    return DensityMatrix(m)


def random_density(dim: int, rank: int | None = None, seed: int = 0) -> DensityMatrix:
    """Ginibre-induced random state G G^H / Tr(G G^H), G of shape (dim, rank).

    ``rank`` defaults to ``dim`` (full rank).
    """
    dim = _check_dim(dim)
    rank = dim if rank is None else int(rank)
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must lie in [1, {dim}], got {rank}")
    g = _ginibre(_rng(seed), dim, rank)
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return _frozen(m / np.trace(m).real)


def random_pure(dim: int, seed: int = 0) -> DensityMatrix:
    return projector(random_state_vector(dim, seed))


def random_state_vector(dim: int, seed: int = 0) -> np.ndarray:
    """Normalized Gaussian vector; ``random_pure`` is its projector."""
    dim = _check_dim(dim)
    psi = _ginibre(_rng(seed), dim, 1)[:, 0]
    return psi / np.linalg.norm(psi)


def projector(psi) -> DensityMatrix:
    """|psi><psi| for a unit vector ``psi`` (not renormalized)."""
    psi = np.asarray(psi, dtype=np.complex128)
    m = np.outer(psi, psi.conj())
    return _frozen(0.5 * (m + m.conj().T))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(_ginibre(rng, dim, dim))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def commuting_pair_parts(dim: int, seed: int = 0):
    """Shared Haar eigenbasis ``u`` and the two eigenvalue vectors ``p, q``.

    ``p`` and ``q`` are independent draws from the flat Dirichlet distribution.
    """
    dim = _check_dim(dim)
    rng = _rng(seed)
    u = haar_unitary(dim, rng)
    p = rng.dirichlet(np.ones(dim))
    q = rng.dirichlet(np.ones(dim))
    return u, p, q


def random_commuting_pair(dim: int, seed: int = 0) -> tuple[DensityMatrix, DensityMatrix]:
    u, p, q = commuting_pair_parts(dim, seed)
    out = []
    for w in (p, q):
        m = (u * w) @ u.conj().T
        out.append(_frozen(0.5 * (m + m.conj().T)))
    return out[0], out[1]


def default_rank(dim: int) -> int:
    """Rank used for the rank-deficient family when none is given."""
    return max(1, dim // 2)


def sample_family(family: StateFamily | str, dim: int, seed: int = 0,
                  rank: int | None = None) -> tuple[DensityMatrix, DensityMatrix]:
    """Draw a ``(rho, sigma)`` pair from one of the test families.

    Single-state families draw the two states from independent child seeds.
    """
    family = StateFamily(family)
    if family is StateFamily.COMMUTING_PAIR:
        return random_commuting_pair(dim, seed)
    a, b = np.random.SeedSequence(seed).generate_state(2, np.uint64)
    if family is StateFamily.IDENTICAL_PAIR:
        rho = random_density(dim, rank, int(a))
        return rho, rho
    if family is StateFamily.PURE:
        return random_pure(dim, int(a)), random_pure(dim, int(b))
    if family is StateFamily.RANK_DEFICIENT:
        rank = default_rank(dim) if rank is None else rank
        return random_density(dim, rank, int(a)), random_density(dim, rank, int(b))
    return random_density(dim, None, int(a)), random_density(dim, None, int(b))


# -- text format -------------------------------------------------------------
#
#   dim n
#   a+bi a+bi ...      (n lines, n entries each)

_FLOAT = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_ENTRY = re.compile(rf"^({_FLOAT})([+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i$")


def format_entry(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def parse_entry(tok: str) -> complex:
    m = _ENTRY.match(tok)
    if not m:
        raise MatrixFormatError(f"bad matrix entry {tok!r}")
    return complex(float(m.group(1)), float(m.group(2)))


def dump_matrix(m, fh: TextIO) -> None:
    m = as_matrix(m)
    n = m.shape[0]
    fh.write(f"dim {n}\n")
    for row in m:
        fh.write(" ".join(format_entry(z) for z in row))
        fh.write("\n")


def dumps_matrix(m) -> str:
    buf = io.StringIO()
    dump_matrix(m, buf)
    return buf.getvalue()


def loads_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "dim" or not head[1].isdigit() or int(head[1]) < 1:
        raise MatrixFormatError(f"bad header line {lines[0]!r}, expected 'dim n'")
    n = int(head[1])
    if len(lines) != n + 1:
        raise MatrixFormatError(f"expected {n} rows, found {len(lines) - 1}")
    out = np.empty((n, n), dtype=np.complex128)
    for i, ln in enumerate(lines[1:]):
        toks = ln.split()
        if len(toks) != n:
            raise MatrixFormatError(f"row {i + 1} has {len(toks)} entries, expected {n}")
        out[i] = [parse_entry(t) for t in toks]
    return out


def write_matrix(path: str | os.PathLike, m) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        dump_matrix(m, fh)


def read_matrix(path: str | os.PathLike) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return loads_matrix(fh.read())


def read_density(path: str | os.PathLike) -> DensityMatrix:
    return validate(read_matrix(path))
