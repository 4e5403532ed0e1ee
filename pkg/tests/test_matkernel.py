import numpy as np
import pytest
from hypothesis import given, strategies as st

from qfidelity import matkernel as mk
from qfidelity.errors import (
    DimensionMismatchError,
    MatrixError,
    NotHermitianError,
    NotPSDError,
    SpectrumClampError,
)
from qfidelity.matkernel import Spectrum, SpectrumKind

from conftest import ginibre, random_hermitian, random_psd


def triple_loop(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


class TestMatmul:
    def test_identity(self):
        a = ginibre(3, 1)
        np.testing.assert_array_equal(mk.matmul(np.eye(3), a), a)

    def test_diagonal(self):
        np.testing.assert_array_equal(mk.matmul(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 8]))

    def test_against_triple_loop(self):
        a, b = ginibre(4, 2), ginibre(4, 3)
        expect = np.array(triple_loop(a.tolist(), b.tolist()))
        np.testing.assert_allclose(mk.matmul(a, b), expect, rtol=0, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            mk.matmul(np.eye(2), np.eye(3))

    @pytest.mark.parametrize("bad", [np.ones((2, 3)), np.ones(4), np.array([[np.nan]]), np.zeros((0, 0))])
    def test_rejects_non_matrices(self, bad):
        with pytest.raises(MatrixError):
            mk.as_matrix(bad)


class TestEigh:
    def test_diagonal(self):
        w, v = mk.eigh(np.diag([2.0, 1.0]))
        np.testing.assert_allclose(w, [1, 2])
        np.testing.assert_allclose(np.abs(v), [[0, 1], [1, 0]], atol=1e-15)

    def test_two_by_two(self):
        w, _ = mk.eigh([[2, 1], [1, 2]])
        np.testing.assert_allclose(w, [1, 3], atol=1e-14)

    def test_residual_random_8(self):
        a = random_hermitian(8, 5)
        w, v = mk.eigh(a)
        assert np.all(np.diff(w) >= 0)
        assert np.linalg.norm(a @ v - v * w) <= 1e-10 * np.linalg.norm(a)
        assert np.linalg.norm(v.conj().T @ v - np.eye(8)) <= 1e-12

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            mk.eigh([[1, 2], [0, 1]])


class TestEigvalsGeneral:
    def test_diagonal(self):
        s = mk.eigvals_general(np.diag([5, 2 + 3j]))
        assert s.kind is SpectrumKind.GENERAL
        assert sorted(s.values, key=lambda z: (z.real, z.imag)) == [2 + 3j, 5]

    def test_nilpotent(self):
        np.testing.assert_array_equal(mk.eigvals_general([[0, 1], [0, 0]]).values, [0, 0])

    def test_trace_and_determinant(self):
        a = ginibre(6, 7)
        lam = mk.eigvals_general(a).values
        assert abs(lam.sum() - np.trace(a)) <= 1e-10
        det = np.linalg.det(a)
        assert abs(np.prod(lam) - det) <= 1e-8 * abs(det)

    @given(st.integers(1, 32), st.integers(0, 2**32))
    def test_sum_equals_trace(self, dim, seed):
        a = ginibre(dim, seed)
        tr = np.trace(a)
        assert abs(mk.eigvals_general(a).values.sum() - tr) <= 1e-10 * (1 + abs(tr))


class TestSvd:
    def test_identity(self):
        np.testing.assert_array_equal(mk.svd(np.eye(3)).singular_values, [1, 1, 1])

    def test_diagonal_real(self):
        np.testing.assert_allclose(mk.svd(np.diag([3.0, -4.0])).singular_values, [4, 3])

    def test_reconstruction(self):
        a = ginibre(8, 11)
        u, s, v = mk.svd(a)
        assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
        assert np.linalg.norm(u * s @ v.conj().T - a) <= 1e-10 * np.linalg.norm(a)


class TestSqrtm:
    @pytest.mark.parametrize("route", ["eigh", "svd"])
    def test_diagonal(self, route):
        np.testing.assert_allclose(mk.sqrtm_psd(np.diag([4.0, 9.0]), route), np.diag([2, 3]), atol=1e-15)

    @pytest.mark.parametrize("route", ["eigh", "svd"])
    def test_two_by_two(self, route):
        r3 = np.sqrt(3)
        expect = 0.5 * np.array([[r3 + 1, r3 - 1], [r3 - 1, r3 + 1]])
        np.testing.assert_allclose(mk.sqrtm_psd([[2, 1], [1, 2]], route), expect, atol=1e-14)

    def test_routes_agree(self):
        a = random_psd(16, 13)
        a /= np.trace(a).real
        np.testing.assert_allclose(mk.sqrtm_psd(a, "eigh"), mk.sqrtm_psd(a, "svd"), rtol=0, atol=1e-9)

    @pytest.mark.parametrize("route", ["eigh", "svd"])
    def test_square_back(self, route):
        a = random_psd(32, 17)
        s = mk.sqrtm_psd(a, route)
        assert np.linalg.norm(s @ s - a) <= 1e-9 * np.linalg.norm(a)
        assert np.linalg.norm(s - s.conj().T) <= 1e-12 * np.linalg.norm(s)
        assert np.linalg.eigvalsh(s)[0] >= -1e-12

    @pytest.mark.parametrize("route", ["eigh", "svd"])
    def test_rejects_negative(self, route):
        with pytest.raises(NotPSDError):
            mk.sqrtm_psd(np.diag([1.0, -0.1]), route)

    def test_tolerates_rounding_negatives(self):
        s = mk.sqrtm_psd(np.diag([1.0, -1e-14]))
        np.testing.assert_array_equal(s, np.diag([1.0, 0.0]))

    def test_unknown_route(self):
        with pytest.raises(ValueError):
            mk.sqrtm_psd(np.eye(2), "schur")


class TestTraceNorm:
    def test_psd_is_trace(self):
        a = random_psd(6, 19)
        assert mk.trace_norm(a) == pytest.approx(np.trace(a).real, rel=1e-12)

    def test_diagonal(self):
        assert mk.trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0, abs=1e-15)

    def test_against_gram_eigenvalues(self):
        a = ginibre(8, 23)
        gram = np.linalg.eigvalsh(a.conj().T @ a)
        assert mk.trace_norm(a) == pytest.approx(np.sum(np.sqrt(np.clip(gram, 0, None))), abs=1e-10)
        assert mk.trace_norm(a) == np.sum(mk.svd(a).singular_values)


class TestClampSpectrum:
    def test_imaginary_dust(self):
        out = mk.clamp_spectrum(Spectrum(np.array([1e-17j, 0.5])), scale=0.5)
        np.testing.assert_array_equal(out.values, [0, 0.5])
        assert out.kind is SpectrumKind.NONNEGATIVE

    def test_negative_dust(self):
        out = mk.clamp_spectrum(Spectrum(np.array([-1e-20, 0.3])))
        np.testing.assert_array_equal(out.values, [0, 0.3])

    def test_rejects_material_negative(self):
        with pytest.raises(SpectrumClampError):
            mk.clamp_spectrum(Spectrum(np.array([-0.01, 0.3])), scale=0.3)

    def test_rejects_material_imaginary(self):
        with pytest.raises(SpectrumClampError):
            mk.clamp_spectrum(Spectrum(np.array([0.1 + 0.01j, 0.3])))

    def test_zero_spectrum(self):
        out = mk.clamp_spectrum(Spectrum(np.zeros(3, dtype=complex)))
        np.testing.assert_array_equal(out.values, [0, 0, 0])

    @given(st.integers(1, 24), st.integers(0, 2**32))
    def test_psd_products_never_rejected(self, dim, seed):
        a, b = random_psd(dim, seed), random_psd(dim, seed + 1)
        out = mk.clamp_spectrum(mk.eigvals_general(a @ b))
        assert out.kind is SpectrumKind.NONNEGATIVE
        assert np.all(out.values.real >= 0) and np.all(out.values.imag == 0)


def test_spectrum_sorted():
    s = Spectrum(np.array([1 + 1j, 1 - 1j, -2]))
    np.testing.assert_array_equal(s.sorted(), [-2, 1 - 1j, 1 + 1j])
    assert len(s) == 3
