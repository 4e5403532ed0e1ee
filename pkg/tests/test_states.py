import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qfidelity import states
from qfidelity.errors import MatrixFormatError, ValidationError
from qfidelity.routes import fidelity
from qfidelity.states import StateFamily

DIMS = [1, 2, 4, 8, 16, 32, 64, 128, 256]


class TestValidate:
    def test_maximally_mixed(self):
        dm = states.validate(np.eye(2) / 2)
        assert dm.dim == 2 and dm.qubits == 1

    def test_trace(self):
        with pytest.raises(ValidationError) as exc:
            states.validate(np.diag([0.6, 0.6]))
        assert exc.value.cause == "trace-not-one"

    def test_psd(self):
        with pytest.raises(ValidationError) as exc:
            states.validate(np.diag([1.2, -0.2]))
        assert exc.value.causes == ("not-psd",)

    def test_hermitian(self):
        with pytest.raises(ValidationError) as exc:
            states.validate([[0.5, 0.1], [0.0, 0.5]])
        assert exc.value.cause == "not-hermitian"

    def test_reports_every_failure(self):
        with pytest.raises(ValidationError) as exc:
            states.validate(np.diag([2.0, -0.5]))
        assert exc.value.causes == ("trace-not-one", "not-psd")

    def test_result_is_read_only(self):
        dm = states.validate(np.eye(2) / 2)
        with pytest.raises(ValueError):
            dm.mat[0, 0] = 1

    def test_qubits_only_for_powers_of_two(self):
        assert states.validate(np.eye(3) / 3).qubits is None
        assert states.validate(np.eye(8) / 8).qubits == 3
        assert states.validate(np.eye(1)).qubits is None


class TestRandomDensity:
    def test_dim_one(self):
        np.testing.assert_array_equal(states.random_density(1, 1, 99).mat, [[1]])

    def test_deterministic(self):
        a = states.random_density(4, 4, 1234)
        b = states.random_density(4, 4, 1234)
        assert a.mat.tobytes() == b.mat.tobytes()

    def test_seeds_differ(self):
        assert not np.array_equal(states.random_density(4, seed=1).mat, states.random_density(4, seed=2).mat)

    def test_rank(self):
        w = np.linalg.eigvalsh(states.random_density(8, 2, 5).mat)
        assert np.sum(w > 1e-10) == 2
        assert np.all(np.abs(w[:6]) < 1e-10)

    @pytest.mark.parametrize("rank", [0, 5])
    def test_rank_out_of_range(self, rank):
        with pytest.raises(ValueError):
            states.random_density(4, rank, 0)

    def test_bad_seed(self):
        with pytest.raises(ValueError):
            states.random_density(2, seed=-1)

    @pytest.mark.parametrize("dim", [d for d in DIMS if d <= 64])
    def test_full_rank_is_definite(self, dim):
        # a degeneracy here would be a rare draw, not a bug: flag it
        mins = [np.linalg.eigvalsh(states.random_density(dim, seed=s).mat)[0] for s in range(20)]
        if min(mins) <= 1e-12:
            pytest.xfail(f"near-singular draw at dim {dim}: {min(mins):.3g}")
        assert min(mins) > 1e-12


class TestPure:
    def test_dim_one(self):
        np.testing.assert_allclose(states.random_pure(1, 3).mat, [[1]], atol=1e-15)

    @given(st.integers(1, 64), st.integers(0, 2**64 - 1))
    def test_projector(self, dim, seed):
        p = states.random_pure(dim, seed).mat
        assert np.max(np.abs(p @ p - p)) <= 1e-12
        assert abs(np.trace(p @ p) - 1) <= 1e-12


class TestCommutingPair:
    def test_dim_one(self):
        r, s = states.random_commuting_pair(1, 0)
        np.testing.assert_allclose(r.mat, [[1]], atol=1e-15)
        np.testing.assert_allclose(s.mat, [[1]], atol=1e-15)

    @given(st.integers(1, 32), st.integers(0, 2**32))
    def test_commute(self, dim, seed):
        r, s = states.random_commuting_pair(dim, seed)
        assert np.linalg.norm(r.mat @ s.mat - s.mat @ r.mat) <= 1e-12

    @pytest.mark.parametrize("dim", [2, 5, 16])
    def test_bhattacharyya(self, dim):
        _, p, q = states.commuting_pair_parts(dim, 77)
        r, s = states.random_commuting_pair(dim, 77)
        assert fidelity(r, s).raw == pytest.approx(np.sum(np.sqrt(p * q)) ** 2, abs=1e-10)

    def test_haar_unitary(self):
        u = states.haar_unitary(8, np.random.default_rng(0))
        np.testing.assert_allclose(u.conj().T @ u, np.eye(8), atol=1e-13)


@pytest.mark.parametrize("dim", DIMS)
def test_generators_validate(dim):
    for seed in range(100):
        states.validate(states.random_density(dim, seed=seed).mat)
        states.validate(states.random_density(dim, states.default_rank(dim), seed).mat)
        states.validate(states.random_pure(dim, seed).mat)
        for m in states.random_commuting_pair(dim, seed):
            states.validate(m.mat)


@pytest.mark.parametrize("family", list(StateFamily))
def test_sample_family(family):
    r, s = states.sample_family(family, 6, 3)
    r2, s2 = states.sample_family(family, 6, 3)
    assert r.mat.tobytes() == r2.mat.tobytes() and s.mat.tobytes() == s2.mat.tobytes()
    if family is StateFamily.IDENTICAL_PAIR:
        assert r is s
    if family is StateFamily.RANK_DEFICIENT:
        assert np.linalg.matrix_rank(r.mat, tol=1e-10) == 3


class TestFileFormat:
    def test_dim_one(self):
        assert states.dumps_matrix(np.eye(1)) == "dim 1\n1+0i\n"

    def test_entry_format(self):
        assert states.format_entry(0.1 - 2.5e-7j) == "0.10000000000000001-2.4999999999999999e-07i"
        assert states.parse_entry("0.10000000000000001-2.4999999999999999e-07i") == 0.1 - 2.5e-7j

    @given(st.lists(st.complex_numbers(allow_nan=False, allow_infinity=False), min_size=9, max_size=9))
    def test_round_trip_bit_exact(self, entries):
        m = np.array(entries, dtype=np.complex128).reshape(3, 3)
        back = states.loads_matrix(states.dumps_matrix(m))
        assert back.tobytes() == m.tobytes()

    def test_round_trip_negative_zero(self):
        m = np.array([[complex(-0.0, -0.0)]])
        assert states.loads_matrix(states.dumps_matrix(m)).tobytes() == m.tobytes()

    def test_file_round_trip(self, tmp_path):
        m = states.random_density(5, seed=8).mat
        path = tmp_path / "rho.txt"
        states.write_matrix(path, m)
        assert states.read_matrix(path).tobytes() == m.tobytes()
        assert path.read_bytes().decode("utf-8").startswith("dim 5\n")

    @pytest.mark.parametrize("text", [
        "", "dim x\n1+0i\n", "dim 2\n1+0i 0+0i\n", "dim 1\n1+0j\n", "dim 1\n1 0\n",
        "dim 1\nnan+0i\n", "size 1\n1+0i\n", "dim 2\n1+0i 0+0i\n0+0i\n",
    ])
    def test_rejects_malformed(self, text):
        with pytest.raises(MatrixFormatError):
            states.loads_matrix(text)

    def test_dump_to_stream(self):
        buf = io.StringIO()
        states.dump_matrix(np.diag([0.5, 0.5]), buf)
        assert buf.getvalue() == "dim 2\n0.5+0i 0+0i\n0+0i 0.5+0i\n"
