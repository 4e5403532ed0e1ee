"""The numba kernels and the pure-numpy fallback must agree."""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from qfidelity import _jit, states
from qfidelity import routes as fm

SCRIPT = """
import json
from qfidelity import _jit, states, routes
out = {"backend": _jit.BACKEND, "values": []}
for i, fam in enumerate(states.StateFamily):
    for dim in (2, 5, 16):
        r, s = states.sample_family(fam, dim, 400 + i)
        out["values"].append([v.raw for v in routes.all_methods(r, s).values()])
print(json.dumps(out))
"""


def run_with_flag(flag):
    env = dict(os.environ, QFIDELITY_DISABLE_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env, check=True,
                         capture_output=True, text=True)
    return json.loads(out.stdout)


@pytest.fixture(scope="module")
def both():
    return run_with_flag("0"), run_with_flag("1")


def test_flag_selects_backend(both):
    jit, ref = both
    assert jit["backend"] == "numba"
    assert ref["backend"] == "numpy"


def test_backends_agree(both):
    jit, ref = both
    a, b = np.array(jit["values"]), np.array(ref["values"])
    assert a.shape == b.shape == (15, 5)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


def test_in_process_backend_matches_flag():
    flag = os.environ.get("QFIDELITY_DISABLE_NUMBA", "").lower() in ("1", "true", "yes", "on")
    assert _jit.BACKEND == ("numpy" if flag else "numba")


def test_naive_matmul_kernel():
    from qfidelity import _kernels
    rng = np.random.default_rng(0)
    a = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    b = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    np.testing.assert_allclose(_kernels.naive_matmul(a, b), a @ b, atol=1e-13)


def test_pure_state_values_match_overlap():
    psi = states.random_state_vector(6, 1)
    phi = states.random_state_vector(6, 2)
    expect = abs(np.vdot(psi, phi)) ** 2
    f = fm.fidelity(states.projector(psi), states.projector(phi))
    assert f.value == pytest.approx(expect, abs=1e-12)
