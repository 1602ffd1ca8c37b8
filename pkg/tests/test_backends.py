import os
import subprocess
import sys

import numpy as np
import pytest

from kgoursat import _core, _fallback

_kernels = pytest.importorskip("kgoursat._kernels")


@pytest.mark.parametrize("a", [0, 1, 3, 5])
def test_compiled_and_fallback_agree_bitwise(a):
    rng = np.random.default_rng(7 + a)
    x = rng.uniform(-10, 10, 4000)
    y = rng.uniform(-10, 10, 4000)
    keep = np.abs(x * y) <= 100
    x, y = np.ascontiguousarray(x[keep]), np.ascontiguousarray(y[keep])
    v1, e1, s1 = _kernels.biv_bessel(a, x, y, 1e-15, 400)
    v2, e2, s2 = _fallback.biv_bessel(a, x, y, 1e-15, 400)
    assert np.array_equal(np.asarray(v1), v2)
    assert np.array_equal(np.asarray(e1), e2)
    assert np.array_equal(np.asarray(s1), s2)


def test_budget_exhaustion_flags_both():
    x = np.array([5.0, 0.1])
    y = np.array([5.0, 0.1])
    _, e1, s1 = _kernels.biv_bessel(0, x, y, 1e-15, 3)
    _, e2, s2 = _fallback.biv_bessel(0, x, y, 1e-15, 3)
    assert list(np.asarray(s1)) == list(s2)
    assert np.asarray(s1)[0] == 1 and np.isinf(np.asarray(e1)[0])


def test_default_backend_is_compiled():
    if os.environ.get("KGOURSAT_PURE"):
        pytest.skip("fallback forced by environment")
    assert _core.BACKEND == "cython"


def test_environment_forces_fallback():
    env = dict(os.environ, KGOURSAT_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "import kgoursat; print(kgoursat.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
