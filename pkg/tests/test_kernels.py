import os
import subprocess
import sys

import numpy as np
import pytest

from scring import _backend, _kernels_py

try:
    from scring import _kernels as compiled
except ImportError:
    compiled = None

needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


@needs_ext
@pytest.mark.skipif(bool(os.environ.get("SCRING_PURE_PYTHON")), reason="fallback forced")
def test_extension_selected_by_default():
    assert _backend.BACKEND == "cython"


def test_env_var_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "import scring; print(scring.BACKEND)"],
        env={**os.environ, "SCRING_PURE_PYTHON": "1"}, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@needs_ext
@pytest.mark.parametrize("a", [0.02, 1.0, 37.0, 500.0])
def test_boltzmann_mean_backends_agree(a):
    x = np.random.default_rng(3).uniform(-5, 5, 500)
    x[:3] = [0.5, -1.5, 2.0]
    K = 80
    fast = compiled.boltzmann_mean(x, a, K)
    ref = _kernels_py.boltzmann_mean(x, a, K)
    assert np.allclose(fast, ref, rtol=1e-13, atol=1e-13)
    assert fast[0] == pytest.approx(0.5, abs=1e-14) and fast[1] == pytest.approx(-1.5, abs=1e-14)


def _events(rng, n=200):
    edges = np.cumsum(rng.exponential(1.0, 2 * n))
    return np.ascontiguousarray(edges[0::2]), np.ascontiguousarray(edges[1::2])


@needs_ext
def test_evaluate_trace_backends_agree():
    rng = np.random.default_rng(7)
    opens, closes = _events(rng)
    levels = rng.normal(size=opens.size + 1)
    t = np.linspace(0, closes[-1] + 3, 20000)
    I1, V1 = compiled.evaluate_trace(t, opens, closes, levels, 0.7, 2.5)
    I2, V2 = _kernels_py.evaluate_trace(t, opens, closes, levels, 0.7, 2.5)
    assert np.allclose(I1, I2, rtol=1e-14, atol=0)
    assert np.allclose(V1, V2, rtol=1e-14, atol=0)


@pytest.mark.parametrize("impl", [_kernels_py] + ([compiled] if compiled else []))
def test_evaluate_trace_piecewise(impl):
    opens = np.array([1.0, 3.0])
    closes = np.array([2.0, 4.0])
    levels = np.array([5.0, -1.0, 2.0])
    t = np.array([0.0, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 9.0])
    I, V = impl.evaluate_trace(t, opens, closes, levels, 0.5, 3.0)
    want = [5.0, 5.0, 5 * np.exp(-1.0), -1.0, -1.0, -1.0, -np.exp(-1.0), 2.0, 2.0]
    assert np.allclose(I, want, rtol=1e-15)
    normal = np.array([0, 1, 1, 0, 0, 1, 1, 0, 0], dtype=bool)
    assert np.array_equal(V != 0, normal)
    assert np.allclose(V[normal], 3.0 * I[normal], rtol=1e-15)


def test_backend_accepts_strided_input():
    t = np.linspace(0, 4, 20)[::2]
    I, _ = _backend.evaluate_trace(t, np.array([1.0, 3.0, 5.0])[::2], np.array([2.0, 4.0, 6.0])[::2],
                                   np.array([1.0, 9.0, 2.0])[::2], 1.0, 1.0)
    assert I.shape == t.shape


@pytest.mark.parametrize("impl", [_kernels_py] + ([compiled] if compiled else []))
def test_evaluate_trace_no_events(impl):
    I, V = impl.evaluate_trace(np.linspace(0, 1, 5), np.empty(0), np.empty(0), np.array([1.5]), 1.0, 1.0)
    assert np.all(I == 1.5) and np.all(V == 0)
