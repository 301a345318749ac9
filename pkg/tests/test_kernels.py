import importlib
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from d2dpda import _kernels_py as pure
from d2dpda import kernels

try:
    from d2dpda import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

needs_ext = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

grids = st.integers(1, 6).flatmap(lambda F: st.integers(1, 6).flatmap(
    lambda K: st.lists(st.lists(st.integers(0, 5), min_size=K, max_size=K),
                       min_size=F, max_size=F)))


def test_pure_backend_name():
    assert pure.BACKEND == "python"


def test_pure_phi_candidates_example():
    # 0 = star
    g = np.array([[0, 1], [1, 0]], dtype=np.int32)
    assert list(pure.phi_candidates(g, 1)) == [-1, -1]
    g = np.array([[0, 1, 0], [0, 0, 1]], dtype=np.int32)
    assert list(pure.phi_candidates(g, 1)) == [-1, 0]


def test_pure_xor():
    dst = bytearray(b"\x0f\xf0\xaa")
    pure.xor_into(dst, b"\xff\xff\xaa")
    assert dst == bytearray(b"\xf0\x0f\x00")
    with pytest.raises(ValueError):
        pure.xor_into(bytearray(2), b"123")


@needs_ext
@settings(max_examples=200, deadline=None)
@given(grids)
def test_backends_agree(rows):
    g = np.array(rows, dtype=np.int32)
    assert sorted(compiled.pair_violations(g, 5)) == sorted(pure.pair_violations(g, 5))
    assert list(compiled.phi_candidates(g, 5)) == list(pure.phi_candidates(g, 5))


@needs_ext
@settings(max_examples=100, deadline=None)
@given(st.binary(min_size=0, max_size=300), st.integers(0, 255))
def test_xor_backends_agree(data, key):
    other = bytes((b ^ key) for b in data)
    a, b = bytearray(data), bytearray(data)
    compiled.xor_into(a, other)
    pure.xor_into(b, other)
    expect = bytearray(x ^ y for x, y in zip(data, other))
    assert a == b == expect


@needs_ext
@pytest.mark.skipif(bool(os.environ.get("D2DPDA_PURE_PYTHON")), reason="fallback forced")
def test_compiled_is_default():
    assert kernels.BACKEND == "cython"


def test_env_var_forces_pure_python():
    env = dict(os.environ, D2DPDA_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from d2dpda import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_reload_respects_env(monkeypatch):
    monkeypatch.setenv("D2DPDA_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("D2DPDA_PURE_PYTHON")
        importlib.reload(kernels)
