import os
import subprocess
import sys

import numpy as np
import pytest

from iondecoh import _purecore, kernels
from iondecoh.rates import zeno_panel_edges
from iondecoh.spectral import calibrate

try:
    from iondecoh import _fastcore
except ImportError:
    _fastcore = None

needs_fast = pytest.mark.skipif(_fastcore is None,
                                reason="compiled kernels not built")

DEFAULTS = calibrate(1.0, 1000.0, 10.0)


def test_backend_tag_is_consistent():
    assert kernels.BACKEND in ("pure", "fast")
    if kernels.BACKEND == "fast":
        assert _fastcore is not None


def test_pure_rk4_matches_closed_form():
    a = np.array([[-2.0]])
    path = _purecore.rk4_path(a, np.array([1.0]), 1000, 1e-3, 100)
    assert path[-1, 0] == pytest.approx(np.exp(-2.0), rel=1e-10)


def test_pure_rk4_sampling_shape():
    a = np.zeros((3, 3))
    path = _purecore.rk4_path(a, np.ones(3), 600, 0.01, 200)
    assert path.shape == (4, 3)


def test_rk4_rejects_indivisible_sampling():
    a = np.zeros((2, 2))
    with pytest.raises(ValueError):
        _purecore.rk4_path(a, np.ones(2), 7, 0.01, 2)
    if _fastcore is not None:
        with pytest.raises(ValueError):
            _fastcore.rk4_path(a, np.ones(2), 7, 0.01, 2)


@needs_fast
def test_backends_agree_on_rk4():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(6, 6)) * 0.3
    y0 = rng.normal(size=6)
    pure = _purecore.rk4_path(a, y0, 5000, 1e-3, 50)
    fast = _fastcore.rk4_path(a, y0, 5000, 1e-3, 50)
    assert pure.shape == fast.shape
    scale = np.max(np.abs(pure))
    assert np.max(np.abs(pure - fast)) <= 1e-9 * scale


@needs_fast
def test_backends_agree_on_zeno_integral():
    for freq in (0.5, 36.64, 1e3):
        t_c = 2.0 * np.pi / freq
        edges = zeno_panel_edges(t_c, DEFAULTS)
        args = (t_c, DEFAULTS.omega3p, DEFAULTS.v0 ** 2, DEFAULTS.omega_c,
                DEFAULTS.beta, edges)
        gd_p, ge_p = _purecore.zeno_rate_pair(*args)
        gd_f, ge_f = _fastcore.zeno_rate_pair(*args)
        assert gd_f == pytest.approx(gd_p, rel=1e-12)
        assert ge_f == pytest.approx(ge_p, rel=1e-12)


def test_env_var_forces_pure_backend():
    env = dict(os.environ, IONDECOH_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from iondecoh import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "pure"
