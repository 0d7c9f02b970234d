"""Numpy implementations of the two hot kernels.

This module is the always-available fallback behind iondecoh.kernels; the
compiled twin lives in _fastcore.pyx. Both must produce the same numbers
(up to rounding order), which the kernel tests assert. To keep the module
import-light it re-states the form-factor formula instead of importing the
spectral module.
"""

import numpy as np

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)

_SERIES_CUT = 1e-4
_EXP_CLIP = 700.0
_CHUNK = 16384


def _occupation(w, beta):
    x = beta * w
    small = np.abs(x) < _SERIES_CUT
    xs = np.where(small, 1.0, np.clip(x, -_EXP_CLIP, _EXP_CLIP))
    with np.errstate(over="ignore", invalid="ignore"):
        occ = np.where(small,
                       (1.0 - x / 2.0 + x * x / 12.0) / beta,
                       w / np.expm1(xs))
    return np.where(x > _EXP_CLIP, 0.0, occ)


def _kappa_pair(w, v0_sq, omega_c, beta):
    """(kappa_d, kappa_e) evaluated together; kappa_e via the exchange
    symmetry kappa_e(w) = kappa_d(-w)."""
    cut = np.exp(-np.abs(w) / omega_c) * (v0_sq / (2.0 * np.pi))
    return _occupation(w, beta) * cut, _occupation(-w, beta) * cut


def zeno_rate_pair(t_c, omega3p, v0_sq, omega_c, beta, edges):
    """T_c * integral of kappa_{d,e}(w) sinc^2((w - omega3p) T_c / 2) dw.

    edges is the precomputed strictly increasing panel-edge array; each
    panel is integrated with the 8-point Gauss rule and the panels are
    processed in chunks to bound memory.
    """
    edges = np.asarray(edges, dtype=float)
    n_panels = edges.size - 1
    total_d = 0.0
    total_e = 0.0
    for i in range(0, n_panels, _CHUNK):
        j = min(i + _CHUNK, n_panels)
        lo = edges[i:j]
        hi = edges[i + 1:j + 1]
        mid = 0.5 * (lo + hi)
        hw = 0.5 * (hi - lo)
        x = mid[:, None] + hw[:, None] * _GL_X[None, :]
        u = (x - omega3p) * (t_c / 2.0)
        filt = np.sinc(u / np.pi) ** 2
        kd, ke = _kappa_pair(x, v0_sq, omega_c, beta)
        total_d += float(((kd * filt) @ _GL_W) @ hw)
        total_e += float(((ke * filt) @ _GL_W) @ hw)
    return t_c * total_d, t_c * total_e


def _one_step_matrix(a, h):
    """Exact RK4 one-step propagator for a linear generator:
    I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24."""
    ha = h * a
    m = np.eye(a.shape[0]) + ha
    term = ha
    for k in (2.0, 3.0, 4.0):
        term = term @ ha / k
        m = m + term
    return m


def rk4_path(a, y0, n_steps, h, sample_every):
    """Sampled RK4 path for y' = a y; returns (n_steps//sample_every + 1)
    rows starting with y0. n_steps must be a multiple of sample_every."""
    a = np.asarray(a, dtype=float)
    y = np.asarray(y0, dtype=float)
    if n_steps % sample_every:
        raise ValueError("n_steps must be a multiple of sample_every")
    n_samples = n_steps // sample_every
    block = np.linalg.matrix_power(_one_step_matrix(a, h), sample_every)
    out = np.empty((n_samples + 1, y.size))
    out[0] = y
    # divergence shows up as non-finite samples, which the caller rejects;
    # numpy's overflow warning would only duplicate that
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n_samples + 1):
            y = block @ y
            out[k] = y
    return out
