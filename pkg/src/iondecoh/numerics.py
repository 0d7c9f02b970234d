"""Quadrature and ODE-stepping kernels with explicit accuracy contracts.

Everything here is a pure function of its inputs. The integrators are
deliberately simple: adaptive Simpson with a Richardson error estimate for
smooth exponentially-cut integrands, a symmetric-pairing principal value,
and classic fixed-step RK4 for the (linear, time-independent) generators
used by the dynamics layer. Oscillatory-integral methods and stiff implicit
solvers are out of scope on purpose.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels

#: Tail truncation constant for semi-infinite integrals, in decay scales.
#: exp(-40) ~ 4e-18 is below double-precision significance.
TAIL_SCALES = 40.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy budget for the adaptive integrator.

    abs_tol and rel_tol may not both be zero; max_subdivisions bounds the
    number of panel splits before integrate gives up.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 4000

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("abs_tol and rel_tol must not both be zero")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


@dataclass(frozen=True)
class OdeSpec:
    """Fixed-step RK4 configuration.

    When error_check is set, the run is repeated at half the step and the
    endpoints must agree within error_tol (max-abs over components).
    """

    step: float
    error_check: bool = False
    error_tol: float = 1e-8

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.error_tol < 0:
            raise ValueError("error_tol must be nonnegative")


class QuadratureError(RuntimeError):
    """Subdivision budget exhausted; carries the best estimate so far."""

    def __init__(self, message, best_estimate, error_estimate):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class AccuracyError(RuntimeError):
    """Step-doubling disagreement or non-finite state in the ODE stepper."""


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    s = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return m, fm, s


def integrate(f, a: float, b: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Adaptive-Simpson integral of f over [a, b].

    Panels are split until the Richardson estimate of the local error is
    within the (proportionally allocated) tolerance; the returned value
    includes the Richardson correction, so polynomials up to degree 5 are
    exact to rounding. Raises QuadratureError when the subdivision budget
    runs out, carrying the best estimate accumulated so far.
    """
    if not (a <= b):
        raise ValueError("integrate requires a <= b")
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    if not (np.isfinite(fa) and np.isfinite(fb)):
        raise ValueError("integrand not finite at an endpoint")
    m, fm, whole = _simpson(f, a, fa, b, fb)
    tol = max(spec.abs_tol, spec.rel_tol * abs(whole))
    # stack entries: (a, fa, b, fb, m, fm, panel_estimate, panel_tol)
    stack = [(a, fa, b, fb, m, fm, whole, tol)]
    total = 0.0
    pending_error = 0.0
    splits = 0
    while stack:
        a0, fa0, b0, fb0, m0, fm0, s0, tol0 = stack.pop()
        ml, fml, sl = _simpson(f, a0, fa0, m0, fm0)
        mr, fmr, sr = _simpson(f, m0, fm0, b0, fb0)
        err = (sl + sr - s0) / 15.0
        # the Richardson estimate is optimistic on coarse panels; the factor
        # of 10 keeps the realized global error within the requested budget
        if 10.0 * abs(err) <= tol0 or (b0 - a0) <= 1e-15 * max(1.0, abs(a0), abs(b0)):
            total += sl + sr + err
            continue
        splits += 1
        if splits > spec.max_subdivisions:
            best = total + sl + sr + err
            for rest in stack:
                best += rest[6]
            raise QuadratureError(
                "subdivision budget exhausted", best, abs(err) + pending_error
            )
        pending_error += abs(err)
        stack.append((a0, fa0, m0, fm0, ml, fml, sl, tol0 / 2.0))
        stack.append((m0, fm0, b0, fb0, mr, fmr, sr, tol0 / 2.0))
    return total


def integrate_semi_infinite(f, a: float, decay_scale: float,
                            spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Integral of f over [a, infinity) for exponentially bounded f.

    The caller guarantees |f(x)| <= C exp(-x/decay_scale) eventually; the
    tail beyond a + TAIL_SCALES*decay_scale is then below C*s*exp(-40) and
    is dropped, the rest delegated to integrate.
    """
    if decay_scale <= 0:
        raise ValueError("decay_scale must be positive")
    b = a + TAIL_SCALES * decay_scale
    probe = f(0.5 * (a + b))
    if not np.isfinite(probe):
        raise ValueError("integrand not finite on the truncated range")
    return integrate(f, a, b, spec)


def principal_value(f, pole: float, half_width: float,
                    spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Cauchy principal value of f(w)/(w - pole) over [pole-L, pole+L].

    Uses the symmetric pairing
        p.v. integral = integral_0^L [f(pole+x) - f(pole-x)]/x dx,
    which removes the singularity analytically. The x -> 0 limit of the
    paired integrand equals 2 f'(pole) and is estimated by the central
    difference at x0 = 1e-7*L, used verbatim for all x below x0.
    """
    if half_width <= 0:
        raise ValueError("half_width must be positive")
    x0 = 1e-7 * half_width
    g0 = (f(pole + x0) - f(pole - x0)) / x0

    def paired(x):
        if x < x0:
            return g0
        return (f(pole + x) - f(pole - x)) / x

    return integrate(paired, 0.0, half_width, spec)


def _as_matrix(rhs, dim=None):
    """Accept a generator as a square matrix or as a linear callable."""
    if callable(rhs) and not isinstance(rhs, np.ndarray):
        if dim is None:
            raise ValueError("dim required to probe a callable rhs")
        a = np.empty((dim, dim))
        e = np.zeros(dim)
        for j in range(dim):
            e[j] = 1.0
            a[:, j] = np.asarray(rhs(e), dtype=float)
            e[j] = 0.0
        return a
    a = np.asarray(rhs, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("rhs matrix must be square")
    return a


def rk4_evolve(rhs, y0, t_end: float, spec: OdeSpec, sample_every: int = 1):
    """Fixed-step RK4 path for a linear, time-independent rhs.

    rhs may be the generator matrix itself or a linear callable (probed on
    basis vectors). The step is shrunk minimally so an integer number of
    steps lands exactly on t_end and the step count is a multiple of
    sample_every. Returns (times, samples) with samples[0] = y0.

    With spec.error_check set, the whole path is recomputed at half the
    step and the endpoints must agree within spec.error_tol, else
    AccuracyError is raised.
    """
    y0 = np.asarray(y0, dtype=float)
    if y0.ndim != 1:
        raise ValueError("y0 must be a vector")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    if sample_every < 1:
        raise ValueError("sample_every must be a positive integer")
    a = _as_matrix(rhs, dim=y0.size)
    if t_end == 0:
        return np.zeros(1), y0[np.newaxis, :].copy()
    n = int(np.ceil(t_end / spec.step - 1e-12))
    n = max(n, 1)
    rem = n % sample_every
    if rem:
        n += sample_every - rem
    h = t_end / n
    path = kernels.rk4_path(a, y0, n, h, sample_every)
    if not np.all(np.isfinite(path)):
        raise AccuracyError("non-finite state encountered")
    if spec.error_check:
        fine = kernels.rk4_path(a, y0, 2 * n, 0.5 * h, 2 * sample_every)
        drift = float(np.max(np.abs(fine[-1] - path[-1])))
        if drift > spec.error_tol:
            raise AccuracyError(
                "step-doubling disagreement %.3e exceeds %.3e" % (drift, spec.error_tol)
            )
    times = np.arange(path.shape[0]) * (h * sample_every)
    return times, path
