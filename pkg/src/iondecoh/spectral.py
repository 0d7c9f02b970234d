"""Thermal spectral density functions, Lamb shifts, and unit calibration.

The reservoir enters the reduced dynamics only through the two form
factors

    kappa_d(w) = (v0^2 / 2 pi) * w * exp(-|w|/omega_c) / (exp(beta w) - 1)
    kappa_e(w) = kappa_d(w) * exp(beta w)

defined on the whole real axis (counter-rotating terms extend them to
negative frequencies). They satisfy detailed balance by construction and
the exchange symmetry kappa_e(w) = kappa_d(-w).

Everything is expressed in reduced units: the reference transition
frequency omega3p is 1, rates are in units of the uncontrolled
decoherence rate gamma_d, and time is measured in 1/gamma_d.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import numerics

ArrayLike = Union[float, np.ndarray]

#: Below this value of |beta*w| the Bose factor w/(exp(beta w)-1) switches
#: to its series to avoid cancellation: (1/beta)(1 - x/2 + x^2/12).
SERIES_CUT = 1e-4

#: Arguments of expm1 are clipped here; beyond it the occupation underflows
#: or overflows cleanly to 0.
EXP_CLIP = 700.0


@dataclass(frozen=True)
class FormFactorParams:
    """Reservoir and coupling parameters in reduced units."""

    v0: float
    omega_c: float
    beta: float
    omega3p: float = 1.0

    def __post_init__(self):
        for name in ("v0", "omega_c", "beta", "omega3p"):
            if getattr(self, name) <= 0:
                raise ValueError("%s must be positive" % name)


@dataclass(frozen=True)
class ModelParams:
    """Form factors plus the Rabi drive amplitude and the computed shift."""

    form: FormFactorParams
    delta_rabi: float
    delta_shift: float = 0.0

    def __post_init__(self):
        if self.delta_rabi < 0:
            raise ValueError("delta_rabi must be nonnegative")


def _occupation(omega: ArrayLike, beta: float) -> ArrayLike:
    """w / (exp(beta w) - 1) with a series branch near w = 0."""
    w = np.asarray(omega, dtype=float)
    x = beta * w
    small = np.abs(x) < SERIES_CUT
    xs = np.where(small, 1.0, np.clip(x, -EXP_CLIP, EXP_CLIP))
    with np.errstate(over="ignore", invalid="ignore"):
        occ = np.where(small,
                       (1.0 - x / 2.0 + x * x / 12.0) / beta,
                       w / np.expm1(xs))
    # beyond the clip the exact value underflows to zero from above
    occ = np.where(x > EXP_CLIP, 0.0, occ)
    return occ


def kappa_d(omega: ArrayLike, p: FormFactorParams) -> ArrayLike:
    """Downward (decoherence-channel) form factor, whole real axis.

    The w = 0 singularity is removable and evaluates to v0^2/(2 pi beta).
    """
    w = np.asarray(omega, dtype=float)
    val = (p.v0 ** 2 / (2.0 * np.pi)) * _occupation(w, p.beta) \
        * np.exp(-np.abs(w) / p.omega_c)
    if np.isscalar(omega) or np.ndim(omega) == 0:
        return float(val)
    return val


def kappa_e(omega: ArrayLike, p: FormFactorParams) -> ArrayLike:
    """Upward (excitation-channel) form factor: kappa_d mirrored by the
    exchange symmetry kappa_e(w) = kappa_d(-w), which is the stable way to
    evaluate kappa_d(w) exp(beta w) for large positive w."""
    w = np.asarray(omega, dtype=float)
    val = kappa_d(-w, p)
    return val


def calibrate(gamma_d_target: float, gamma_ratio: float,
              omega_c_over_omega3: float) -> FormFactorParams:
    """Fix (v0, beta) so the uncontrolled rates come out as requested.

    Detailed balance at the transition frequency gives
    gamma_e/gamma_d = exp(beta omega3p), hence beta = ln(gamma_ratio)/omega3p,
    and v0^2 is solved from 2 pi kappa_d(omega3p) = gamma_d_target exactly.
    """
    if gamma_d_target <= 0 or omega_c_over_omega3 <= 0:
        raise ValueError("rates and frequencies must be positive")
    if gamma_ratio <= 1:
        raise ValueError("gamma_ratio must exceed 1 (negative temperature not modeled)")
    omega3p = 1.0
    beta = np.log(gamma_ratio) / omega3p
    v0_sq = gamma_d_target * np.expm1(beta * omega3p) \
        * np.exp(omega3p / omega_c_over_omega3) / omega3p
    return FormFactorParams(v0=float(np.sqrt(v0_sq)),
                            omega_c=omega_c_over_omega3 * omega3p,
                            beta=float(beta),
                            omega3p=omega3p)


def _shift_window(p: FormFactorParams) -> float:
    return numerics.TAIL_SCALES * max(p.omega_c, 1.0 / p.beta)


def _shift_of(kappa, p: FormFactorParams,
              spec: numerics.QuadratureSpec) -> float:
    """p.v. integral of kappa(w)/(w - omega3p) over the real axis."""
    half_width = _shift_window(p)
    pole = p.omega3p

    def f(w):
        return float(kappa(w, p))

    core = numerics.principal_value(f, pole, half_width, spec)
    # the remaining tails are regular (the pole sits well inside the window)
    scale = 2.0 * p.omega_c
    right = numerics.integrate_semi_infinite(
        lambda x: f(pole + half_width + x) / (half_width + x),
        0.0, scale, spec)
    left = numerics.integrate_semi_infinite(
        lambda x: f(pole - half_width - x) / (-half_width - x),
        0.0, scale, spec)
    return core + right + left


def lamb_shift_delta(p: FormFactorParams,
                     spec: numerics.QuadratureSpec = numerics.QuadratureSpec()) -> float:
    """Energy shift of the tracked level: p.v. integral of
    kappa_d(w)/(w - omega3p) dw."""
    return _shift_of(kappa_d, p, spec)


def lamb_shift_delta_prime(p: FormFactorParams,
                           spec: numerics.QuadratureSpec = numerics.QuadratureSpec()) -> float:
    """Companion shift with kappa_e and the opposite sign. It dephases only
    matrix elements outside the tracked block; computed for reporting."""
    return -_shift_of(kappa_e, p, spec)
