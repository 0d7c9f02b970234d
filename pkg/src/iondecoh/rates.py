"""Decoherence and decay rates for the three control regimes.

Uncontrolled rates sample the form factors at the transition frequency;
the dynamical-decoupling ("bang") regime splits the decay into dressed
channels at omega3p + omega_pm; the Zeno regime filters the form factors
through the measurement kernel T_c sinc^2((w - omega3p) T_c / 2). The
closed-form high-frequency approximants used for the qualitative curve
discussion are provided alongside the exact quadrature values.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from . import kernels, numerics
from .spectral import FormFactorParams, kappa_d, kappa_e


@dataclass(frozen=True)
class NoControl:
    pass


@dataclass(frozen=True)
class Bang:
    """Periodic unitary kicks characterized by the drive amplitude Omega,
    detuning xi, and carrier omega4 (the carrier does not enter any rate)."""

    omega_rabi: float
    xi: float
    omega4: float = 0.0

    def __post_init__(self):
        if self.omega_rabi <= 0:
            raise ValueError("omega_rabi must be positive")
        if self.omega4 < 0:
            raise ValueError("omega4 must be nonnegative")


@dataclass(frozen=True)
class Zeno:
    """Projective measurements repeated every t_c."""

    t_c: float

    def __post_init__(self):
        if self.t_c <= 0:
            raise ValueError("t_c must be positive")


ControlScheme = Union[NoControl, Bang, Zeno]


@dataclass(frozen=True)
class DressedPair:
    omega_plus: float
    omega_minus: float
    weight_plus: float
    weight_minus: float


@dataclass(frozen=True)
class RateSet:
    """All rates of one regime, in units of the uncontrolled gamma_d.

    For the bang regime gamma_d is the channel sum gamma_d_plus +
    gamma_d_minus and gamma_e the analogous return-rate sum; for the Zeno
    regime gamma_d/gamma_e are the filtered integrals.
    """

    regime: str
    gamma_d: float
    gamma_e: float
    gamma_d_plus: Optional[float] = None
    gamma_d_minus: Optional[float] = None
    gamma_e_plus: Optional[float] = None
    gamma_e_minus: Optional[float] = None

    def __post_init__(self):
        for name in ("gamma_d", "gamma_e", "gamma_d_plus", "gamma_d_minus",
                     "gamma_e_plus", "gamma_e_minus"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError("%s must be nonnegative" % name)
        if self.gamma_d_plus is not None and self.gamma_d_minus is not None:
            channel_sum = self.gamma_d_plus + self.gamma_d_minus
            if abs(self.gamma_d - channel_sum) > 1e-12 * max(1.0, self.gamma_d):
                raise ValueError("gamma_d must equal the channel sum")


def dressed_frequencies(omega_rabi: float, xi: float) -> Tuple[float, float]:
    """Both roots omega_pm = (-xi +/- sqrt(xi^2 + 4 Omega^2)) / 2.

    Evaluated cancellation-free (the smaller root via omega_+ omega_- =
    -Omega^2) so the root identities survive Omega << |xi|.
    """
    if omega_rabi < 0:
        raise ValueError("omega_rabi must be nonnegative")
    root = float(np.hypot(xi, 2.0 * omega_rabi))
    if root == 0.0:
        return 0.0, 0.0
    if xi >= 0:
        om_minus = -0.5 * (xi + root)
        om_plus = 2.0 * omega_rabi ** 2 / (xi + root)
    else:
        om_plus = 0.5 * (root - xi)
        om_minus = -2.0 * omega_rabi ** 2 / (root - xi)
    return om_plus, om_minus


def dressed_weights(omega_rabi: float, xi: float) -> Tuple[float, float]:
    """Hybridization weights w_pm = |omega_mp| / (omega_+ - omega_-)."""
    om_plus, om_minus = dressed_frequencies(omega_rabi, xi)
    split = om_plus - om_minus
    if split == 0.0:
        raise ValueError("degenerate dressing: omega_rabi = xi = 0")
    return -om_minus / split, om_plus / split


def dressed_pair(omega_rabi: float, xi: float) -> DressedPair:
    om_plus, om_minus = dressed_frequencies(omega_rabi, xi)
    w_plus, w_minus = dressed_weights(omega_rabi, xi)
    return DressedPair(om_plus, om_minus, w_plus, w_minus)


def rates_uncontrolled(p: FormFactorParams) -> RateSet:
    two_pi = 2.0 * np.pi
    return RateSet(regime="none",
                   gamma_d=two_pi * kappa_d(p.omega3p, p),
                   gamma_e=two_pi * kappa_e(p.omega3p, p))


def rates_bang(p: FormFactorParams, scheme: Bang) -> RateSet:
    """Dressed-channel rates gamma_{d,e}^pm = 2 pi w_pm kappa_{d,e}(omega3p
    + omega_pm), with the form factors extended over the whole real axis."""
    pair = dressed_pair(scheme.omega_rabi, scheme.xi)
    two_pi = 2.0 * np.pi
    gd_plus = two_pi * pair.weight_plus * kappa_d(p.omega3p + pair.omega_plus, p)
    gd_minus = two_pi * pair.weight_minus * kappa_d(p.omega3p + pair.omega_minus, p)
    ge_plus = two_pi * pair.weight_plus * kappa_e(p.omega3p + pair.omega_plus, p)
    ge_minus = two_pi * pair.weight_minus * kappa_e(p.omega3p + pair.omega_minus, p)
    return RateSet(regime="bang",
                   gamma_d=gd_plus + gd_minus,
                   gamma_e=ge_plus + ge_minus,
                   gamma_d_plus=gd_plus, gamma_d_minus=gd_minus,
                   gamma_e_plus=ge_plus, gamma_e_minus=ge_minus)


def zeno_panel_edges(t_c: float, p: FormFactorParams,
                     k_support: float = numerics.TAIL_SCALES) -> np.ndarray:
    """Panel edges for the measurement-filtered integrals.

    A uniform grid resolves the form-factor scales (spacing half the
    smaller of omega_c and 1/beta); the zeros of the sinc^2 filter at
    omega3p + 2 pi k / t_c are merged in when they actually subdivide the
    truncation window, so no panel straddles an oscillation lobe.
    """
    scale = max(p.omega_c, 1.0 / p.beta)
    half = k_support * scale + abs(p.omega3p)
    lo = p.omega3p - half
    hi = p.omega3p + half
    h_max = min(p.omega_c, 1.0 / p.beta) / 2.0
    n_uniform = int(np.ceil((hi - lo) / h_max))
    edges = np.linspace(lo, hi, n_uniform + 1)
    spacing = 2.0 * np.pi / t_c
    if spacing < hi - lo:
        k_lo = int(np.ceil((lo - p.omega3p) / spacing))
        k_hi = int(np.floor((hi - p.omega3p) / spacing))
        zeros = p.omega3p + spacing * np.arange(k_lo, k_hi + 1)
        edges = np.unique(np.concatenate([edges, zeros]))
    return edges


def rates_zeno(p: FormFactorParams, scheme: Zeno) -> RateSet:
    edges = zeno_panel_edges(scheme.t_c, p)
    gd, ge = kernels.zeno_rate_pair(scheme.t_c, p.omega3p, p.v0 ** 2,
                                    p.omega_c, p.beta, edges)
    return RateSet(regime="zeno", gamma_d=gd, gamma_e=ge)


def rates_for(p: FormFactorParams, scheme: ControlScheme) -> RateSet:
    if isinstance(scheme, NoControl):
        return rates_uncontrolled(p)
    if isinstance(scheme, Bang):
        return rates_bang(p, scheme)
    if isinstance(scheme, Zeno):
        return rates_zeno(p, scheme)
    raise TypeError("unknown control scheme %r" % (scheme,))


def bang_high_freq_approx(p: FormFactorParams, scheme: Bang) -> float:
    """Closed-form large-|omega_minus| estimate of the bang rate:
    (omega_+ gamma_e omega_c)/(omega3p (omega_+ - omega_-)) *
    (|omega_-|/omega_c) exp(-|omega_-|/omega_c)."""
    om_plus, om_minus = dressed_frequencies(scheme.omega_rabi, scheme.xi)
    gamma_e = 2.0 * np.pi * kappa_e(p.omega3p, p)
    lead = om_plus * gamma_e * p.omega_c / (p.omega3p * (om_plus - om_minus))
    x = abs(om_minus) / p.omega_c
    return lead * x * float(np.exp(-x))


def zeno_high_freq_approx(p: FormFactorParams, scheme: Zeno) -> float:
    """Closed-form small-t_c estimate of the Zeno rate:
    gamma_e (omega_c/omega3p)^2 / (2 pi / (omega3p t_c))."""
    gamma_e = 2.0 * np.pi * kappa_e(p.omega3p, p)
    freq = 2.0 * np.pi / (p.omega3p * scheme.t_c)
    return gamma_e * (p.omega_c / p.omega3p) ** 2 / freq
