"""Reduced master-equation generators, trajectories, and purity.

The tracked density-matrix block closes over a small set of real
components, so each regime's master equation is a constant real matrix
acting on

    (s11, s12_re, s12_im, s22, s33)            no control / Zeno
    (s11, s12_re, s12_im, s22, s_pp, s_mm)     bang control

The Rabi drive couples populations to the coherence as -2 Delta s12_im,
the coherence decays at half the regime's decoherence rate, and the
excited populations exchange with s11 at the regime's channel rates.
Untracked coherences (into |3>, |4>) never feed back into this block and
are not carried.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import numerics
from .rates import RateSet

POPULATION_FLOOR = -1e-9
TRACE_TOL = 1e-9
COHERENCE_SLACK = 1e-9


@dataclass(frozen=True)
class SystemState:
    regime: str
    s11: float
    s12_re: float
    s12_im: float
    s22: float
    excited: Tuple[float, ...]

    def vector(self) -> np.ndarray:
        return np.array([self.s11, self.s12_re, self.s12_im, self.s22,
                         *self.excited])

    def validate(self):
        pops = (self.s11, self.s22, *self.excited)
        if min(pops) < POPULATION_FLOOR:
            raise ValueError("negative population beyond tolerance")
        if abs(sum(pops) - 1.0) > TRACE_TOL:
            raise ValueError("total population differs from 1 beyond tolerance")
        if self.s12_re ** 2 + self.s12_im ** 2 > self.s11 * self.s22 + COHERENCE_SLACK:
            raise ValueError("coherence exceeds the population bound")
        return self


def state_from_vector(regime: str, y) -> SystemState:
    y = np.asarray(y, dtype=float)
    return SystemState(regime=regime, s11=float(y[0]), s12_re=float(y[1]),
                       s12_im=float(y[2]), s22=float(y[3]),
                       excited=tuple(float(v) for v in y[4:]))


def initial_ground_state(regime: str) -> SystemState:
    """sigma(0) = |1><1| in the given regime's layout."""
    n_excited = 2 if regime == "bang" else 1
    return SystemState(regime=regime, s11=1.0, s12_re=0.0, s12_im=0.0,
                       s22=0.0, excited=(0.0,) * n_excited)


def excited_labels(regime: str) -> Tuple[str, ...]:
    return ("s_pp", "s_mm") if regime == "bang" else ("s33",)


@dataclass(frozen=True)
class Trajectory:
    regime: str
    times: np.ndarray
    states: np.ndarray
    purity: np.ndarray

    def state(self, i: int) -> SystemState:
        return state_from_vector(self.regime, self.states[i])


def generator(rate_set: RateSet, delta_rabi: float) -> np.ndarray:
    """The constant real matrix of the regime's master equation."""
    d = delta_rabi
    if rate_set.regime in ("none", "zeno"):
        gd, ge = rate_set.gamma_d, rate_set.gamma_e
        return np.array([
            [-gd, 0.0, -2.0 * d, 0.0, ge],
            [0.0, -gd / 2.0, 0.0, 0.0, 0.0],
            [d, 0.0, -gd / 2.0, -d, 0.0],
            [0.0, 0.0, 2.0 * d, 0.0, 0.0],
            [gd, 0.0, 0.0, 0.0, -ge],
        ])
    if rate_set.regime == "bang":
        channels = (rate_set.gamma_d_plus, rate_set.gamma_d_minus,
                    rate_set.gamma_e_plus, rate_set.gamma_e_minus)
        if any(c is None for c in channels):
            raise ValueError("bang rate set lacks channel rates")
        gdp, gdm, gep, gem = channels
        gdb = rate_set.gamma_d
        return np.array([
            [-gdb, 0.0, -2.0 * d, 0.0, gep, gem],
            [0.0, -gdb / 2.0, 0.0, 0.0, 0.0, 0.0],
            [d, 0.0, -gdb / 2.0, -d, 0.0, 0.0],
            [0.0, 0.0, 2.0 * d, 0.0, 0.0, 0.0],
            [gdp, 0.0, 0.0, 0.0, -gep, 0.0],
            [gdm, 0.0, 0.0, 0.0, 0.0, -gem],
        ])
    raise ValueError("unknown regime %r" % (rate_set.regime,))


def default_step(rate_set: RateSet, delta_rabi: float) -> float:
    """0.01 over the fastest rate in the generator, so the fastest
    characteristic time is resolved by at least 100 steps."""
    gmax = max(rate_set.gamma_d, rate_set.gamma_e)
    return 0.01 / max(delta_rabi, gmax, 1.0)


def purity(state: SystemState) -> float:
    """eta = s11^2 + s22^2 + 2|s12|^2; 1 exactly on pure qubit states."""
    return (state.s11 ** 2 + state.s22 ** 2
            + 2.0 * (state.s12_re ** 2 + state.s12_im ** 2))


def _purity_of_samples(states: np.ndarray) -> np.ndarray:
    return (states[:, 0] ** 2 + states[:, 3] ** 2
            + 2.0 * (states[:, 1] ** 2 + states[:, 2] ** 2))


def evolve(initial: SystemState, rate_set: RateSet, delta_rabi: float,
           tau_end: float, ode: Optional[numerics.OdeSpec] = None,
           sample_every: Optional[int] = None) -> Trajectory:
    """Integrate the regime's master equation from the given state.

    ode defaults to the default_step spec; sample_every defaults to a
    sampling stride of about 0.01 time units. The final state is checked
    against the state invariants (population floor, trace, coherence
    bound) before the trajectory is returned.
    """
    if initial.regime != rate_set.regime:
        raise ValueError("state regime %r does not match rates %r"
                         % (initial.regime, rate_set.regime))
    initial.validate()
    if ode is None:
        ode = numerics.OdeSpec(step=default_step(rate_set, delta_rabi))
    if sample_every is None:
        sample_every = max(1, round(0.01 / ode.step))
    a = generator(rate_set, delta_rabi)
    times, states = numerics.rk4_evolve(a, initial.vector(), tau_end, ode,
                                        sample_every=sample_every)
    traj = Trajectory(regime=initial.regime, times=times, states=states,
                      purity=_purity_of_samples(states))
    traj.state(-1).validate()
    return traj


def decoherence_time(traj: Trajectory, threshold: float) -> Optional[float]:
    """First time the purity crosses below the threshold, linearly
    interpolated between samples; None when it never does."""
    if not (0.0 < threshold < 1.0):
        raise ValueError("threshold must lie in (0, 1)")
    eta = traj.purity
    if eta.size == 0:
        raise ValueError("empty trajectory")
    below = np.nonzero(eta < threshold)[0]
    if below.size == 0:
        return None
    i = int(below[0])
    if i == 0:
        return float(traj.times[0])
    t0, t1 = traj.times[i - 1], traj.times[i]
    e0, e1 = eta[i - 1], eta[i]
    return float(t0 + (e0 - threshold) / (e0 - e1) * (t1 - t0))
