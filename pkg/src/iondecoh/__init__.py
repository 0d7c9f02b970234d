"""Thermal decoherence of a driven trapped-ion qubit, with and without
kick-based or measurement-based suppression of the heating channel."""

__version__ = "0.1.0"

from .numerics import (AccuracyError, OdeSpec, QuadratureError,
                       QuadratureSpec, integrate, integrate_semi_infinite,
                       principal_value, rk4_evolve)
from .spectral import (FormFactorParams, ModelParams, calibrate, kappa_d,
                       kappa_e, lamb_shift_delta, lamb_shift_delta_prime)
from .rates import (Bang, NoControl, RateSet, Zeno, bang_high_freq_approx,
                    dressed_frequencies, dressed_pair, dressed_weights,
                    rates_bang, rates_for, rates_uncontrolled, rates_zeno,
                    zeno_high_freq_approx)
from .averaging import (ConsistencyError, ProjectionSet, average_cyclic,
                        average_projective, decoupling_residual,
                        equivalence_report, measurement_eigenprojections,
                        measurement_hamiltonian, rabi_hamiltonian,
                        zeno_projected_hamiltonian)
from .dynamics import (SystemState, Trajectory, decoherence_time,
                       default_step, evolve, generator, initial_ground_state,
                       purity)
from .harness import (ScenarioConfig, SweepCurve, bang_scheme_for, cli_main,
                      emit_csv, emit_svg, find_crossover,
                      run_purity_scenario, sweep_bang, sweep_zeno,
                      zeno_scheme_for)
from .kernels import BACKEND

__all__ = [
    "AccuracyError", "BACKEND", "Bang", "ConsistencyError",
    "FormFactorParams", "ModelParams", "NoControl", "OdeSpec",
    "ProjectionSet", "QuadratureError", "QuadratureSpec", "RateSet",
    "ScenarioConfig", "SweepCurve", "SystemState", "Trajectory", "Zeno",
    "average_cyclic", "average_projective", "bang_high_freq_approx",
    "bang_scheme_for", "calibrate", "cli_main", "decoherence_time",
    "decoupling_residual",
    "default_step", "dressed_frequencies", "dressed_pair", "dressed_weights",
    "emit_csv", "emit_svg", "equivalence_report", "evolve", "find_crossover",
    "generator", "initial_ground_state", "integrate",
    "integrate_semi_infinite", "kappa_d", "kappa_e", "lamb_shift_delta",
    "lamb_shift_delta_prime", "measurement_eigenprojections",
    "measurement_hamiltonian", "principal_value", "purity",
    "rabi_hamiltonian", "rates_bang", "rates_for", "rates_uncontrolled",
    "rates_zeno", "rk4_evolve", "run_purity_scenario", "sweep_bang",
    "sweep_zeno", "zeno_high_freq_approx", "zeno_projected_hamiltonian",
    "zeno_scheme_for",
]
