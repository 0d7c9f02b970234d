"""Averaged-Hamiltonian algebra on small complex matrices.

Covers the two averaging mechanisms behind the controls: cyclic-group
conjugation averages (periodic kicks) and projective pinches (repeated
measurements), plus the dressed eigenprojections of the measurement
Hamiltonian and the residual that certifies the decoupling condition.
The basis convention everywhere is |1>, |2>, |3>, |4> mapped to indices
0..3; the qubit lives on {|1>, |2>} and the measured pair on {|3>, |4>}.
"""

import numpy as np

MATRIX_TOL = 1e-12


class ConsistencyError(RuntimeError):
    """An identity that must hold to rounding failed; implementation bug."""


def _as_complex(m):
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not (2 <= a.shape[0] <= 8):
        raise ValueError("dimension out of the supported 2..8 range")
    return a


def _max_entry(m) -> float:
    return float(np.max(np.abs(m)))


class ProjectionSet:
    """A complete family of orthogonal Hermitian projections.

    Validates P_n = P_n^dagger, P_n^2 = P_n, P_n P_m = 0 (n != m) and
    sum P_n = 1, each to MATRIX_TOL.
    """

    def __init__(self, projections):
        ps = tuple(_as_complex(p) for p in projections)
        if not ps:
            raise ValueError("empty projection set")
        dim = ps[0].shape[0]
        for p in ps:
            if p.shape[0] != dim:
                raise ValueError("mixed dimensions in projection set")
            if _max_entry(p - p.conj().T) > MATRIX_TOL:
                raise ValueError("projection not Hermitian")
            if _max_entry(p @ p - p) > MATRIX_TOL:
                raise ValueError("projection not idempotent")
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                if _max_entry(ps[i] @ ps[j]) > MATRIX_TOL:
                    raise ValueError("projections not mutually orthogonal")
        if _max_entry(sum(ps) - np.eye(dim)) > MATRIX_TOL:
            raise ValueError("projections do not resolve the identity")
        self.projections = ps
        self.dim = dim

    def __iter__(self):
        return iter(self.projections)

    def __len__(self):
        return len(self.projections)


def average_cyclic(h, group):
    """Mean of the conjugations g^dagger h g over a kick group."""
    h = _as_complex(h)
    gs = [_as_complex(g) for g in group]
    if not gs:
        raise ValueError("empty group")
    eye = np.eye(h.shape[0])
    for g in gs:
        if _max_entry(g.conj().T @ g - eye) > MATRIX_TOL:
            raise ValueError("group element not unitary")
    acc = np.zeros_like(h)
    for g in gs:
        acc += g.conj().T @ h @ g
    return acc / len(gs)


def average_projective(h, ps):
    """Block-diagonal pinch sum P_n h P_n."""
    h = _as_complex(h)
    if not isinstance(ps, ProjectionSet):
        ps = ProjectionSet(ps)
    acc = np.zeros_like(h)
    for p in ps:
        acc += p @ h @ p
    return acc


def measurement_hamiltonian(omega_rabi: float, xi: float, dim: int = 4):
    """-xi |4><4| + Omega(|3><4| + |4><3|) embedded in dim x dim."""
    h = np.zeros((dim, dim), dtype=complex)
    h[3, 3] = -xi
    h[2, 3] = omega_rabi
    h[3, 2] = omega_rabi
    return h


def rabi_hamiltonian(delta_rabi: float, delta_shift: float = 0.0, dim: int = 4):
    """-delta_shift |1><1| + delta_rabi(|1><2| + |2><1|) embedded in dim x dim."""
    h = np.zeros((dim, dim), dtype=complex)
    h[0, 0] = -delta_shift
    h[0, 1] = delta_rabi
    h[1, 0] = delta_rabi
    return h


def measurement_eigenprojections(omega_rabi: float, xi: float,
                                 dim: int = 4) -> ProjectionSet:
    """Projections onto the dressed pair
    |pm> = (Omega|3> + omega_pm|4>) / sqrt(Omega^2 + omega_pm^2),
    completed with the projector on the untouched remainder of the space.
    """
    from .rates import dressed_frequencies

    if omega_rabi == 0 and xi == 0:
        raise ValueError("degenerate measurement Hamiltonian")
    om_plus, om_minus = dressed_frequencies(omega_rabi, xi)
    kets = []
    if omega_rabi == 0:
        # already diagonal; the dressed pair is the bare pair
        for idx in (2, 3):
            v = np.zeros(dim, dtype=complex)
            v[idx] = 1.0
            kets.append(v)
    else:
        for om in (om_plus, om_minus):
            v = np.zeros(dim, dtype=complex)
            v[2] = omega_rabi
            v[3] = om
            kets.append(v / np.linalg.norm(v))
    p_plus = np.outer(kets[0], kets[0].conj())
    p_minus = np.outer(kets[1], kets[1].conj())
    rest = np.eye(dim, dtype=complex) - p_plus - p_minus
    return ProjectionSet([p_plus, p_minus, rest])


def _dressed_dyad_sum(omega_rabi, xi, dim=4):
    """Closed form of the pinched -xi|4><4|:
    -xi sum_s omega_s^2 (Omega|3> + omega_s|4>)(Omega<3| + omega_s<4|)
    / (Omega^2 + omega_s^2)^2."""
    from .rates import dressed_frequencies

    om_plus, om_minus = dressed_frequencies(omega_rabi, xi)
    acc = np.zeros((dim, dim), dtype=complex)
    for om in (om_plus, om_minus):
        denom = (omega_rabi ** 2 + om ** 2) ** 2
        if denom == 0.0:
            continue
        v = np.zeros(dim, dtype=complex)
        v[2] = omega_rabi
        v[3] = om
        acc += (-xi) * om ** 2 * np.outer(v, v.conj()) / denom
    return acc


def zeno_projected_hamiltonian(omega_rabi: float, xi: float, h_extra=None):
    """Pinch of (-xi|4><4| + h_extra) by the measurement eigenprojections.

    The -xi part of the pinch is verified against its closed dressed-dyad
    form; disagreement beyond rounding indicates an implementation bug and
    raises ConsistencyError.
    """
    ps = measurement_eigenprojections(omega_rabi, xi)
    measured = np.zeros((ps.dim, ps.dim), dtype=complex)
    measured[3, 3] = -xi
    pinched_measured = average_projective(measured, ps)
    closed = _dressed_dyad_sum(omega_rabi, xi, ps.dim)
    gap = _max_entry(pinched_measured - closed)
    if gap > MATRIX_TOL * max(1.0, abs(xi)):
        raise ConsistencyError("pinch deviates from closed form by %.3e" % gap)
    if h_extra is None:
        return pinched_measured
    return pinched_measured + average_projective(_as_complex(h_extra), ps)


def decoupling_residual(h_int, ps) -> float:
    """Max-entry norm of the pinch of an interaction Hamiltonian.

    Zero certifies that the projection family decouples the interaction
    (the measured system block cannot exchange energy with the rest inside
    any single block)."""
    return _max_entry(average_projective(h_int, ps))


def equivalence_report(omega_rabi: float, xi: float, delta_rabi: float = 100.0):
    """Residuals demonstrating that kick averaging and measurement pinching
    agree on this model. All entries should sit at rounding level except
    the last, which reports the qubit-block distortion (identically zero)."""
    ps = measurement_eigenprojections(omega_rabi, xi)
    h_meas = measurement_hamiltonian(omega_rabi, xi)
    from .rates import dressed_frequencies

    om_plus, om_minus = dressed_frequencies(omega_rabi, xi)
    p_plus, p_minus, _ = ps.projections
    diag_residual = _max_entry(h_meas - om_plus * p_plus - om_minus * p_minus)

    measured = np.zeros((4, 4), dtype=complex)
    measured[3, 3] = -xi
    dyad_residual = _max_entry(average_projective(measured, ps)
                               - _dressed_dyad_sum(omega_rabi, xi))

    h_int = np.zeros((4, 4), dtype=complex)
    h_int[0, 2] = 1.0
    h_int[2, 0] = 1.0
    p3 = np.zeros((4, 4), dtype=complex)
    p3[2, 2] = 1.0
    bare_ps = ProjectionSet([p3, np.eye(4, dtype=complex) - p3])
    interaction_residual = decoupling_residual(h_int, bare_ps)

    h_rabi = rabi_hamiltonian(delta_rabi)
    qubit_residual = _max_entry(average_projective(h_rabi, bare_ps)[:2, :2]
                                - h_rabi[:2, :2])
    return {
        "eigen_decomposition": diag_residual,
        "pinch_vs_closed_form": dyad_residual,
        "interaction_decoupling": interaction_residual,
        "qubit_block_distortion": qubit_residual,
    }
