import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iondecoh.numerics import (AccuracyError, OdeSpec, QuadratureError,
                               QuadratureSpec, integrate,
                               integrate_semi_infinite, principal_value,
                               rk4_evolve)

SPEC = QuadratureSpec()


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=-1.0, rel_tol=1e-10, max_subdivisions=10)
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0, rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=1e-12, rel_tol=1e-10, max_subdivisions=0)
    with pytest.raises(ValueError):
        OdeSpec(step=0.0)
    with pytest.raises(ValueError):
        OdeSpec(step=0.1, error_tol=-1.0)


def test_integrate_polynomial_exact():
    assert integrate(lambda x: x * x, 0.0, 1.0, SPEC) == pytest.approx(
        1.0 / 3.0, rel=1e-13)


def test_integrate_sine():
    assert integrate(np.sin, 0.0, np.pi, SPEC) == pytest.approx(2.0, rel=1e-10)


def test_integrate_gaussian():
    val = integrate(lambda x: np.exp(-x * x), -6.0, 6.0, SPEC)
    assert val == pytest.approx(np.sqrt(np.pi), rel=1e-10)


def test_integrate_empty_interval():
    assert integrate(np.exp, 1.5, 1.5, SPEC) == 0.0


def test_integrate_rejects_reversed_interval():
    with pytest.raises(ValueError):
        integrate(np.exp, 1.0, 0.0, SPEC)


def test_integrate_budget_exhaustion_reports_best():
    tight = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-300, max_subdivisions=3)
    with pytest.raises(QuadratureError) as err:
        integrate(lambda x: np.sqrt(abs(x)), -1.0, 2.0, tight)
    assert np.isfinite(err.value.best_estimate)
    assert err.value.error_estimate >= 0.0


@settings(max_examples=60, deadline=None)
@given(st.tuples(*[st.floats(-3, 3) for _ in range(4)]),
       st.floats(-2, 2), st.floats(0.1, 3))
def test_integrate_cubic_is_exact(coeffs, a, width):
    c0, c1, c2, c3 = coeffs
    b = a + width
    f = lambda x: c0 + c1 * x + c2 * x ** 2 + c3 * x ** 3
    exact = (c0 * (b - a) + c1 * (b * b - a * a) / 2
             + c2 * (b ** 3 - a ** 3) / 3 + c3 * (b ** 4 - a ** 4) / 4)
    assert integrate(f, a, b, SPEC) == pytest.approx(exact, abs=1e-9)


def test_semi_infinite_exponential():
    val = integrate_semi_infinite(lambda x: np.exp(-x), 0.0, 1.0, SPEC)
    assert val == pytest.approx(1.0, rel=1e-10)


def test_semi_infinite_with_slow_decay_scale():
    # integrand x e^{-x/2} decays on scale 2, total 4
    val = integrate_semi_infinite(lambda x: x * np.exp(-x / 2.0), 0.0, 2.0,
                                  SPEC)
    assert val == pytest.approx(4.0, rel=1e-10)


def test_semi_infinite_rejects_bad_scale():
    with pytest.raises(ValueError):
        integrate_semi_infinite(np.exp, 0.0, 0.0, SPEC)


def test_principal_value_constant_numerator_is_zero():
    # p.v. of 1/(w - pole) over a symmetric window vanishes
    val = principal_value(lambda w: 1.0, 0.0, 1.0, SPEC)
    assert abs(val) <= 1e-10


def test_principal_value_exponential_kernel():
    # p.v. integral of e^w/w over [-1, 1] equals 2*Shi(1)
    val = principal_value(np.exp, 0.0, 1.0, SPEC)
    assert val == pytest.approx(2.114501750751457, rel=1e-9)


def test_principal_value_linear_numerator():
    # p.v. of w/(w - p) over [p-L, p+L] is exactly 2L
    val = principal_value(lambda w: w, 0.25, 0.75, SPEC)
    assert val == pytest.approx(1.5, rel=1e-10)


def test_rk4_exponential_decay():
    ode = OdeSpec(step=0.01)
    times, path = rk4_evolve(np.array([[-1.0]]), np.array([1.0]), 2.0, ode)
    assert times[-1] == pytest.approx(2.0, abs=1e-14)
    assert path[-1, 0] == pytest.approx(np.exp(-2.0), rel=1e-9)


def test_rk4_accepts_linear_callable():
    ode = OdeSpec(step=0.01)
    times, path = rk4_evolve(lambda y: -y, np.array([1.0]), 2.0, ode)
    assert path[-1, 0] == pytest.approx(np.exp(-2.0), rel=1e-9)


def test_rk4_rotation_preserves_norm():
    a = np.array([[0.0, -1.0], [1.0, 0.0]])
    ode = OdeSpec(step=0.001)
    times, path = rk4_evolve(a, np.array([1.0, 0.0]), 2.0 * np.pi, ode)
    norms = np.hypot(path[:, 0], path[:, 1])
    assert np.max(np.abs(norms - 1.0)) < 1e-10
    assert path[-1, 0] == pytest.approx(1.0, abs=1e-9)


def test_rk4_sampling_lands_on_endpoint():
    ode = OdeSpec(step=0.01)
    times, path = rk4_evolve(np.array([[-1.0]]), np.array([1.0]), 0.997, ode,
                             sample_every=10)
    assert times[0] == 0.0
    assert times[-1] == pytest.approx(0.997, abs=1e-14)
    assert np.all(np.diff(times) > 0)
    assert path.shape[0] == times.size


def test_rk4_zero_horizon():
    times, path = rk4_evolve(np.array([[-1.0]]), np.array([0.5]), 0.0,
                             OdeSpec(step=0.01))
    assert times.size == 1 and path[0, 0] == 0.5


def test_rk4_error_check_accepts_smooth_problem():
    ode = OdeSpec(step=0.01, error_check=True, error_tol=1e-6)
    times, path = rk4_evolve(np.array([[-1.0]]), np.array([1.0]), 1.0, ode)
    assert path[-1, 0] == pytest.approx(np.exp(-1.0), rel=1e-8)


def test_rk4_error_check_rejects_coarse_step():
    a = np.array([[0.0, -40.0], [40.0, 0.0]])
    ode = OdeSpec(step=0.2, error_check=True, error_tol=1e-10)
    with pytest.raises(AccuracyError):
        rk4_evolve(a, np.array([1.0, 0.0]), 2.0, ode)


def test_rk4_overflow_raises():
    # strongly unstable generator overflows double range before t_end
    with pytest.raises(AccuracyError):
        rk4_evolve(np.array([[1000.0]]), np.array([1.0]), 10.0,
                   OdeSpec(step=0.1))


def test_rk4_fourth_order_convergence():
    a = np.array([[-1.0]])
    y0 = np.array([1.0])
    errs = []
    for h in (0.05, 0.025):
        _, path = rk4_evolve(a, y0, 1.0, OdeSpec(step=h))
        errs.append(abs(path[-1, 0] - np.exp(-1.0)))
    ratio = errs[0] / errs[1]
    assert 12.0 <= ratio <= 20.0


def test_rk4_preserves_linear_invariant():
    # columns sum to zero, so the total population 1.y is conserved
    a = np.array([[-2.0, 1.0], [2.0, -1.0]])
    _, path = rk4_evolve(a, np.array([0.7, 0.3]), 10.0, OdeSpec(step=0.01))
    drift = np.max(np.abs(path.sum(axis=1) - 1.0))
    assert drift <= 1e-12 * 10.0


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.5), st.floats(0.5, 4.0))
def test_rk4_linear_matches_expm(rate, t_end):
    ode = OdeSpec(step=1e-3)
    times, path = rk4_evolve(np.array([[-rate]]), np.array([1.0]), t_end, ode,
                             sample_every=50)
    assert path[-1, 0] == pytest.approx(np.exp(-rate * t_end), rel=1e-9)
