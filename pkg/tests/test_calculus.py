import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from nscurve import calculus as C
from nscurve.calculus import Jet2, OdeSystem, ScalarField2, fd_jet, jet_eval, loglog_slope, ode_solve
from nscurve.errors import DomainError, DomainExit, EvaluationError, InsufficientData, StepFailure

from fieldgen import richardson_fields

reals = st.floats(min_value=0.3, max_value=3.0)


def field(fn, domain=None):
    return ScalarField2(fn, domain)


# -- jets ------------------------------------------------------------------------

def test_product_of_variables():
    j = jet_eval(field(lambda x, y: x * y), 2.0, 3.0)
    assert j.components() == (6.0, 3.0, 2.0, 0.0, 1.0, 0.0)


def test_plain_and_jet_values_agree_exactly():
    f = field(lambda x, y: C.exp(x) / (1 + y * y) + C.power(x, 2.5) * C.log(y))
    j = jet_eval(f, 1.3, 0.7)
    assert j.v == f(1.3, 0.7)


def test_hand_derivatives_of_exp_sin():
    # f = exp(x) sin(y)
    f = field(lambda x, y: C.exp(x) * C.sin(y))
    x, y = 0.4, 1.1
    j = jet_eval(f, x, y)
    ex, s, c = math.exp(x), math.sin(y), math.cos(y)
    want = (ex * s, ex * s, ex * c, ex * s, ex * c, -ex * s)
    assert np.allclose(j.components(), want, rtol=1e-14, atol=0)


@settings(max_examples=50, deadline=None)
@given(reals, reals, st.floats(-2.5, 2.5))
def test_power_rule(x, y, p):
    j = jet_eval(field(lambda a, b: C.power(a * b, p)), x, y)
    u = x * y
    assert j.vx == pytest.approx(p * u ** (p - 1) * y, rel=1e-12, abs=1e-12)
    assert j.vxx == pytest.approx(p * (p - 1) * u ** (p - 2) * y * y, rel=1e-11, abs=1e-11)
    assert j.vxy == pytest.approx(p * p * u ** (p - 1), rel=1e-11, abs=1e-11)


@settings(max_examples=50, deadline=None)
@given(reals, reals)
def test_quotient_rule_matches_fd(x, y):
    f = field(lambda a, b: (a * a + b) / (1 + a * b))
    j = jet_eval(f, x, y)
    d = fd_jet(f, x, y, 1e-4)
    for a, b in zip(j.components()[1:], d.components()[1:]):
        assert a == pytest.approx(b, rel=1e-5, abs=1e-6)


def test_nested_jet_gives_third_derivative():
    # d^3/dx^3 of x^4 at x=2 is 48
    inner = Jet2.variable_x(2.0)
    outer = Jet2(inner, 1.0, 0.0)
    out = outer * outer * outer * outer
    assert out.vxx.vx == pytest.approx(48.0)
    assert out.vx.v == pytest.approx(32.0)


def test_power_rejects_negative_base_with_fractional_exponent():
    with pytest.raises(EvaluationError):
        jet_eval(field(lambda x, y: C.power(x - 3, 0.5)), 1.0, 1.0)


def test_abs_power_real_branch():
    j = jet_eval(field(lambda x, y: C.abs_power(x, 0.5)), -4.0, 0.0)
    assert j.v == pytest.approx(2.0)
    assert j.vx == pytest.approx(-0.25)


def test_lift_chain_rule():
    # g(y) = y^3 known through (g, g', g'') at y=2, composed with y = x*x
    y = Jet2.variable_x(1.5) * Jet2.variable_x(1.5)
    out = C.lift(y, 2.25 ** 3, 3 * 2.25 ** 2, 6 * 2.25)
    direct = y * y * y
    assert np.allclose(out.components(), direct.components())


def test_domain_error():
    f = field(lambda x, y: C.log(x), lambda x, y: x > 0)
    with pytest.raises(DomainError):
        jet_eval(f, -1.0, 0.0)


def test_non_finite_is_evaluation_error():
    with pytest.raises(EvaluationError):
        jet_eval(field(lambda x, y: 1.0 / (x - x)), 1.0, 1.0)


def test_richardson_ratio_on_grammar_fields():
    rs = [r for _, _, r in richardson_fields(20, seed=5)]
    assert all(3.5 <= r <= 4.5 for r in rs)


def test_fd_jet_rejects_stencil_outside_domain():
    f = field(lambda x, y: C.sqrt(x), lambda x, y: x > 0)
    with pytest.raises(DomainError):
        fd_jet(f, 0.01, 0.0, 0.1)


# -- ODE integrator ------------------------------------------------------------------

def test_exponential_growth():
    tr = ode_solve(OdeSystem(1, lambda t, y: [y[0]]), 0.0, [1.0], 1.0)
    assert tr(1.0)[0] == pytest.approx(math.e, rel=1e-9)


def test_harmonic_oscillator_dense_output():
    sys = OdeSystem(2, lambda t, y: [y[1], -y[0]])
    tr = ode_solve(sys, 0.0, [0.0, 1.0], 10.0, rel_tol=1e-11, abs_tol=1e-13)
    for t in np.linspace(0, 10, 37):
        assert tr(t)[0] == pytest.approx(math.sin(t), abs=1e-8)
        assert tr.derivative(t)[0] == pytest.approx(math.cos(t), abs=1e-7)


def test_backward_integration():
    tr = ode_solve(OdeSystem(1, lambda t, y: [-2 * t * y[0]]), 1.0, [math.exp(-1)], -1.0)
    for t in np.linspace(-1, 1, 11):
        assert tr(t)[0] == pytest.approx(math.exp(-t * t), rel=1e-8)


def test_against_scipy_dop853():
    # Lotka-Volterra, an independent reference integration
    def rhs(t, y):
        return [1.1 * y[0] - 0.4 * y[0] * y[1], 0.1 * y[0] * y[1] - 0.4 * y[1]]

    tr = ode_solve(OdeSystem(2, rhs), 0.0, [10.0, 10.0], 15.0, rel_tol=1e-11, abs_tol=1e-12)
    ref = solve_ivp(rhs, (0, 15), [10.0, 10.0], method="DOP853", rtol=1e-12, atol=1e-12,
                    dense_output=True)
    for t in np.linspace(0, 15, 31):
        assert np.allclose(tr(t), ref.sol(t), rtol=1e-7, atol=1e-8)


def test_dense_second_derivative():
    tr = ode_solve(OdeSystem(1, lambda t, y: [math.cos(t)]), 0.0, [0.0], 3.0, max_step=0.01)
    for t in (0.3, 1.7, 2.9):
        assert tr.second_derivative(t)[0] == pytest.approx(-math.sin(t), abs=1e-5)


def test_domain_exit():
    # y' = 1 hits the domain boundary y < 1 at t = 1
    sys = OdeSystem(1, lambda t, y: [1.0], lambda t, y: y[0] < 1.0)
    with pytest.raises(DomainExit):
        ode_solve(sys, 0.0, [0.0], 2.0)


def test_blow_up_is_step_failure():
    sys = OdeSystem(1, lambda t, y: [y[0] ** 2])
    with pytest.raises(StepFailure):
        ode_solve(sys, 0.0, [1.0], 2.0)


def test_query_outside_interval():
    tr = ode_solve(OdeSystem(1, lambda t, y: [0.0]), 0.0, [1.0], 1.0)
    with pytest.raises(DomainError):
        tr(1.5)


# -- slopes -------------------------------------------------------------------------------

def test_loglog_slope_exact_power():
    xs = [0.1, 0.05, 0.025, 0.0125]
    assert loglog_slope([(x, 7 * x ** 3) for x in xs]) == pytest.approx(3.0)


def test_loglog_slope_needs_three_points():
    with pytest.raises(InsufficientData):
        loglog_slope([(0.1, 1.0), (0.05, 0.5)])


def test_loglog_slope_requires_decreasing_x():
    with pytest.raises(ValueError):
        loglog_slope([(0.1, 1.0), (0.2, 0.5), (0.05, 0.1)])
