import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nscurve import expr
from nscurve.calculus import ScalarField2, fd_jet, jet_eval
from nscurve.errors import ConfigError, DomainError, ParameterError
from nscurve.thermo import (
    Custom,
    IdealGas,
    ThermoConstants,
    VanDerWaals,
    Virial,
    entropy,
    entropy_field,
    pressure,
    pressure_field,
)

pos = st.floats(min_value=0.2, max_value=5.0)


def test_ideal_pressure_example():
    c = ThermoConstants(R=1.0, n=5)
    assert pressure(IdealGas(5), c, 2.0, 3.0).v == pytest.approx(6.0)


def test_vdw_pressure_example():
    assert pressure(VanDerWaals(3), ThermoConstants(R=1.0, n=3), 1.0, 1.0).v == pytest.approx(0.375)


def test_virial_pressure_example():
    pot = Virial(5, (lambda y: 1.0 + 0.0 * y,))
    assert pressure(pot, ThermoConstants(), 1.0, 1.0).v == pytest.approx(2.0)


def test_entropy_examples():
    c = ThermoConstants(R=1.0, n=5)
    assert entropy(IdealGas(5), c, 1.0, 1.0).v == pytest.approx(2.5)
    assert entropy(IdealGas(5), c, 2.0, 0.7).vx == pytest.approx(-0.5)
    s = entropy(VanDerWaals(3), ThermoConstants(R=1.0, n=3), 1.0, 1.0).v
    assert s == pytest.approx(math.log(2) + 1.5)


def test_vdw_pressure_closed_form():
    # P = 3 R x y / (3 - x) - 9 R x^2 / 8
    c = ThermoConstants(R=1.7, n=3)
    for x, y in [(0.5, 0.8), (2.2, 1.4), (1.5, 3.0)]:
        P = pressure(VanDerWaals(3), c, x, y)
        assert P.v == pytest.approx(3 * c.R * x * y / (3 - x) - 9 * c.R * x * x / 8)
        assert P.vy == pytest.approx(3 * c.R * x / (3 - x))


@settings(max_examples=60, deadline=None)
@given(pos, pos, st.sampled_from([1, 2, 3, 5, 7]))
def test_ideal_gas_law(x, y, n):
    c = ThermoConstants(R=1.3, n=n)
    P = pressure(IdealGas(n), c, x, y)
    assert P.v == pytest.approx(c.R * x * y, rel=1e-14)
    assert P.vxx == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(pos, pos)
def test_empty_virial_is_ideal(x, y):
    c = ThermoConstants(n=3)
    a, b = pressure(Virial(3), c, x, y), pressure(IdealGas(3), c, x, y)
    assert a.components() == pytest.approx(b.components(), rel=1e-15, abs=1e-15)
    assert entropy(Virial(3), c, x, y).v == pytest.approx(entropy(IdealGas(3), c, x, y).v, rel=1e-15)


@pytest.mark.parametrize("pot", [IdealGas(5), VanDerWaals(3),
                                 Virial(5, (expr.parse("0.3/y", ("y",)), expr.parse("ln(y)", ("y",))))])
def test_jets_match_fd_of_value_fields(pot):
    c = ThermoConstants(R=1.1, n=pot.n)
    rng = np.random.default_rng(0)
    for _ in range(10):
        x, y = rng.uniform(0.4, 2.4), rng.uniform(0.5, 2.0)
        for f, jet in ((pressure_field(pot, c), pressure(pot, c, x, y)),
                       (entropy_field(pot, c), entropy(pot, c, x, y))):
            d = fd_jet(f, x, y, 1e-4)
            assert jet.vx == pytest.approx(d.vx, rel=1e-6, abs=1e-6)
            assert jet.vy == pytest.approx(d.vy, rel=1e-6, abs=1e-6)
            assert jet.vxx == pytest.approx(d.vxx, rel=1e-4, abs=1e-4)


def test_custom_potential_matches_ideal():
    pot = Custom(fn=expr.parse("2.5*ln(y) - ln(x)"), domain=lambda x, y: x > 0 and y > 0)
    c = ThermoConstants(n=5)
    assert pressure(pot, c, 1.5, 0.8).v == pytest.approx(pressure(IdealGas(5), c, 1.5, 0.8).v)


def test_domains():
    c = ThermoConstants(n=3)
    with pytest.raises(DomainError):
        pressure(VanDerWaals(3), c, 3.0, 1.0)
    with pytest.raises(DomainError):
        pressure(VanDerWaals(3), c, 3.0 - 1e-13, 1.0)
    with pytest.raises(DomainError):
        pressure(IdealGas(3), c, -1.0, 1.0)


def test_constants_validation():
    with pytest.raises(ParameterError):
        ThermoConstants(R=0)
    with pytest.raises(ParameterError):
        ThermoConstants(n=-1)
    assert ThermoConstants(g=2.0, lam=0.5).glam == 1.0


# -- expression grammar ----------------------------------------------------------

def test_expression_precedence():
    e = expr.parse("1 + 2*x^2^0.5 - -y/4")
    assert e(3.0, 8.0) == pytest.approx(1 + 2 * 3.0 ** (2 ** 0.5) + 2.0)


def test_expression_functions_and_jets():
    e = expr.parse("pow(x, 3) * ln(y) + exp(0) + sqrt(4)")
    assert e(2.0, math.e) == pytest.approx(11.0)
    j = jet_eval(ScalarField2(e), 2.0, math.e)
    assert j.vx == pytest.approx(12.0)
    assert j.vy == pytest.approx(8.0 / math.e)


@pytest.mark.parametrize("text", ["x +", "foo(x)", "z", "pow(x)", "(x", "1 $ 2", ""])
def test_expression_errors(text):
    with pytest.raises(ConfigError):
        expr.parse(text)


def test_render_round_trip():
    e = expr.parse("x*(y + 2) / 3")
    again = expr.parse(expr.render(e.tree))
    assert again(1.3, 0.4) == pytest.approx(e(1.3, 0.4))
