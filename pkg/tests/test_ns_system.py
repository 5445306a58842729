import numpy as np
import pytest

from nscurve.calculus import ScalarField2, fd_jet, jet_eval
from nscurve.errors import DomainError, ParameterError
from nscurve.ns_system import (
    FlowFields,
    constant_state,
    ideal_gas_ns_solution,
    ns_residual,
    vdw_f1,
    vdw_ns_solution,
)
from nscurve.thermo import IdealGas, ThermoConstants, VanDerWaals, entropy_field, pressure_field


def fd_residual(f, pot, c, t, a, h=1e-3):
    """The three balance laws assembled only from central differences."""
    u, rho, th = (fd_jet(g, t, a, h) for g in (f.u, f.rho, f.theta))
    P = fd_jet(pressure_field(pot, c), rho.v, th.v, h)
    S = fd_jet(entropy_field(pot, c), rho.v, th.v, h)
    p_a = P.vx * rho.vy + P.vy * th.vy
    s_mat = S.vx * (rho.vx + u.v * rho.vy) + S.vy * (th.vx + u.v * th.vy)
    mom = rho.v * (u.vx + u.v * u.vy) + p_a - c.zeta * u.vyy - c.glam * rho.v
    mass = rho.vx + rho.vy * u.v + rho.v * u.vy
    en = rho.v * th.v * s_mat - c.kappa * th.vyy - c.zeta * u.vy ** 2
    return mom, mass, en


def test_constant_state_without_gravity():
    c = ThermoConstants(lam=0.0)
    for pot in (IdealGas(5), VanDerWaals(5)):
        r = ns_residual(constant_state(0.0, 1.2, 0.8), pot, c, 0.3, 0.7)
        assert r.raw() == (0.0, 0.0, 0.0)


def test_constant_state_with_gravity():
    c = ThermoConstants(lam=0.5, g=9.8)
    r = ns_residual(constant_state(0.0, 1.2, 0.8), IdealGas(5), c, 0.3, 0.7)
    assert r.r_momentum == pytest.approx(-4.9 * 1.2)
    assert r.r_mass == 0.0 and r.r_energy == 0.0


def test_jet_residual_matches_fd_assembly():
    c = ThermoConstants(R=1.2, n=3, kappa=0.6, zeta=0.4, lam=0.2)
    f = FlowFields(ScalarField2(lambda t, a: t * a + 0.3 * a * a),
                   ScalarField2(lambda t, a: 1 + 0.2 * t * a),
                   ScalarField2(lambda t, a: 1.5 + 0.1 * a * a * t))
    for pot in (IdealGas(3), VanDerWaals(3)):
        r = ns_residual(f, pot, c, 0.4, 0.6)
        d1 = fd_residual(f, pot, c, 0.4, 0.6, 4e-2)
        d2 = fd_residual(f, pot, c, 0.4, 0.6, 2e-2)
        for exact, a, b in zip(r.raw(), d1, d2):
            # central differences converge at second order
            assert abs(exact - b) < 1e-3
            assert abs(exact - b) <= abs(exact - a) / 3 + 1e-10


def test_mass_residual_for_linear_velocity():
    # rho = rho(t), u linear in a: r_mass = rho_t + rho u_a exactly
    f = FlowFields(ScalarField2(lambda t, a: 2 * a + t),
                   ScalarField2(lambda t, a: 1 + t * t + 0.0 * a),
                   ScalarField2(lambda t, a: 1.0 + 0.0 * t))
    r = ns_residual(f, IdealGas(5), ThermoConstants(), 0.5, 0.3)
    assert r.r_mass == pytest.approx(2 * 0.5 + 1.25 * 2)


@pytest.mark.parametrize("n", [2, 5])
def test_ideal_family_accepted_density(n):
    c = ThermoConstants(n=n, zeta=0.7, lam=0.4)
    f = ideal_gas_ns_solution(1.0, 1.0, 1.0, 1.0, c)
    rng = np.random.default_rng(n)
    for t, a in rng.uniform(0, 1, (40, 2)):
        assert ns_residual(f, IdealGas(n), c, t, a).max_normalized() < 1e-9


def test_ideal_family_printed_density_fails():
    c = ThermoConstants(n=5)
    f = ideal_gas_ns_solution(1.0, 1.0, 1.0, 1.0, c, density="printed")
    worst = max(ns_residual(f, IdealGas(5), c, t, a).max_normalized()
                for t in np.linspace(0, 1, 5) for a in np.linspace(0.2, 1, 5))
    assert worst > 0.1


def test_ideal_family_density_scale_must_be_one():
    c = ThermoConstants(n=5)
    f = ideal_gas_ns_solution(1.0, 1.0, 1.0, 1.0, c, rho_scale=2.0)
    r = ns_residual(f, IdealGas(5), c, 0.5, 0.5)
    assert r.r_momentum == pytest.approx(0.0, abs=1e-12)
    assert r.r_mass == pytest.approx(0.0, abs=1e-12)
    assert abs(r.r_energy) > 1e-3


def test_ideal_family_degenerate_and_values():
    c = ThermoConstants(n=5, lam=0.0)
    f = ideal_gas_ns_solution(1.0, 2.0, 0.0, 1.0, c)
    assert jet_eval(f.u, 0.0, 0.6).v == pytest.approx(0.3)
    f0 = ideal_gas_ns_solution(0.0, 2.0, 1.0, 1.0, ThermoConstants(lam=0.5))
    u = jet_eval(f0.u, 0.7, 0.3)
    assert u.v == pytest.approx((9.8 * 0.5 * 4 * 0.7 + 1) / 4)
    assert u.vy == 0.0


def test_ideal_family_theta_independent_of_a():
    f = ideal_gas_ns_solution(0.5, 1.0, 0.2, 0.7, ThermoConstants())
    rng = np.random.default_rng(1)
    for t, a in rng.uniform(0, 2, (10, 2)):
        j = jet_eval(f.theta, t, a)
        assert j.vy == 0.0 and j.vyy == 0.0


def test_ideal_family_domain():
    f = ideal_gas_ns_solution(1.0, -1.0, 0.0, 1.0, ThermoConstants())
    with pytest.raises(DomainError):
        ns_residual(f, IdealGas(5), ThermoConstants(), 0.5, 0.0)


VDW_C = ThermoConstants(n=3, zeta=0.5, lam=0.3)
VDW_ARGS = (0.2, 0.1, 0.5, 0.3, (0.0, 2.0), VDW_C, (0.0, 1.0))


def test_vdw_initial_condition_identity():
    f = vdw_ns_solution(*VDW_ARGS)
    T = 0.5
    want = 0.2 * 0.4 / T * abs(1 - 3 * T) ** (-2 / 3) + 2.0
    assert jet_eval(f.theta, 0.0, 0.4).v == pytest.approx(want, rel=1e-14)


def test_vdw_density_is_a_independent():
    f = vdw_ns_solution(*VDW_ARGS)
    j = jet_eval(f.rho, 0.3, 0.8)
    assert j.vy == 0.0 and j.v == pytest.approx(1 / 0.53)


def test_vdw_energy_form_solves_balance_laws():
    f = vdw_ns_solution(*VDW_ARGS, f2_ode="energy")
    worst = max(ns_residual(f, VanDerWaals(3), VDW_C, t, a).max_normalized()
                for t in np.linspace(0, 1, 6) for a in np.linspace(0, 1, 6))
    assert worst < 1e-8


def test_vdw_printed_form_fails_energy_only():
    f = vdw_ns_solution(*VDW_ARGS, f2_ode="printed")
    rs = [ns_residual(f, VanDerWaals(3), VDW_C, t, a) for t in (0.2, 0.7) for a in (0.1, 0.9)]
    assert max(max(r.normalized()[:2]) for r in rs) < 1e-8
    assert max(r.normalized()[2] for r in rs) > 0.1


def test_vdw_f1_at_known_point():
    # hand evaluation of the closed form at t = 0, n = 3
    c = VDW_C
    T, W = 0.5, -0.5
    want = (c.R * 0.2 * 3 * abs(W) ** (-2 / 3) * (3 - 6 * T)) / (6 * 0.1 * T * 1)
    assert vdw_f1(0.0, 0.2, 0.1, 0.5, c) == pytest.approx(want)


def test_vdw_preconditions():
    with pytest.raises(ParameterError):
        vdw_ns_solution(0.2, 0.0, 0.5, 0.3, (0.0, 1.0), VDW_C)
    with pytest.raises(ParameterError):
        vdw_ns_solution(0.2, 0.1, 0.5, 0.3, (0.0, 1.0), ThermoConstants(n=2))
    # c2 t + c3 = t vanishes at t = 0 and W = 1 - 3t at t = 1/3
    with pytest.raises(DomainError):
        vdw_ns_solution(0.2, 1.0, 0.0, 0.3, (0.0, 1.0), VDW_C, (0.0, 1.0))
