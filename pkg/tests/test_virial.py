import numpy as np
import pytest

from nscurve import quotient as Qm
from nscurve import virial as V
from nscurve.errors import DomainError, ParameterError
from nscurve.thermo import IdealGas, ThermoConstants, Virial

CS = (12.0, 0.4, -0.3, 0.8)
XS = [0.1, 0.05, 0.025, 0.0125]


def zero_a1(y):
    return 0.0 * y


def test_lambda_zero_path_by_hand():
    c = ThermoConstants(R=1.0, lam=0.0)
    s = V.order0_closed_form(2.0, 0.5, 0.25, 1.0, c, (0.5, 2.0))
    assert s.meta["lambda_zero_path"]
    y = 1.5
    assert s.coeff(1, 0, y) == pytest.approx(0.75 * y * y)
    assert s.coeff(2, 0, y) == pytest.approx(-2.0 / y)
    assert s.coeff(3, 0, y) == 2.0
    assert s.coeff(4, 0, y) == pytest.approx(y ** 4 * (0.5625 * y + 2.0) / 2.0)
    assert s.coeff(5, 0, y) == pytest.approx(0.75 * y ** 3)


def test_h20_from_algebraic_equation():
    c = ThermoConstants(R=2.0, lam=0.5)
    s = V.order0_closed_form(3.0, 0.1, 0.2, 0.3, c)
    y = 1.2
    assert 2.0 * y * s.coeff(2, 0, y) + 2.0 * 3.0 == pytest.approx(c.glam)


@pytest.mark.parametrize("lam", [0.0, 0.3, 1.0])
def test_order0_closed_form_residual(lam):
    c = ThermoConstants(R=1.3, n=3, zeta=0.7, lam=lam)
    s = V.order0_closed_form(*CS, c, (0.5, 2.5))
    assert max(V.order0_residual(s, c, y).max_normalized() for y in np.linspace(0.5, 2.5, 30)) < 1e-9


def test_printed_h40_fails_fifth_equation():
    c = ThermoConstants(lam=0.3)
    s = V.order0_closed_form(*CS, c, h40="printed")
    rs = [V.order0_residual(s, c, y) for y in np.linspace(0.5, 2, 10)]
    assert max(max(r.normalized()[:4]) for r in rs) < 1e-9
    assert max(r.normalized()[4] for r in rs) > 1e-3


def test_h40_forms_agree_without_gravity():
    c = ThermoConstants(lam=0.0)
    a = V.order0_closed_form(*CS, c)
    b = V.order0_closed_form(*CS, c, h40="printed")
    assert a.coeff(4, 0, 1.3) == b.coeff(4, 0, 1.3)


def test_order0_preconditions():
    c = ThermoConstants(R=1.0, g=2.0, lam=0.5)
    with pytest.raises(ParameterError):
        V.order0_closed_form(0.0, 1, 1, 1, c)
    with pytest.raises(ParameterError):
        V.order0_closed_form(1.0, 1, 1, 1, c)
    with pytest.raises(ParameterError):
        V.order0_closed_form(*CS, c, h40="other")
    with pytest.raises(ParameterError):
        V.order0_closed_form(*CS, c, y_domain=(0.0, 1.0))


def test_series_rejects_other_exponents_and_orders():
    s = V.order0_closed_form(*CS, ThermoConstants())
    with pytest.raises(ParameterError):
        V.SeriesSolution(s.coeffs, 0, CS, (0.5, 2.0), d=(2, 1, 0, 4, 3))
    with pytest.raises(ParameterError):
        V.SeriesSolution(s.coeffs, 2, CS, (0.5, 2.0))


def test_coeff_outside_domain():
    s = V.order0_closed_form(*CS, ThermoConstants(), (1.0, 2.0))
    with pytest.raises(DomainError):
        s.coeff(1, 0, 0.5)


@pytest.mark.parametrize("lam", [0.0, 0.4])
def test_order0_ode_matches_closed_form(lam):
    c = ThermoConstants(R=0.9, n=5, lam=lam)
    s = V.order0_closed_form(*CS, c, (1.0, 2.0))
    init = [s.coeff(i, 0, 1.0) for i in (3, 1, 5, 4)]
    tr = V.order0_ode_solve(c, 1.0, init, 2.0)
    for y in np.linspace(1, 2, 11):
        for j, i in enumerate((3, 1, 5, 4)):
            want = s.coeff(i, 0, y)
            assert abs(tr(y)[j] - want) <= 1e-6 * max(1.0, abs(want))


# -- order 1 ------------------------------------------------------------------

C1 = ThermoConstants(R=1.0, n=5, zeta=0.8, lam=0.3)


def solve1(init=(0.5, -0.2, 0.3, 0.1), A1=None, **kw):
    s = V.order0_closed_form(*CS, C1, (1.0, 2.0))
    return V.order1_solve(s, A1 or (lambda y: 0.3 / y), C1, 1.0, list(init), 2.0, **kw)


@pytest.mark.parametrize("form", V.ORDER1_FORMS)
@pytest.mark.parametrize("variant", Qm.R2_VARIANTS)
def test_order1_residual(form, variant):
    s1 = solve1(form=form, r2_variant=variant)
    assert max(V.order1_residual(s1, C1, y).max_normalized() for y in np.linspace(1, 2, 41)) < 1e-7


def test_separable_h31():
    # H30 = c1 is constant, so H31' = -(H20 / c1) H31 = m H31 / y
    s1 = solve1()
    m = 1 - C1.glam / (C1.R * CS[0])
    for y in np.linspace(1, 2, 21):
        assert s1.coeff(3, 1, y) == pytest.approx(0.5 * y ** m, rel=1e-8, abs=1e-12)


def test_h21_constraint_holds():
    s1 = solve1()
    for y in np.linspace(1, 2, 21):
        r = V.order1_residual(s1, C1, y)
        assert abs(r.r2) <= 1e-10 * max(1.0, r.scales[1])


def test_zero_start_still_forces_h21():
    s1 = solve1(init=(0, 0, 0, 0), A1=zero_a1)
    assert s1.coeff(3, 1, 1.7) == 0.0
    assert abs(s1.coeff(2, 1, 1.7)) > 1e-3


def test_order1_preconditions():
    s = V.order0_closed_form(*CS, C1, (1.0, 2.0))
    with pytest.raises(DomainError):
        V.order1_solve(s, zero_a1, C1, 1.0, [0] * 4, 3.0)
    with pytest.raises(ParameterError):
        V.order1_solve(s, zero_a1, C1, 1.0, [0] * 4, 2.0, form="other")
    with pytest.raises(ParameterError):
        V.order1_state(s, 1.5)
    with pytest.raises(ParameterError):
        V.order1_solve(solve1(), zero_a1, C1, 1.0, [0] * 4, 2.0)


def test_order1_state_fields():
    s1 = solve1()
    st = V.order1_state(s1, 1.0)
    assert (st.H31, st.H11, st.H51, st.H41) == pytest.approx((0.5, -0.2, 0.3, 0.1))


# -- reconstruction ---------------------------------------------------------------

def test_reconstruct_at_zero_and_one():
    s = V.order0_closed_form(*CS, C1, (1.0, 2.0))
    y = 1.4
    assert V.reconstruct(s, 0.0, y) == [0.0, 0.0, s.coeff(3, 0, y), 0.0, 0.0]
    assert V.reconstruct(s, 1.0, y) == pytest.approx([s.coeff(i, 0, y) for i in range(1, 6)])
    s1 = solve1()
    want = [s1.coeff(i, 0, y) + s1.coeff(i, 1, y) for i in range(1, 6)]
    assert V.reconstruct(s1, 1.0, y) == pytest.approx(want)
    with pytest.raises(DomainError):
        V.reconstruct(s, -0.1, y)


def test_reconstruct_powers():
    s = V.order0_closed_form(*CS, C1, (1.0, 2.0))
    h = V.reconstruct(s, 0.5, 1.2)
    for i, d in enumerate(V.D_EXPONENTS):
        assert h[i] == pytest.approx(0.5 ** d * s.coeff(i + 1, 0, 1.2))


def test_k0_slopes():
    c = ThermoConstants()
    s = V.order0_closed_form(*CS, c, (1.0, 2.0))
    recs = V.residual_order_check(s, Virial(5), c, 1.5, XS)
    assert recs[0].slope == pytest.approx(3.0, abs=0.05)
    assert recs[1].slope == pytest.approx(2.0, abs=0.05)
    # the last three equations vanish identically at this order
    assert [r.status for r in recs[2:]] == ["noise_floor"] * 3


def test_k1_slopes_not_worse():
    c = ThermoConstants()
    s = V.order0_closed_form(*CS, c, (1.0, 2.0))
    s1 = V.order1_solve(s, zero_a1, c, 1.0, [0] * 4, 2.0)
    k0 = V.residual_order_check(s, Virial(5), c, 1.5, XS)
    k1 = V.residual_order_check(s1, Virial(5), c, 1.5, XS)
    assert all(r.slope is not None and r.slope > 0 for r in k1)
    for a, b in zip(k0, k1):
        if a.slope is not None:
            assert b.slope >= a.slope - 0.05


def test_noise_floor_on_exact_solution():
    c = ThermoConstants(n=2)
    Q = Qm.ideal_gas_quotient(1.0, 1.0, c)
    recs = V.residual_slopes(Q, Virial(2), c, 1.5, XS)
    assert all(r.status == "noise_floor" and r.slope is None for r in recs)
    assert recs[0].as_dict()["equation_index"] == 1


def test_order_check_needs_virial_potential():
    s = V.order0_closed_form(*CS, ThermoConstants())
    with pytest.raises(ParameterError):
        V.residual_order_check(s, IdealGas(5), ThermoConstants(), 1.5, XS)


def test_coefficient_rows():
    s = V.order0_closed_form(*CS, C1, (1.0, 2.0))
    rows = V.coefficient_rows(s, 0, [1.0, 1.5])
    assert rows[1][0] == 1.5 and rows[1][3] == CS[0]
    assert len(rows[0]) == 6
    with pytest.raises(ParameterError):
        V.coefficient_rows(s, 1, [1.0])
