import numpy as np
import pytest

from pampa import oracle
from pampa.errors import DomainError
from pampa.systems import (Euler, IdealMHD, PositivityFloors, ScalarBounds,
                           advection, burgers)

SQRT_14 = 1.1832159566199232  # sqrt(1.4)
SQRT_53 = 1.2909944487358056  # sqrt(5/3)


def test_euler_flux_rest_state():
    sys = Euler(1.4)
    U = sys.from_primitive(np.array([1.0, 0.0, 1.0]))
    assert np.allclose(U, [1.0, 0.0, 2.5], rtol=0, atol=1e-15)
    assert np.allclose(sys.flux(U), [0.0, 1.0, 0.0], rtol=0, atol=1e-15)


def test_scalar_fluxes():
    assert burgers(-5, 5).flux(np.array([2.0]))[0] == 2.0
    assert advection(0, 1).flux(np.array([0.7]))[0] == 0.7


def test_euler_pressure():
    sys = Euler(1.4)
    assert sys.pressure(np.array([1.0, 0.0, 2.5])) == pytest.approx(1.0, rel=1e-14)
    # E = rho v^2 / 2 exactly: pressure sits on the boundary of G
    assert sys.pressure(np.array([1.0, 1.0, 0.5])) == 0.0
    with pytest.raises(DomainError):
        sys.pressure(np.array([-1.0, 0.0, 1.0]))


def test_mhd_pressure_all_magnetic():
    sys = IdealMHD(gamma=5.0 / 3.0, bx=2.0)
    U = np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5 * 2.0 ** 2])
    assert sys.pressure(U) == 0.0


def test_max_wave_speeds():
    sys = Euler(1.4)
    U = sys.from_primitive(np.array([1.0, 0.0, 1.0]))
    assert sys.max_wave_speed(U) == pytest.approx(SQRT_14, rel=1e-14)
    adv = advection(0.0, 1.0)
    assert adv.max_wave_speed(np.array([[0.3], [0.9]])) == pytest.approx([1.0, 1.0])
    mhd = IdealMHD(gamma=5.0 / 3.0, bx=0.0)
    U = mhd.from_primitive(np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]))
    assert mhd.max_wave_speed(U) == pytest.approx(SQRT_53, rel=1e-14)


def test_idp_pair_speed():
    sys = Euler(1.4)
    U = sys.from_primitive(np.array([1.0, 0.0, 1.0]))
    assert sys.pair_speed(U, U) == pytest.approx(SQRT_14, rel=1e-14)
    b = burgers(-5, 5)
    assert b.pair_speed(np.array([2.0]), np.array([-1.0])) == 2.0
    mhd = IdealMHD(gamma=5.0 / 3.0, bx=0.7)
    V = mhd.from_primitive(np.array([1.0, 0.4, 0.0, 0.0, 0.3, 0.1, 2.0]))
    # identical states with equal B: correction term vanishes
    assert mhd.pair_speed(V, V) == pytest.approx(mhd.max_wave_speed(V), rel=1e-14)


def test_in_domain():
    adv = advection(0.0, 1.0)
    assert adv.in_domain(np.array([0.5]), ScalarBounds(0.0, 1.0))
    sys = Euler(1.4)
    bad = sys.from_primitive(np.array([1.0, 0.0, -0.1]))
    assert not sys.in_domain(bad)
    # near-vacuum background: E = 1e-12 so p = 0.4e-12 > eps_p = 1e-13
    U = np.array([1.0, 0.0, 1e-12])
    assert sys.in_domain(U, PositivityFloors(1e-13, 1e-13))
    assert not sys.in_domain(np.array([1.0, np.nan, 1.0]))


def test_primitive_round_trip_pressure():
    sys = Euler(1.4)
    rng = np.random.Generator(np.random.Philox(3))
    rho = np.exp(rng.uniform(np.log(1e-6), np.log(1e3), 5000))
    p = np.exp(rng.uniform(np.log(1e-8), np.log(1e6), 5000))
    v = rng.uniform(-5.0, 5.0, 5000) * np.sqrt(sys.gamma * p / rho)
    prim = np.stack([rho, v, p], axis=-1)
    back = sys.primitive(sys.from_primitive(prim))
    assert np.max(np.abs(back[:, 2] - p) / p) < 1e-13


def test_mhd_reduces_to_euler_without_field():
    mhd = IdealMHD(gamma=1.4, bx=0.0)
    eul = Euler(gamma=1.4)
    rng = np.random.Generator(np.random.Philox(4))
    rho = rng.uniform(0.1, 10.0, 200)
    v = rng.uniform(-3.0, 3.0, 200)
    p = rng.uniform(0.1, 10.0, 200)
    zero = np.zeros_like(rho)
    Um = mhd.from_primitive(np.stack([rho, v, zero, zero, zero, zero, p], axis=-1))
    Ue = eul.from_primitive(np.stack([rho, v, p], axis=-1))
    Fm = mhd.flux(Um)
    Fe = eul.flux(Ue)
    assert np.allclose(Fm[:, [0, 1, 6]], Fe, rtol=1e-15, atol=1e-15)


def test_lf_splitting_sampled():
    for sys, seed in [(Euler(1.4), 42), (IdealMHD(gamma=5.0 / 3.0, bx=0.0), 43),
                      (burgers(-1.0, 2.0), 44), (advection(0.0, 1.0), 45)]:
        rep = oracle.sample_lf_splitting(sys, 20_000, seed)
        assert rep.passed, rep.summary()


def test_lf_splitting_fails_with_halved_speed():
    rep = oracle.sample_lf_splitting(burgers(-1.0, 2.0), 20_000, 42, lam_scale=0.5)
    assert not rep.passed


def test_splitting_monotone_in_lambda():
    assert oracle.splitting_monotone_in_lambda(Euler(1.4), 1000, 21)
