import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pampa import oracle, transform
from pampa.errors import DomainError
from pampa.systems import Euler, IdealMHD, advection, burgers

LN_E_MINUS_1 = 0.5413248546129181  # ln(e - 1)
LN_2 = 0.6931471805599453


def test_euler_density_channel():
    sys = Euler(1.4, rho_ref=1.0)
    U = sys.from_primitive(np.array([1.0, 0.0, 1.0]))
    W = transform.to_transformed(sys, U)
    assert W[0] == pytest.approx(LN_E_MINUS_1, rel=1e-14)
    assert W[2] == pytest.approx(0.0, abs=1e-14)  # s = ln 1 - gamma ln 1
    rho_back = transform.from_transformed(sys, np.array([0.0, 0.0, 0.0]))[0]
    assert rho_back == pytest.approx(LN_2, rel=1e-14)


def test_scalar_map():
    sys = advection(0.0, 1.0)
    assert transform.to_transformed(sys, np.array([0.5]))[0] == 0.5
    assert transform.from_transformed(sys, np.array([-3.0]))[0] == 0.0
    assert transform.from_transformed(sys, np.array([2.0]))[0] == 1.0


@given(st.floats(min_value=-60.0, max_value=60.0, allow_nan=False))
def test_scalar_idempotence(w):
    sys = burgers(-1.0, 2.0)
    u = transform.from_transformed(sys, np.array([w]))
    w2 = transform.to_transformed(sys, u)[0]
    assert w2 == pytest.approx(min(max(w, 0.0), 1.0), abs=1e-12)


def test_transform_rejects_out_of_domain():
    sys = Euler(1.4)
    with pytest.raises(DomainError):
        transform.to_transformed(sys, np.array([-1.0, 0.0, 1.0]))
    with pytest.raises(DomainError):
        transform.to_transformed(sys, sys.from_primitive(np.array([1.0, 0.0, -0.5])))


def test_softplus_overflow_guard():
    # q ~ 1000 must not overflow and must round-trip the density exactly
    big = np.array([1000.0])
    rho = transform.softplus(big)
    assert np.isfinite(rho)
    assert rho[0] == pytest.approx(1000.0, rel=1e-15)
    assert transform.inv_softplus(rho)[0] == pytest.approx(1000.0, rel=1e-15)
    tiny = transform.softplus(np.array([-500.0]))
    assert tiny[0] > 0.0


def test_unconditional_membership_bulk():
    for sys, seed in [(Euler(1.4), 7), (IdealMHD(gamma=5.0 / 3.0, bx=0.5), 8),
                      (burgers(-1.0, 2.0), 9)]:
        rep = oracle.check_transform_membership(sys, 100_000, seed)
        assert rep.passed, rep.summary()
        assert rep.worst > 0.0 or sys.nvars == 1


def test_round_trip_bulk():
    for sys, seed in [(Euler(1.4), 9), (IdealMHD(gamma=5.0 / 3.0, bx=0.5), 10),
                      (advection(1.0, 2.0), 11)]:
        rep = oracle.check_transform_roundtrip(sys, 20_000, seed)
        assert rep.passed, rep.summary()


def test_euler_jacobian_structure_at_rest():
    # v = 0: zero diagonal; entries (0,1), (1,0), (1,2) populated
    sys = Euler(1.4)
    U = sys.from_primitive(np.array([1.2, 0.0, 0.9]))
    J = transform.jacobian_transformed(sys, U)
    assert np.allclose(np.diag(J), 0.0, atol=0)
    x = 1.2
    expected_01 = x / -np.expm1(-x)  # e^{x-q} * rho / rho_ref
    assert J[0, 1] == pytest.approx(expected_01, rel=1e-13)
    assert J[1, 0] == pytest.approx(1.4 * 0.9 / (1.2 * expected_01), rel=1e-13)
    assert J[1, 2] == pytest.approx(0.9 / 1.2, rel=1e-14)
    assert J[2, 0] == 0.0 and J[2, 1] == 0.0 and J[0, 2] == 0.0


def test_advection_jacobian_constant():
    sys = advection(0.0, 1.0)
    for w in (-2.0, 0.3, 5.0):
        u = transform.from_transformed(sys, np.array([w]))
        assert transform.jacobian_transformed(sys, u)[0, 0] == 1.0


def test_euler_jacobian_eigenvalues():
    sys = Euler(1.4)
    rng = np.random.Generator(np.random.Philox(15))
    states = oracle.sample_states_moderate(sys, rng, 300)
    prim = sys.primitive(states)
    for U, (rho, v, p) in zip(states, prim):
        J = transform.jacobian_transformed(sys, U)
        c = np.sqrt(1.4 * p / rho)
        eig = np.sort(np.linalg.eigvals(J).real)
        assert np.allclose(eig, [v - c, v, v + c], rtol=1e-8, atol=1e-10)


def test_jacobian_similarity_fd():
    for sys, seed in [(Euler(1.4), 5), (IdealMHD(gamma=5.0 / 3.0, bx=0.6), 6)]:
        rep = oracle.check_jacobian_similarity(sys, 300, seed)
        assert rep.passed, rep.summary()


def test_spectral_radius_bounds_jacobian():
    for sys, seed in [(Euler(1.4), 17), (IdealMHD(gamma=5.0 / 3.0, bx=0.9), 18)]:
        rng = np.random.Generator(np.random.Philox(seed))
        states = oracle.sample_states_moderate(sys, rng, 200)
        J = transform.jacobian_transformed(sys, states)
        radius = np.max(np.abs(np.linalg.eigvals(J)), axis=-1)
        bound = transform.spectral_radius(sys, states)
        assert np.all(radius <= bound * (1.0 + 1e-10))
