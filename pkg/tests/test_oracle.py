import numpy as np
import pytest

from pampa import oracle, run as run_mod
from pampa.config import build_system, load_config
from pampa.errors import ConfigError
from pampa.systems import Euler, burgers


def test_thm43_eps_01():
    res = oracle.thm43_counterexample(0.1)
    assert res.continuous_avg == pytest.approx(1.1, abs=1e-12)
    assert res.continuous_avg > 1.0
    assert 0.0 <= res.idp_avg <= 1.0
    assert res.theta == pytest.approx(4.0 / 13.0, rel=1e-13)
    assert res.limited_mid == 1.0


def test_thm43_eps_024():
    res = oracle.thm43_counterexample(0.24)
    assert res.continuous_avg == pytest.approx(1.0066666666666666, rel=1e-13)
    assert res.continuous_avg > 1.0
    assert 0.0 <= res.idp_avg <= 1.0


def test_thm43_boundary_ratio():
    # at dt/dx = 2*eps/3 the continuous-flux update sits exactly on 1
    eps = 0.1
    res = oracle.thm43_counterexample(eps, ratio=2.0 * eps / 3.0)
    assert res.continuous_avg == pytest.approx(1.0, abs=1e-15)


def test_thm43_rejects_bad_eps():
    with pytest.raises(ConfigError):
        oracle.thm43_counterexample(0.3)


def test_splitting_deterministic_and_identical_states():
    sys = Euler(1.4)
    r1 = oracle.sample_lf_splitting(sys, 5000, 42)
    r2 = oracle.sample_lf_splitting(sys, 5000, 42)
    assert r1.worst_margin == r2.worst_margin
    U = sys.from_primitive(np.array([[1.0, 0.3, 2.0]]))
    state = oracle._splitting_states(sys, U, U)
    assert np.array_equal(state, U)


def test_splitting_detects_undersized_speed():
    rep = oracle.sample_lf_splitting(burgers(-1.0, 2.0), 20_000, 42,
                                     lam_scale=0.5)
    assert rep.n_violations > 0
    assert rep.first_violation is not None


def test_domain_sweep_clean_run():
    cfg = load_config("jiang_shu").with_overrides(n=80, t_final=0.2)
    scheme = run_mod.build_scheme(cfg)
    sweep = oracle.DomainSweep(build_system(cfg))
    field = run_mod.initial_field(cfg, scheme)
    sweep.check_field(field)
    run_mod.advance(scheme, field, cfg.t_final, cfg.cfl, cfg.integrator,
                    on_stage=sweep.on_stage)
    assert sweep.report.is_empty
    assert sweep.report.n_checked > 1000
    assert sweep.report.worst_margin >= 0.0


def test_domain_sweep_flags_planted_fault():
    cfg = load_config("sod").with_overrides(n=16)
    scheme = run_mod.build_scheme(cfg)
    field = run_mod.initial_field(cfg, scheme)
    sys = scheme.system
    sweep = oracle.DomainSweep(sys)
    bad = field.copy()
    bad.avgs[7] = [1.0, 1.0, 0.1]  # E < kinetic: pressure -0.16
    sweep.check_field(bad, step=3, stage=1)
    rep = sweep.report
    assert not rep.is_empty
    v = rep.violations[0]
    assert (v.step, v.stage, v.location, v.kind) == (3, 1, 7, "average")
    assert v.margin < 0.0


def test_offline_sweep_snapshots():
    cfg = load_config("jiang_shu").with_overrides(n=60, t_final=0.05)
    scheme = run_mod.build_scheme(cfg)
    field = run_mod.initial_field(cfg, scheme)
    snaps = []
    run_mod.advance(scheme, field, cfg.t_final, cfg.cfl, cfg.integrator,
                    on_stage=lambda t, s, g, f, r: snaps.append((s, g, f.copy(), r)))
    rep = oracle.sweep_domain(snaps, build_system(cfg))
    assert rep.is_empty and rep.n_checked > 0


def test_fd_jacobian_matches_analytic_euler_flux():
    sys = Euler(1.4)
    U = sys.from_primitive(np.array([1.2, 0.7, 1.5]))
    J = oracle.conservative_flux_jacobian_fd(sys, U)
    # row 0 of dF/dU is exactly (0, 1, 0)
    assert np.allclose(J[0], [0.0, 1.0, 0.0], atol=1e-9)
