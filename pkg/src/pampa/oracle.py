"""Independent brute-force verifiers used by tests and the `verify` CLI.

These recompute everything from system primitives (flux, speeds, domain
predicate) rather than reusing the scheme's flux assembly, so they can act
as an oracle for it: exhaustive domain sweeps over a run's stages, random
sampling of the generalized Lax-Friedrichs splitting property, and the
single-cell counterexample showing that no constant CFL number keeps
continuous-flux cell averages inside the invariant domain once a midpoint
leaves it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import limiters, transform
from .errors import ConfigError
from .systems import Euler, IdealMHD, ScalarLaw


@dataclass
class Violation:
    step: int
    stage: int
    location: int
    kind: str  # average | point | midpoint
    state: np.ndarray
    margin: float


@dataclass
class ViolationReport:
    violations: list = field(default_factory=list)
    worst_margin: float = np.inf
    n_checked: int = 0

    @property
    def is_empty(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.is_empty:
            return (f"domain sweep clean: {self.n_checked} states checked, "
                    f"worst margin {self.worst_margin:.3e}")
        v = self.violations[0]
        return (f"{len(self.violations)} violations (first: step {v.step} stage "
                f"{v.stage} {v.kind} at {v.location}, margin {v.margin:.3e})")


class DomainSweep:
    """Streaming stage observer checking every average, node value, and
    limited midpoint against the invariant domain."""

    MAX_RECORDED = 50

    def __init__(self, system, spec=None):
        self.system = system
        self.spec = spec if spec is not None else system.domain_spec()
        self.report = ViolationReport()

    def _check(self, states, kind, step, stage):
        rep = self.report
        margin = self.system.domain_margin(states, self.spec)
        ok = self.system.in_domain(states, self.spec)
        rep.n_checked += states.shape[0]
        rep.worst_margin = min(rep.worst_margin, float(np.min(margin)))
        if not np.all(ok):
            for loc in np.flatnonzero(~ok):
                if len(rep.violations) >= self.MAX_RECORDED:
                    break
                rep.violations.append(Violation(
                    step=step, stage=stage, location=int(loc), kind=kind,
                    state=states[loc].copy(), margin=float(margin[loc]),
                ))

    def check_field(self, fld, step=-1, stage=-1):
        self._check(fld.avgs, "average", step, stage)
        self._check(transform.from_transformed(self.system, fld.points),
                    "point", step, stage)

    def on_stage(self, t, step, stage, fld, record):
        self.check_field(fld, step, stage)
        if record and record.get("mid_hat") is not None:
            self._check(record["mid_hat"], "midpoint", step, stage)


def sweep_domain(snapshots, system, spec=None) -> ViolationReport:
    """Offline sweep over recorded stage snapshots.

    Each snapshot is (step, stage, field, record) as delivered to a stage
    observer; `record` may be None.
    """
    sweep = DomainSweep(system, spec)
    for step, stage, fld, record in snapshots:
        sweep.on_stage(None, step, stage, fld, record)
    return sweep.report


# ---------------------------------------------------------------------------
# generalized Lax-Friedrichs splitting sampling


@dataclass
class SplittingReport:
    system: str
    n_samples: int
    n_violations: int
    worst_margin: float
    first_violation: Optional[tuple] = None

    @property
    def passed(self) -> bool:
        return self.n_violations == 0

    def summary(self) -> str:
        tag = "pass" if self.passed else "FAIL"
        return (f"splitting[{self.system}] {tag}: {self.n_samples} pairs, "
                f"{self.n_violations} violations, worst margin "
                f"{self.worst_margin:.6e}")


def _log_uniform(rng, lo, hi, size):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size))


def _sample_states(system, rng, n):
    if isinstance(system, ScalarLaw):
        u = rng.uniform(system.u_min, system.u_max, n)
        return u[:, None]
    if isinstance(system, Euler):
        rho = _log_uniform(rng, 1e-6, 1e3, n)
        p = _log_uniform(rng, 1e-8, 1e6, n)
        v = rng.uniform(-100.0, 100.0, n)
        return system.from_primitive(np.stack([rho, v, p], axis=-1))
    if isinstance(system, IdealMHD):
        rho = _log_uniform(rng, 1e-6, 1e3, n)
        p = _log_uniform(rng, 1e-8, 1e6, n)
        v = rng.uniform(-100.0, 100.0, (n, 3))
        b = rng.uniform(-100.0, 100.0, (n, 2))
        prim = np.concatenate([rho[:, None], v, b, p[:, None]], axis=-1)
        return system.from_primitive(prim)
    raise ConfigError(f"no sampler for {type(system).__name__}")


def _splitting_states(system, UL, UR, lam_scale=1.0):
    lam = lam_scale * system.pair_speed(UL, UR)
    mean = 0.5 * (UL + UR)
    dF = system.flux(UR) - system.flux(UL)
    safe = np.where(lam > 0, lam, 1.0)[..., None]
    return np.where((lam > 0)[..., None], mean - dF / (2.0 * safe), mean)


def _splitting_batch(system, rng, n, lam_scale):
    UL = _sample_states(system, rng, n)
    UR = _sample_states(system, rng, n)
    states = _splitting_states(system, UL, UR, lam_scale)
    margin = system.domain_margin(states)
    ok = system.in_domain(states)
    return margin, ok, UL, UR


def sample_lf_splitting(system, n_samples: int, seed: int,
                        lam_scale: float = 1.0) -> SplittingReport:
    """Sample random state pairs from G and test membership of
    (UL+UR)/2 - (F(UR)-F(UL))/(2*lambda) with the pairwise IDP speed.

    For MHD the pairs are drawn in batches sharing one sampled Bx each
    (Bx must match between the two states of a pair). Deterministic for a
    given seed (counter-based Philox generator).
    """
    rng = np.random.Generator(np.random.Philox(seed))
    worst = np.inf
    n_bad = 0
    first = None

    if isinstance(system, IdealMHD):
        n_batches = 32
        per = (n_samples + n_batches - 1) // n_batches
        done = 0
        while done < n_samples:
            m = min(per, n_samples - done)
            bx = float(rng.uniform(-100.0, 100.0))
            sys_b = IdealMHD(gamma=system.gamma, bx=bx, rho_ref=system.rho_ref)
            margin, ok, UL, UR = _splitting_batch(sys_b, rng, m, lam_scale)
            worst = min(worst, float(np.min(margin)))
            n_bad += int(np.count_nonzero(~ok))
            if first is None and not np.all(ok):
                i = int(np.flatnonzero(~ok)[0])
                first = (UL[i].copy(), UR[i].copy(), bx)
            done += m
    else:
        margin, ok, UL, UR = _splitting_batch(system, rng, n_samples, lam_scale)
        worst = float(np.min(margin))
        n_bad = int(np.count_nonzero(~ok))
        if not np.all(ok):
            i = int(np.flatnonzero(~ok)[0])
            first = (UL[i].copy(), UR[i].copy(), None)

    return SplittingReport(system=system.name, n_samples=n_samples,
                           n_violations=n_bad, worst_margin=worst,
                           first_violation=first)


def splitting_monotone_in_lambda(system, n_pairs: int, seed: int,
                                 n_lambdas: int = 10) -> bool:
    """Once the splitting state enters G at some lambda*, it stays in G for
    every larger sampled lambda (the segment toward the arithmetic mean)."""
    rng = np.random.Generator(np.random.Philox(seed))
    UL = _sample_states(system, rng, n_pairs)
    UR = _sample_states(system, rng, n_pairs)
    scales = np.linspace(1.0, 20.0, n_lambdas)
    prev_ok = None
    for s in scales:
        ok = system.in_domain(_splitting_states(system, UL, UR, s))
        if prev_ok is not None and np.any(prev_ok & ~ok):
            return False
        prev_ok = ok
    return True


# ---------------------------------------------------------------------------
# the no-constant-CFL counterexample


@dataclass
class Thm43Result:
    eps: float
    ratio: float
    continuous_avg: float
    idp_avg: float
    theta: float
    limited_mid: float

    def summary(self) -> str:
        return (f"eps={self.eps}: continuous-flux average {self.continuous_avg:.6f} "
                f"(outside [0,1]), IDP-flux average {self.idp_avg:.6f} (inside), "
                f"theta={self.theta:.6f}")


def thm43_counterexample(eps: float, ratio: float = 1.0 / 6.0) -> Thm43Result:
    """Single advection cell with avg = 1 - 2*eps/3, endpoints (1, 0) and
    G = [0, 1]: the parabola midpoint is 5/4 - eps outside G. One step at
    dt/dx = ratio with the continuous flux leaves G; the same step with
    limited states and the LLF flux stays inside.

    The neighbour cells are the constants 1 (left) and 0 (right), so their
    one-sided interface values are those constants.
    """
    if not 0.0 < eps < 0.25:
        raise ConfigError("counterexample needs 0 < eps < 1/4")
    avg = 1.0 - 2.0 * eps / 3.0
    u_l, u_r = 1.0, 0.0
    mid = limiters.midpoint_value(avg, u_l, u_r)
    continuous = avg - ratio * (u_r - u_l)  # advection: f(u) = u

    hat_l, hat_m, hat_r, theta = limiters.scaling_limit_scalar(
        avg, u_l, mid, u_r, 0.0, 1.0
    )

    def llf(a, b):  # advection LLF with lambda = |f'| = 1
        return 0.5 * (a + b) - 0.5 * (b - a)

    flux_left = llf(1.0, hat_l)
    flux_right = llf(hat_r, 0.0)
    idp = avg - ratio * (flux_right - flux_left)
    return Thm43Result(eps=eps, ratio=ratio, continuous_avg=float(continuous),
                       idp_avg=float(idp), theta=float(theta),
                       limited_mid=float(hat_m))


# ---------------------------------------------------------------------------
# transform and limiter property checks (bulk random sampling)


@dataclass
class PropertyReport:
    name: str
    n_samples: int
    n_failures: int
    worst: float

    @property
    def passed(self) -> bool:
        return self.n_failures == 0

    def summary(self) -> str:
        tag = "pass" if self.passed else "FAIL"
        return (f"{self.name} {tag}: {self.n_samples} samples, "
                f"{self.n_failures} failures, worst {self.worst:.6e}")


def check_transform_membership(system, n_samples: int, seed: int,
                               w_range: float = 50.0) -> PropertyReport:
    """Random finite W must map into G: the decoded density and pressure
    are strictly positive (zero floors, no tolerance) and the conservative
    vector is finite."""
    rng = np.random.Generator(np.random.Philox(seed))
    W = rng.uniform(-w_range, w_range, (n_samples, system.nvars))
    prim = transform.primitive_from_transformed(system, W)
    U = transform.from_transformed(system, W)
    finite = np.all(np.isfinite(U), axis=-1)
    if isinstance(system, ScalarLaw):
        ok = finite & system.in_domain(U)
        worst = float(np.min(system.domain_margin(U)))
    else:
        rho, p = prim[..., 0], prim[..., -1]
        ok = finite & (rho > 0.0) & (p > 0.0)
        worst = float(min(np.min(rho), np.min(p)))
    return PropertyReport(name=f"transform-membership[{system.name}]",
                          n_samples=n_samples,
                          n_failures=int(np.count_nonzero(~ok)), worst=worst)


def sample_states_representable(system, rng, n):
    """States from G whose conservative encoding retains the pressure:
    velocity scaled by the sound speed (Mach up to 50) and magnetic field
    by sqrt(p). With absolute |v| <= 100 and p down to 1e-8 the kinetic
    term's rounding noise alone would exceed any 1e-11 relative claim."""
    if isinstance(system, ScalarLaw):
        return _sample_states(system, rng, n)
    rho = _log_uniform(rng, 1e-6, 1e3, n)
    if isinstance(system, Euler):
        p = _log_uniform(rng, 1e-8, 1e6, n)
        c = np.sqrt(system.gamma * p / rho)
        v = rng.uniform(-50.0, 50.0, n) * c
        return system.from_primitive(np.stack([rho, v, p], axis=-1))
    # the constant Bx adds Bx^2/2 to E unconditionally, so p below that
    # times machine epsilon is unrepresentable as well
    p_lo = max(1e-8, system.bx ** 2 / 2000.0)
    p = _log_uniform(rng, p_lo, 1e6, n)
    c = np.sqrt(system.gamma * p / rho)
    v = rng.uniform(-50.0, 50.0, (n, 3)) * c[:, None]
    b = rng.uniform(-25.0, 25.0, (n, 2)) * np.sqrt(p)[:, None]
    prim = np.concatenate([rho[:, None], v, b, p[:, None]], axis=-1)
    return system.from_primitive(prim)


def sample_states_moderate(system, rng, n):
    """O(1) states for finite-difference comparisons (relative FD steps on
    near-vacuum states with large energies leave the domain)."""
    if isinstance(system, ScalarLaw):
        return _sample_states(system, rng, n)
    rho = _log_uniform(rng, 0.1, 10.0, n)
    p = _log_uniform(rng, 0.1, 10.0, n)
    if isinstance(system, Euler):
        v = rng.uniform(-3.0, 3.0, n)
        return system.from_primitive(np.stack([rho, v, p], axis=-1))
    v = rng.uniform(-3.0, 3.0, (n, 3))
    b = rng.uniform(-2.0, 2.0, (n, 2))
    prim = np.concatenate([rho[:, None], v, b, p[:, None]], axis=-1)
    return system.from_primitive(prim)


def check_jacobian_similarity(system, n_samples: int, seed: int,
                              tol: float = 1e-5) -> PropertyReport:
    """Eigenvalues of the transformed Jacobian must match those of the
    finite-difference conservative flux Jacobian (similar matrices)."""
    rng = np.random.Generator(np.random.Philox(seed))
    states = sample_states_moderate(system, rng, n_samples)
    worst = 0.0
    bad = 0
    for U in states:
        e1 = np.sort(np.linalg.eigvals(
            transform.jacobian_transformed(system, U)).real)
        e2 = np.sort(np.linalg.eigvals(
            conservative_flux_jacobian_fd(system, U)).real)
        scale = max(float(np.max(np.abs(e2))), 1e-30)
        err = float(np.max(np.abs(e1 - e2)) / scale)
        worst = max(worst, err)
        bad += err > tol
    return PropertyReport(name=f"jacobian-similarity[{system.name}]",
                          n_samples=n_samples, n_failures=bad, worst=worst)


def check_transform_roundtrip(system, n_samples: int, seed: int,
                              tol: float = 1e-11) -> PropertyReport:
    """Psi^{-1}(Psi(U)) must reproduce U to tol, relative, per primitive
    component."""
    rng = np.random.Generator(np.random.Philox(seed))
    U = sample_states_representable(system, rng, n_samples)
    U2 = transform.from_transformed(system, transform.to_transformed(system, U))
    p1 = system.primitive(U)
    p2 = system.primitive(U2)
    floor = 1e-300
    if isinstance(system, ScalarLaw):
        # the clipped-ReLU map is affine: its rounding is absolute at the
        # scale of the interval, so u ~ 0 needs an interval-scale floor
        floor = 1e-3 * (system.u_max - system.u_min)
    rel = np.abs(p2 - p1) / np.maximum(np.abs(p1), floor)
    worst = float(np.max(rel))
    bad = int(np.count_nonzero(np.any(rel > tol, axis=-1)))
    return PropertyReport(name=f"transform-roundtrip[{system.name}]",
                          n_samples=n_samples, n_failures=bad, worst=worst)


def check_limiter_invariants(system, n_samples: int, seed: int,
                             cad_tol: float = 1e-12,
                             eps_rho: float = 1e-13,
                             eps_p: float = 1e-13) -> PropertyReport:
    """Random limiter invocations: inputs are admissible cell averages and
    endpoint values (the raw midpoint follows from them and may leave G);
    outputs must keep the 1/6-4/6-1/6 decomposition to cad_tol relative and
    pass the domain predicate with the given floors."""
    rng = np.random.Generator(np.random.Philox(seed))
    avg = _sample_states(system, rng, n_samples)
    left = _sample_states(system, rng, n_samples)
    right = _sample_states(system, rng, n_samples)
    mid = limiters.midpoint_value(avg, left, right)
    if isinstance(system, ScalarLaw):
        hl, hm, hr, _ = limiters.scaling_limit_scalar(
            avg[..., 0], left[..., 0], mid[..., 0], right[..., 0],
            system.u_min, system.u_max)
        hl, hm, hr = hl[..., None], hm[..., None], hr[..., None]
        spec = system.domain_spec()
    else:
        hl, hm, hr, _ = limiters.scaling_limit_system(
            system, avg, left, mid, right, eps_rho, eps_p)
        from .systems import PositivityFloors

        spec = PositivityFloors(0.0, 0.0)
    recomposed = (hl + 4.0 * hm + hr) / 6.0
    scale = np.maximum(np.max(np.abs(avg), axis=-1, keepdims=True), 1e-300)
    cad_err = np.max(np.abs(recomposed - avg) / scale, axis=-1)
    ok = (system.in_domain(hl, spec) & system.in_domain(hm, spec)
          & system.in_domain(hr, spec) & (cad_err <= cad_tol))
    return PropertyReport(name=f"limiter-cad[{system.name}]",
                          n_samples=n_samples,
                          n_failures=int(np.count_nonzero(~ok)),
                          worst=float(np.max(cad_err)))


# ---------------------------------------------------------------------------
# finite-difference flux Jacobian (independent check of the transforms)


def conservative_flux_jacobian_fd(system, U, rel_step: float = 1e-6):
    """Central-difference dF/dU, one state at a time: (d, d) array."""
    U = np.asarray(U, dtype=float)
    d = U.shape[-1]
    scale = max(float(np.max(np.abs(U))), 1.0)
    J = np.zeros((d, d))
    for k in range(d):
        h = rel_step * max(abs(float(U[k])), 1e-3 * scale)
        Up = U.copy()
        Um = U.copy()
        Up[k] += h
        Um[k] -= h
        J[:, k] = (system.flux(Up) - system.flux(Um)) / (2.0 * h)
    return J
