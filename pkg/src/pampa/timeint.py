"""SSP time integrators built from forward-Euler stages.

Every stage is a forward-Euler step (the limiters re-run inside each
residual evaluation), so convexity carries the invariant-domain property of
a single Euler step to the composed methods. The multistep method has an
SSP coefficient of 1/3, so its steps must use a third of the forward-Euler
CFL time step; `dt_scale` exposes that to the driver.
"""

from __future__ import annotations

from collections import deque

from .errors import ConfigError
from .scheme import DofField

INTEGRATOR_KINDS = ("forward_euler", "ssp_rk3", "ssp_ms3")


def _euler_stage(scheme, field, dt, resid=None, record=None):
    if resid is None:
        record = {} if record is None else record
        resid = scheme.residual(field, dt, record)
    da, dp = resid
    out = DofField(field.avgs + dt * da, field.points + dt * dp)
    return scheme.finish_stage(out), record


def _rk3_step(scheme, field, dt, t, step, on_stage, first_resid=None,
              first_record=None):
    """Shu-Osher three-stage SSP RK3 (weights 1; 3/4,1/4; 1/3,2/3)."""
    s1, rec1 = _euler_stage(scheme, field, dt, first_resid, first_record)
    if on_stage:
        on_stage(t + dt, step, 0, s1, rec1)

    fe2, rec2 = _euler_stage(scheme, s1, dt)
    s2 = DofField(0.75 * field.avgs + 0.25 * fe2.avgs,
                  0.75 * field.points + 0.25 * fe2.points)
    s2 = scheme.finish_stage(s2)
    if on_stage:
        on_stage(t + dt, step, 1, s2, rec2)

    fe3, rec3 = _euler_stage(scheme, s2, dt)
    out = DofField(field.avgs / 3.0 + (2.0 / 3.0) * fe3.avgs,
                   field.points / 3.0 + (2.0 / 3.0) * fe3.points)
    out = scheme.finish_stage(out)
    if on_stage:
        on_stage(t + dt, step, 2, out, rec3)
    return out


class ForwardEuler:
    dt_scale = 1.0
    multistep = False

    def step(self, scheme, field, dt, t=0.0, step=0, on_stage=None):
        out, rec = _euler_stage(scheme, field, dt)
        if on_stage:
            on_stage(t + dt, step, 0, out, rec)
        return out


class SspRk3:
    dt_scale = 1.0
    multistep = False

    def step(self, scheme, field, dt, t=0.0, step=0, on_stage=None):
        return _rk3_step(scheme, field, dt, t, step, on_stage)


class SspMultistep3:
    """Four-step third-order SSP multistep:

        u^{n+1} = (16/27)(u^n + 3 dt L(u^n))
                + (11/27)(u^{n-3} + (12/11) dt L(u^{n-3})).

    Needs three history states and a constant step size; the first steps
    (and any step whose dt deviates from the stored history) fall back to
    RK3, which restarts the history.
    """

    dt_scale = 1.0 / 3.0
    multistep = True

    def __init__(self):
        self._hist: deque = deque(maxlen=3)
        self._hist_dt: float | None = None

    def step(self, scheme, field, dt, t=0.0, step=0, on_stage=None):
        mismatch = self._hist_dt is not None and abs(dt - self._hist_dt) > 1e-9 * dt
        if mismatch:
            self._hist.clear()
        record: dict = {}
        resid = scheme.residual(field, dt, record)
        if len(self._hist) < 3:
            self._hist.append((field, resid))
            self._hist_dt = dt
            return _rk3_step(scheme, field, dt, t, step, on_stage,
                             first_resid=resid, first_record=record)
        old_field, old_resid = self._hist[0]
        da, dp = resid
        oda, odp = old_resid
        w_new, w_old = 16.0 / 27.0, 11.0 / 27.0
        avgs = (w_new * (field.avgs + 3.0 * dt * da)
                + w_old * (old_field.avgs + (12.0 / 11.0) * dt * oda))
        points = (w_new * (field.points + 3.0 * dt * dp)
                  + w_old * (old_field.points + (12.0 / 11.0) * dt * odp))
        out = scheme.finish_stage(DofField(avgs, points))
        self._hist.append((field, resid))
        self._hist_dt = dt
        if on_stage:
            on_stage(t + dt, step, 0, out, record)
        return out


def make_integrator(kind: str):
    if kind == "forward_euler":
        return ForwardEuler()
    if kind == "ssp_rk3":
        return SspRk3()
    if kind == "ssp_ms3":
        return SspMultistep3()
    raise ConfigError(f"unknown integrator {kind!r}")
