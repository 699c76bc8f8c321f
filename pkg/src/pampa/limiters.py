"""Per-cell point-value limiters.

Three independent pieces, all preserving the 1/6-4/6-1/6 decomposition of
the cell average over (left endpoint, midpoint, right endpoint):

* the local scaling IDP limiter that pulls the midpoint (and, with the same
  blend factor, the endpoints) toward the cell average until the midpoint
  satisfies the invariant-domain bounds;
* the OE procedure, which damps endpoint values toward the cell average by
  exp(-beta*dt*sigma/dx) with sigma measuring the mismatch between the
  cell's parabola and its neighbours' parabolas;
* the MP limiter, which clips node values into a monotonicity-preserving
  interval built from neighbouring cell averages and curvature estimates.

All functions are vectorised over leading axes.
"""

from __future__ import annotations

import numpy as np

from .errors import InvariantViolation

_GL3_NODES = np.array([-np.sqrt(3.0 / 5.0), 0.0, np.sqrt(3.0 / 5.0)])
_GL3_WEIGHTS = np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])


def minmod4(a, b, c, d):
    """sign * min(|a|,|b|,|c|,|d|) when all four share a sign, else 0."""
    a, b, c, d = np.broadcast_arrays(a, b, c, d)
    pos = (a > 0) & (b > 0) & (c > 0) & (d > 0)
    neg = (a < 0) & (b < 0) & (c < 0) & (d < 0)
    m = np.minimum(np.minimum(np.abs(a), np.abs(b)), np.minimum(np.abs(c), np.abs(d)))
    return np.where(pos, m, np.where(neg, -m, 0.0))


def median3(a, b, c):
    a, b, c = np.broadcast_arrays(a, b, c)
    return np.maximum(np.minimum(a, b), np.minimum(np.maximum(a, b), c))


def midpoint_value(avg, left, right):
    """Midpoint of the cell parabola: (3/2)*avg - (1/4)*(left + right)."""
    return 1.5 * np.asarray(avg, dtype=float) - 0.25 * (
        np.asarray(left, dtype=float) + np.asarray(right, dtype=float)
    )


# ---------------------------------------------------------------------------
# scaling IDP limiter


def scaling_limit_scalar(avg, left, mid, right, lo, hi):
    """Blend (left, mid, right) toward avg until mid lies in [lo, hi].

    Returns (left_hat, mid_hat, right_hat, theta). Inactive cells come back
    unchanged with theta = 1.
    """
    avg, left, mid, right = map(lambda x: np.asarray(x, dtype=float),
                                (avg, left, mid, right))
    if np.any(avg < lo) or np.any(avg > hi):
        raise InvariantViolation("cell average outside the invariant interval")
    below = mid < lo
    above = mid > hi
    den_b = np.where(below, avg - mid, 1.0)
    den_a = np.where(above, mid - avg, 1.0)
    theta = np.where(below, (avg - lo) / den_b,
                     np.where(above, (hi - avg) / den_a, 1.0))
    active = below | above
    # land the midpoint exactly on the violated bound
    mid_hat = np.where(below, lo, np.where(above, hi, mid))
    left_hat = np.where(active, (1.0 - theta) * avg + theta * left, left)
    right_hat = np.where(active, (1.0 - theta) * avg + theta * right, right)
    return left_hat, mid_hat, right_hat, theta


def scaling_limit_system(system, avg, left, mid, right, eps_rho=1e-13,
                         eps_p=1e-13):
    """Two-stage (density then pressure) scaling limiter for Euler/MHD.

    Floors are per cell: min(eps, value at the cell average). The pressure
    stage is re-halved up to three times (then fully collapsed) if rounding
    leaves the recomputed midpoint pressure under the floor.
    """
    avg = np.asarray(avg, dtype=float)
    left = np.asarray(left, dtype=float)
    mid = np.asarray(mid, dtype=float)
    right = np.asarray(right, dtype=float)

    rho_a = avg[..., 0]
    if np.any(rho_a <= 0) or not np.all(np.isfinite(rho_a)):
        raise InvariantViolation("cell average with non-positive density")
    p_a = system.pressure(avg)
    if np.any(p_a <= 0) or not np.all(np.isfinite(p_a)):
        raise InvariantViolation("cell average with non-positive pressure")
    e_rho = np.minimum(eps_rho, rho_a)
    e_p = np.minimum(eps_p, p_a)

    rho_m = mid[..., 0]
    low_rho = rho_m < e_rho
    den = np.where(low_rho, rho_a - rho_m, 1.0)
    t_rho = np.where(low_rho, (rho_a - e_rho) / den, 1.0)
    u_star = (1.0 - t_rho)[..., None] * avg + t_rho[..., None] * mid

    p_star = system.pressure(u_star)
    low_p = p_star < e_p
    den = np.where(low_p, p_a - p_star, 1.0)
    t_p = np.where(low_p, (p_a - e_p) / den, 1.0)

    def blend(t):
        return (1.0 - t)[..., None] * avg + t[..., None] * u_star

    mid_hat = blend(t_p)
    for _ in range(3):
        bad = system.pressure(mid_hat) < e_p
        if not np.any(bad):
            break
        t_p = np.where(bad, 0.5 * t_p, t_p)
        mid_hat = blend(t_p)
    else:
        bad = system.pressure(mid_hat) < e_p
        if np.any(bad):
            t_p = np.where(bad, 0.0, t_p)
            mid_hat = blend(t_p)

    theta = t_rho * t_p
    th = theta[..., None]
    left_hat = (1.0 - th) * avg + th * left
    right_hat = (1.0 - th) * avg + th * right
    return left_hat, mid_hat, right_hat, theta


# ---------------------------------------------------------------------------
# OE procedure


def parabola_coeffs(avg, left, right):
    """Coefficients of p(xi) = c0 + c1*xi + c2*xi^2 on xi in [-1/2, 1/2]
    matching the endpoint values and the cell mean."""
    avg = np.asarray(avg, dtype=float)
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    c2 = 3.0 * (left + right - 2.0 * avg)
    c1 = right - left
    c0 = 1.5 * avg - 0.25 * (left + right)
    return c0, c1, c2


def oe_theta(system, avgs, lefts, rights, sizes, dt):
    """Damping factors theta_OE for cells 1..K-2 given data for cells 0..K-1.

    avgs/lefts/rights: (K, d) cell averages and one-sided endpoint values;
    sizes: (K,) cell sizes. Returns (K-2,) factors in (0, 1].
    """
    avgs = np.asarray(avgs, dtype=float)
    c0, c1, c2 = parabola_coeffs(avgs, lefts, rights)
    own = slice(1, -1)
    lnb = slice(0, -2)
    rnb = slice(2, None)
    dxo = sizes[own]
    dxl = sizes[lnb]
    dxr = sizes[rnb]

    g = _GL3_NODES[:, None]  # (3, 1): broadcast over cells
    xi_o = 0.5 * g
    xi_l = (0.5 * (dxl + dxo) + 0.5 * g * dxo) / dxl
    xi_r = (-0.5 * (dxr + dxo) + 0.5 * g * dxo) / dxr

    def peval(sl, xi):
        xi = xi[..., None]
        return c0[sl] + c1[sl] * xi + c2[sl] * xi * xi

    P = peval(own, xi_o)  # (3, K-2, d)
    PL = peval(lnb, xi_l)
    PR = peval(rnb, xi_r)
    A = avgs[own]

    wq = _GL3_WEIGHTS[:, None, None]

    def cell_integral(Q):
        # sum over quadrature points and components
        return 0.5 * dxo * np.sum(wq * Q, axis=(0, 2))

    ppo = 2.0 * c2[own] / dxo[:, None] ** 2
    ppl = 2.0 * c2[lnb] / dxl[:, None] ** 2
    ppr = 2.0 * c2[rnb] / dxr[:, None] ** 2
    dx5 = dxo ** 5 / 3.0

    eta_l = cell_integral((P - PL) ** 2) + dx5 * np.sum((ppo - ppl) ** 2, axis=-1)
    eta_r = cell_integral((P - PR) ** 2) + dx5 * np.sum((ppo - ppr) ** 2, axis=-1)
    d_l = cell_integral((PL - A) ** 2 + (P - A) ** 2) + dx5 * np.sum(ppl ** 2, axis=-1)
    d_r = cell_integral((PR - A) ** 2 + (P - A) ** 2) + dx5 * np.sum(ppr ** 2, axis=-1)

    lo, hi = system.wave_speed_range(avgs)
    s_l = np.minimum(np.minimum(lo[lnb], lo[own]), np.minimum(lo[rnb], 0.0))
    s_r = np.maximum(np.maximum(hi[lnb], hi[own]), np.maximum(hi[rnb], 0.0))
    span = s_r - s_l
    safe = np.where(span > 0, span, 1.0)
    w1 = np.where(span > 0, s_r / safe, 0.0)
    w2 = np.where(span > 0, -s_l / safe, 0.0)
    num = w1 * eta_l + w2 * eta_r
    den = w1 * d_l + w2 * d_r
    sigma = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)

    speed = system.max_wave_speed(avgs)
    beta = np.maximum(np.maximum(speed[lnb], speed[own]), speed[rnb])
    return np.exp(-beta * dt * sigma / dxo)


def oe_apply(theta, avg, left, right):
    """Blend endpoints toward the average and recompute the midpoint so the
    average decomposition still holds."""
    t = np.asarray(theta, dtype=float)[..., None]
    avg = np.asarray(avg, dtype=float)
    l_new = (1.0 - t) * avg + t * np.asarray(left, dtype=float)
    r_new = (1.0 - t) * avg + t * np.asarray(right, dtype=float)
    return l_new, midpoint_value(avg, l_new, r_new), r_new


# ---------------------------------------------------------------------------
# MP limiter


def mp_limit(a0, a1, a2, a3, a4, u, alpha=2.0, beta=4.0):
    """Monotonicity-preserving clip of the node value u.

    a0..a4 are the five cell averages around the node ordered from the far
    side of the node's own cell to the straddling neighbour: for the value
    on the left side of a node, (a0..a4) are the averages of cells
    j-3, j-2, j-1, j, j+1 (own cell j-1); the right side uses the mirrored
    order. The median/curvature construction follows the classical MP
    limiter: the min/max groups pair the own-cell average with the
    straddling neighbour a3, and u_md carries -d/2 (a smooth profile is
    never modified; the transcription pairing the away neighbour with +d/2
    clips smooth curved regions at second order and breaks the scheme's
    accuracy tables). Returns median(u, u_min, u_max).
    """
    d2m = a2 - 2.0 * a1 + a0
    d2c = a3 - 2.0 * a2 + a1
    d2p = a4 - 2.0 * a3 + a2
    dm4_node = minmod4(4.0 * d2c - d2p, 4.0 * d2p - d2c, d2c, d2p)
    dm4_prev = minmod4(4.0 * d2m - d2c, 4.0 * d2c - d2m, d2m, d2c)
    u_md = 0.5 * (a2 + a3) - 0.5 * dm4_node
    u_ul = a2 + alpha * (a2 - a1)
    u_lc = a2 + 0.5 * (a2 - a1) + (beta / 3.0) * dm4_prev
    u_min = np.maximum(np.minimum(np.minimum(a2, a3), u_md),
                       np.minimum(np.minimum(a2, u_ul), u_lc))
    u_max = np.minimum(np.maximum(np.maximum(a2, a3), u_md),
                       np.maximum(np.maximum(a2, u_ul), u_lc))
    return median3(u, u_min, u_max)
