"""Pure-numpy integration loop.

Reference implementation of the closed-loop simulation; the compiled core in
``_kernel.pyx`` mirrors this logic statement for statement.  Fixed-step
classical RK4 (or explicit Euler), disturbances and reference velocities
evaluated at stage times, funnel containment checked with a guard at every
stage evaluation for the funnel-based variants.
"""

from __future__ import annotations

import numpy as np

from .plan import (
    INTEGRATOR_EULER,
    STATUS_CONTAINMENT,
    RawResult,
    SimPlan,
    VARIANT_CONVENTIONAL,
    VARIANT_MANEUVER,
    VARIANT_PPC,
    VARIANT_ROBUST,
    allocate_result,
)


class _Breach(Exception):
    def __init__(self, edge: int, time: float, value: float):
        self.edge = edge
        self.time = time
        self.value = value


def _signal_matrices(amp, omega, kind, off, n_axes):
    """Split flattened terms into per-kind amplitude matrices for fast eval."""
    axis_of_term = np.repeat(np.arange(n_axes), np.diff(off))
    parts = []
    for kind_code in (0, 1):
        idx = np.where(kind == kind_code)[0]
        mat = np.zeros((n_axes, len(idx)))
        mat[axis_of_term[idx], np.arange(len(idx))] = amp[idx]
        parts.append((mat, omega[idx]))
    return parts


def simulate(plan: SimPlan) -> RawResult:
    res = allocate_result(plan)
    n, m, l = plan.n, plan.m, plan.l
    nm = n * m
    ei, ej = plan.ei, plan.ej
    d, b_bar, b_under = plan.d, plan.b_bar, plan.b_under
    d2 = d * d
    bbbu = b_bar * b_under
    rho0, rho_inf, decay = plan.rho0, plan.rho_inf, plan.decay
    gains, guard = plan.gains, plan.guard
    r_s, r_c = plan.r_s, plan.r_c
    variant, leader, dt = plan.variant, plan.leader, plan.dt
    funnel_law = variant in (VARIANT_PPC, VARIANT_MANEUVER)
    robust = variant == VARIANT_ROBUST

    (db_sin, db_sin_w), (db_cos, db_cos_w) = _signal_matrices(
        plan.db_amp, plan.db_omega, plan.db_kind, plan.db_off, nm)
    (vd_sin, vd_sin_w), (vd_cos, vd_cos_w) = _signal_matrices(
        plan.vd_amp, plan.vd_omega, plan.vd_kind, plan.vd_off, m)
    scale = plan.db_scale

    def delta(t):
        return scale * (db_sin @ np.sin(db_sin_w * t) + db_cos @ np.cos(db_cos_w * t))

    def vd(t):
        return vd_sin @ np.sin(vd_sin_w * t) + vd_cos @ np.cos(vd_cos_w * t)

    def rhs(q, t, dh):
        """Stage evaluation: (qdot, dhdot, u, e, eta, dist)."""
        qm = q.reshape(n, m)
        rel = qm[ei] - qm[ej]
        dist = np.sqrt(np.einsum("km,km->k", rel, rel))
        e = dist - d
        eta = e * (e + 2.0 * d)
        um = np.zeros((n, m))
        dhdot = None
        if funnel_law:
            rho = (rho0 - rho_inf) * np.exp(-decay * t) + rho_inf
            eta_hat = eta / rho
            bad = np.maximum(eta_hat - b_bar + guard, -b_under + guard - eta_hat)
            worst = int(np.argmax(bad))
            if bad[worst] >= 0.0:
                raise _Breach(worst, t, eta_hat[worst])
            sigma = 0.5 * np.log((b_bar * eta_hat + bbbu) / (bbbu - b_under * eta_hat))
            gain = (1.0 / rho) * (1.0 / (eta_hat + b_under) - 1.0 / (eta_hat - b_bar))
            contrib = (gains * gain * sigma)[:, None] * rel
            np.subtract.at(um, ei, contrib)
            np.add.at(um, ej, contrib)
            u = um.reshape(-1)
            if variant == VARIANT_MANEUVER:
                u[leader * m:(leader + 1) * m] += n * vd(t)
        elif variant == VARIANT_CONVENTIONAL:
            contrib = (plan.k_conv * eta)[:, None] * rel
            np.subtract.at(um, ei, contrib)
            np.add.at(um, ej, contrib)
            u = um.reshape(-1)
        else:
            contrib = (plan.k_conv * eta)[:, None] * rel
            np.add.at(um, ei, contrib)
            np.subtract.at(um, ej, contrib)
            grad = um.reshape(-1)
            u = -grad - dh * np.tanh(dh * grad / plan.epsilon)
            dhdot = plan.w_axis * np.abs(grad) - plan.theta * dh
        return u + delta(t), dhdot, u, e, eta, dist

    flags = np.zeros(3, dtype=bool)

    def log_row(idx, t, q, u, e, eta, dist):
        rho = (rho0 - rho_inf) * np.exp(-decay * t) + rho_inf
        res.t[idx] = t
        res.q[idx] = q
        res.u[idx] = u
        res.e[idx] = e
        res.eta[idx] = eta
        res.e_hi[idx] = -d + np.sqrt(d2 + b_bar * rho)
        res.e_lo[idx] = -(d - np.sqrt(np.maximum(d2 - b_under * rho, 0.0)))
        flags[0] |= bool(np.any(eta >= b_bar * rho) or np.any(eta <= -b_under * rho))
        flags[1] |= bool(np.any(dist <= r_s))
        flags[2] |= bool(np.any(dist >= r_c))
        res.flags[idx] = flags
        res.n_logged = idx + 1

    q = plan.q0.copy()
    dh = plan.dhat0.copy()
    log_steps = plan.log_steps
    log_ptr = 0
    euler = plan.integrator == INTEGRATOR_EULER
    try:
        for s in range(plan.n_steps):
            t = s * dt
            qd1, dd1, u1, e1, eta1, dist1 = rhs(q, t, dh)
            if log_steps[log_ptr] == s:
                log_row(log_ptr, t, q, u1, e1, eta1, dist1)
                log_ptr += 1
            if euler:
                q = q + dt * qd1
                if robust:
                    dh = dh + dt * dd1
            else:
                half = 0.5 * dt
                qd2, dd2 = rhs(q + half * qd1, t + half, dh + half * dd1 if robust else dh)[:2]
                qd3, dd3 = rhs(q + half * qd2, t + half, dh + half * dd2 if robust else dh)[:2]
                qd4, dd4 = rhs(q + dt * qd3, t + dt, dh + dt * dd3 if robust else dh)[:2]
                q = q + (dt / 6.0) * (qd1 + 2.0 * qd2 + 2.0 * qd3 + qd4)
                if robust:
                    dh = dh + (dt / 6.0) * (dd1 + 2.0 * dd2 + 2.0 * dd3 + dd4)
        t = plan.n_steps * dt
        qd1, dd1, u1, e1, eta1, dist1 = rhs(q, t, dh)
        log_row(log_ptr, t, q, u1, e1, eta1, dist1)
    except _Breach as breach:
        res.status = STATUS_CONTAINMENT
        res.viol_edge = breach.edge
        res.viol_time = breach.time
        res.viol_value = breach.value
    res.dhat[:] = dh
    return res
