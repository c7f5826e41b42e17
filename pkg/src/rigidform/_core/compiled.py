"""Adapter around the compiled kernel: allocates outputs, unpacks the plan."""

from __future__ import annotations

from . import _kernel
from .plan import RawResult, SimPlan, allocate_result


def simulate(plan: SimPlan) -> RawResult:
    res = allocate_result(plan)
    status, viol_edge, viol_time, viol_value, n_logged = _kernel.run(
        plan.n, plan.m,
        plan.ei, plan.ej,
        plan.d, plan.b_bar, plan.b_under,
        plan.rho0, plan.rho_inf, plan.decay,
        plan.gains,
        plan.variant, plan.leader,
        plan.vd_amp, plan.vd_omega, plan.vd_kind, plan.vd_off,
        plan.db_amp, plan.db_omega, plan.db_kind, plan.db_off,
        plan.db_scale,
        plan.k_conv, plan.epsilon, plan.theta,
        plan.w_axis, plan.dhat0,
        plan.r_s, plan.r_c,
        plan.q0,
        plan.dt, plan.n_steps, plan.integrator,
        plan.log_steps, plan.guard,
        res.t, res.q, res.u, res.e, res.eta, res.e_lo, res.e_hi, res.flags,
        res.dhat,
    )
    res.status = status
    res.viol_edge = viol_edge
    res.viol_time = viol_time
    res.viol_value = viol_value
    res.n_logged = n_logged
    return res
