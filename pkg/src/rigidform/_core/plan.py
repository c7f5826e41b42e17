"""Wire format between the scenario layer and the integration backends.

A :class:`SimPlan` is a flat bundle of validated, C-contiguous arrays plus
scalars: everything a backend needs to run one closed-loop simulation without
touching Python objects in the hot loop.  Both backends consume the same plan
and fill the same preallocated output block, so results are interchangeable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

VARIANT_PPC = 0
VARIANT_MANEUVER = 1
VARIANT_CONVENTIONAL = 2
VARIANT_ROBUST = 3

INTEGRATOR_RK4 = 0
INTEGRATOR_EULER = 1

STATUS_OK = 0
STATUS_CONTAINMENT = 1


def _own(a, dtype):
    out = np.ascontiguousarray(a, dtype=dtype)
    if not out.flags.writeable:
        out = out.copy()
    return out


def _f8(a, shape):
    out = _own(a, np.float64)
    if out.shape != shape:
        raise ValueError(f"expected shape {shape}, got {out.shape}")
    return out


@dataclass
class SimPlan:
    n: int
    m: int
    ei: np.ndarray            # (l,) int32, first vertex per edge
    ej: np.ndarray            # (l,) int32, second vertex per edge
    d: np.ndarray             # (l,) desired distances
    b_bar: np.ndarray         # (l,) upper funnel half-widths
    b_under: np.ndarray       # (l,) lower funnel half-widths
    rho0: np.ndarray          # (l,)
    rho_inf: np.ndarray       # (l,)
    decay: np.ndarray         # (l,)
    gains: np.ndarray         # (l,)
    variant: int
    leader: int               # -1 when unused
    vd_amp: np.ndarray        # flattened reference-velocity terms
    vd_omega: np.ndarray
    vd_kind: np.ndarray       # int8, 0=sin 1=cos
    vd_off: np.ndarray        # (m+1,) int32
    db_amp: np.ndarray        # flattened disturbance terms (agent-major axis order)
    db_omega: np.ndarray
    db_kind: np.ndarray
    db_off: np.ndarray        # (n*m+1,) int32
    db_scale: float
    k_conv: float
    epsilon: float
    theta: float
    w_axis: np.ndarray        # (n*m,) estimator drive weights
    dhat0: np.ndarray         # (n*m,)
    r_s: np.ndarray           # (l,) collision limits per edge
    r_c: np.ndarray           # (l,) connectivity limits per edge
    q0: np.ndarray            # (n*m,)
    dt: float
    n_steps: int
    integrator: int
    log_steps: np.ndarray     # (n_log,) int64, sorted, starts at 0, ends at n_steps
    guard: float

    def __post_init__(self):
        l = len(self.ei)
        nm = self.n * self.m
        self.ei = _own(self.ei, np.int32)
        self.ej = _own(self.ej, np.int32)
        for name in ("d", "b_bar", "b_under", "rho0", "rho_inf", "decay", "gains", "r_s", "r_c"):
            setattr(self, name, _f8(getattr(self, name), (l,)))
        for name in ("w_axis", "dhat0", "q0"):
            setattr(self, name, _f8(getattr(self, name), (nm,)))
        for name in ("vd_amp", "vd_omega", "db_amp", "db_omega"):
            setattr(self, name, _own(getattr(self, name), np.float64))
        self.vd_kind = _own(self.vd_kind, np.int8)
        self.db_kind = _own(self.db_kind, np.int8)
        self.vd_off = _own(self.vd_off, np.int32)
        self.db_off = _own(self.db_off, np.int32)
        self.log_steps = _own(self.log_steps, np.int64)
        if self.vd_off.shape != (self.m + 1,):
            raise ValueError("vd_off must have one entry per axis plus one")
        if self.db_off.shape != (nm + 1,):
            raise ValueError("db_off must have one entry per agent axis plus one")
        if self.log_steps[0] != 0 or self.log_steps[-1] != self.n_steps:
            raise ValueError("log_steps must start at 0 and end at n_steps")
        if np.any(np.diff(self.log_steps) <= 0):
            raise ValueError("log_steps must be strictly increasing")

    @property
    def l(self) -> int:
        return len(self.ei)

    @property
    def n_log(self) -> int:
        return len(self.log_steps)


@dataclass
class RawResult:
    """Backend output: logged series plus halt diagnostics.

    ``n_logged`` rows of each series are valid.  ``status`` is nonzero when
    the run halted early on a funnel breach at an integrator stage, in which
    case the violation fields identify the edge (index into the stored edge
    order), the stage time, and the offending modulated error.
    """

    status: int
    viol_edge: int
    viol_time: float
    viol_value: float
    n_logged: int
    t: np.ndarray         # (n_log,)
    q: np.ndarray         # (n_log, n*m)
    u: np.ndarray         # (n_log, n*m)
    e: np.ndarray         # (n_log, l)
    eta: np.ndarray       # (n_log, l)
    e_lo: np.ndarray      # (n_log, l) signed lower bounds (negative)
    e_hi: np.ndarray      # (n_log, l)
    flags: np.ndarray     # (n_log, 3) int8: funnel, collision, disconnection (sticky)
    dhat: np.ndarray      # (n*m,) final estimator state


def allocate_result(plan: SimPlan) -> RawResult:
    n_log, nm, l = plan.n_log, plan.n * plan.m, plan.l
    return RawResult(
        status=STATUS_OK, viol_edge=-1, viol_time=np.nan, viol_value=np.nan,
        n_logged=0,
        t=np.zeros(n_log),
        q=np.zeros((n_log, nm)),
        u=np.zeros((n_log, nm)),
        e=np.zeros((n_log, l)),
        eta=np.zeros((n_log, l)),
        e_lo=np.zeros((n_log, l)),
        e_hi=np.zeros((n_log, l)),
        flags=np.zeros((n_log, 3), dtype=np.int8),
        dhat=plan.dhat0.copy(),
    )
