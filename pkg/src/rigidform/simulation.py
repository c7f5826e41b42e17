"""Disturbed single-integrator plant: integration, monitoring, traces.

The plant is ``qdot_i = u_i + delta_i(t)`` per agent.  Runs are fixed-step
(classical RK4 by default, explicit Euler optionally) with disturbances and
reference velocities evaluated at integrator stage times.  For the
funnel-based control variants every stage evaluation checks containment and
the run halts with a diagnostic on a breach; constraint flags (funnel bound,
collision, disconnection) are monitored at logged steps and are sticky.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass

import numpy as np

from . import _core
from .errors import ContainmentViolation, FrameworkMismatch
from .rigidity import Framework, RigidGraph

INTEGRATORS = ("rk4", "euler")
SHAPE_CLASSES = ("correct", "ambiguous", "unformed")

#: Default relative tolerance for shape classification: desk-scale proxy for
#: "has converged to an isometric copy of the target".
DEFAULT_SHAPE_TOL = 0.02


@dataclass(frozen=True)
class SimConfig:
    """Fixed-step integration settings.

    The horizon is ``round(duration / dt)`` steps; logging records every
    ``log_stride``-th step plus the final state.  ``seed`` only matters for
    scenarios that generate their initial positions.
    """

    dt: float
    duration: float
    integrator: str = "rk4"
    log_stride: int = 1
    seed: int | None = None

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.duration < self.dt:
            raise ValueError(f"duration {self.duration} shorter than one step {self.dt}")
        if self.integrator not in INTEGRATORS:
            raise ValueError(f"integrator must be one of {INTEGRATORS}, got {self.integrator!r}")
        if not (isinstance(self.log_stride, int) and self.log_stride >= 1):
            raise ValueError(f"log_stride must be a positive integer, got {self.log_stride!r}")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    def log_steps(self) -> np.ndarray:
        steps = list(range(0, self.n_steps + 1, self.log_stride))
        if steps[-1] != self.n_steps:
            steps.append(self.n_steps)
        return np.asarray(steps, dtype=np.int64)


@dataclass
class SimulationTrace:
    """Time-indexed record of one run.

    All series share the logged time grid.  ``lower_bounds`` holds the signed
    lower error bound (negative values); containment at a row means
    ``lower_bounds < errors < upper_bounds`` elementwise.  Flag series are
    sticky: once raised they stay raised for the rest of the trace.
    """

    graph: RigidGraph
    dimension: int
    times: np.ndarray            # (T,)
    positions: np.ndarray        # (T, n, m)
    errors: np.ndarray           # (T, l)
    squared_errors: np.ndarray   # (T, l)
    lower_bounds: np.ndarray     # (T, l)
    upper_bounds: np.ndarray     # (T, l)
    controls: np.ndarray         # (T, n, m)
    centroids: np.ndarray        # (T, m)
    ppb_violation: np.ndarray    # (T,) bool
    collision: np.ndarray        # (T,) bool
    disconnection: np.ndarray    # (T,) bool
    max_funnel_ratio: float
    wall_time: float
    dhat_final: np.ndarray | None = None

    @property
    def n_logged(self) -> int:
        return len(self.times)

    def final_framework(self) -> Framework:
        return Framework(self.graph, self.positions[-1])

    def final_error_norm(self) -> float:
        return float(np.linalg.norm(self.errors[-1]))

    def any_flag(self) -> bool:
        return bool(self.ppb_violation[-1] or self.collision[-1] or self.disconnection[-1])

    def write_csv(self, path) -> None:
        write_trace_csv(self, path)


def distance_errors(fw: Framework, d) -> tuple[np.ndarray, np.ndarray]:
    """Per-edge distance errors ``e`` and squared-distance errors ``eta``.

    ``e`` is the actual minus desired distance, ``eta = e * (e + 2 d)``
    (identically the difference of squared distances), so the two vanish
    together and the algebraic relation between them is exact on every
    output.
    """
    d = np.broadcast_to(np.asarray(d, dtype=float), (fw.graph.l,))
    if np.any(d <= 0.0):
        raise ValueError("desired distances must be positive")
    rel = fw.relative_positions()
    dist = np.sqrt(np.einsum("km,km->k", rel, rel))
    e = dist - d
    eta = e * (e + 2.0 * d)
    return e, eta


def step(q, control, disturbance, t: float, dt: float, integrator: str = "rk4") -> np.ndarray:
    """One fixed-step update of ``qdot = control(q, t) + disturbance(t)``.

    ``q`` is the stacked (m*n,) state.  Classical RK4 evaluates the right
    hand side at the stage times; a constant right hand side is advanced
    exactly.  Containment errors raised by the controller propagate (the run
    halts rather than producing silent garbage).
    """
    q = np.asarray(q, dtype=float)
    if integrator not in INTEGRATORS:
        raise ValueError(f"integrator must be one of {INTEGRATORS}, got {integrator!r}")

    def f(state, ts):
        return np.asarray(control(state, ts), dtype=float) + np.asarray(disturbance(ts), dtype=float)

    if integrator == "euler":
        return q + dt * f(q, t)
    half = 0.5 * dt
    k1 = f(q, t)
    k2 = f(q + half * k1, t + half)
    k3 = f(q + half * k2, t + half)
    k4 = f(q + dt * k3, t + dt)
    return q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def centroid(fw: Framework) -> np.ndarray:
    """Arithmetic mean of the agent positions."""
    return fw.positions.mean(axis=0)


def classify_shape(fw: Framework, desired: Framework, tol_rel: float = DEFAULT_SHAPE_TOL) -> str:
    """Compare a framework against a fully realized desired framework.

    ``correct``  : every pairwise distance (all vertex pairs, not only edges)
                   matches the desired realization within ``tol_rel``
                   relative tolerance, i.e. the shape is congruent to the
                   target up to tolerance.
    ``ambiguous``: all *edge* distances match but some non-edge pair does
                   not: equal edge lengths realized by a different shape.
    ``unformed`` : some edge distance is off.
    """
    if fw.n != desired.n or fw.dimension != desired.dimension:
        raise FrameworkMismatch("frameworks differ in vertex count or dimension")
    if fw.graph != desired.graph:
        raise FrameworkMismatch("frameworks do not share the same graph")
    edge_set = {frozenset(e) for e in desired.graph.edges}
    ok_all = True
    ok_edges = True
    for i in range(fw.n):
        for j in range(i + 1, fw.n):
            ref = float(np.linalg.norm(desired.positions[i] - desired.positions[j]))
            if ref <= 0.0:
                raise ValueError(f"desired realization has coincident vertices {i} and {j}")
            cur = float(np.linalg.norm(fw.positions[i] - fw.positions[j]))
            if abs(cur - ref) > tol_rel * ref:
                ok_all = False
                if frozenset((i, j)) in edge_set:
                    ok_edges = False
    if ok_all:
        return "correct"
    return "ambiguous" if ok_edges else "unformed"


def run(scenario) -> SimulationTrace:
    """Validate and integrate a scenario, returning its trace.

    Accepts a :class:`~rigidform.scenario.Scenario` or an already prepared
    one.  Validation failures raise before integration starts.  A funnel
    breach at any integrator stage raises :class:`ContainmentViolation`
    naming the edge, time and modulated error, with the partial trace
    attached as its ``trace`` attribute.
    """
    from .scenario import PreparedScenario, Scenario  # deferred: scenario imports us

    if isinstance(scenario, Scenario):
        prepared = scenario.prepare()
    elif isinstance(scenario, PreparedScenario):
        prepared = scenario
    else:
        raise TypeError(f"expected Scenario or PreparedScenario, got {type(scenario).__name__}")

    plan = prepared.build_plan()
    t0 = _time.perf_counter()
    raw = _core.simulate(plan)
    wall = _time.perf_counter() - t0
    trace = _assemble_trace(prepared, plan, raw, wall)
    if raw.status != 0:
        k = raw.viol_edge
        err = ContainmentViolation(
            raw.viol_value, -plan.b_under[k], plan.b_bar[k],
            edge=prepared.graph.edges[k], time=raw.viol_time)
        err.trace = trace
        raise err
    return trace


def _assemble_trace(prepared, plan, raw, wall) -> SimulationTrace:
    n_log = raw.n_logged
    n, m = plan.n, plan.m
    t = raw.t[:n_log]
    eta = raw.eta[:n_log]
    rho = ((plan.rho0 - plan.rho_inf)[None, :] * np.exp(-np.outer(t, plan.decay))
           + plan.rho_inf[None, :])
    if n_log:
        ratio = np.maximum(eta / (plan.b_bar[None, :] * rho),
                           -eta / (plan.b_under[None, :] * rho))
        max_ratio = float(ratio.max())
    else:
        max_ratio = float("nan")
    positions = raw.q[:n_log].reshape(n_log, n, m)
    return SimulationTrace(
        graph=prepared.graph,
        dimension=m,
        times=t,
        positions=positions,
        errors=raw.e[:n_log],
        squared_errors=eta,
        lower_bounds=raw.e_lo[:n_log],
        upper_bounds=raw.e_hi[:n_log],
        controls=raw.u[:n_log].reshape(n_log, n, m),
        centroids=positions.mean(axis=1),
        ppb_violation=raw.flags[:n_log, 0].astype(bool),
        collision=raw.flags[:n_log, 1].astype(bool),
        disconnection=raw.flags[:n_log, 2].astype(bool),
        max_funnel_ratio=max_ratio,
        wall_time=wall,
        dhat_final=raw.dhat.copy(),
    )


_AXES = "xyz"


def trace_csv_header(graph: RigidGraph, dimension: int) -> list[str]:
    """Column names of the trace CSV; agent and edge indices are 1-based."""
    cols = ["t"]
    axes = _AXES[:dimension]
    cols += [f"q[{i + 1}].{a}" for i in range(graph.n) for a in axes]
    cols += [f"e[{k + 1}]" for k in range(graph.l)]
    cols += [f"eta[{k + 1}]" for k in range(graph.l)]
    cols += [f"e_lo[{k + 1}]" for k in range(graph.l)]
    cols += [f"e_hi[{k + 1}]" for k in range(graph.l)]
    cols += [f"u[{i + 1}].{a}" for i in range(graph.n) for a in axes]
    cols += [f"qc.{a}" for a in axes]
    cols += ["ppb_violation", "collision", "disconnection"]
    return cols


def write_trace_csv(trace: SimulationTrace, path) -> None:
    """Write the trace as CSV: header row, one row per logged step.

    Floats are rendered with shortest round-trip form, so identical runs
    produce byte-identical files.
    """
    header = trace_csv_header(trace.graph, trace.dimension)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in range(trace.n_logged):
            vals = [trace.times[row]]
            vals += list(trace.positions[row].reshape(-1))
            vals += list(trace.errors[row])
            vals += list(trace.squared_errors[row])
            vals += list(trace.lower_bounds[row])
            vals += list(trace.upper_bounds[row])
            vals += list(trace.controls[row].reshape(-1))
            vals += list(trace.centroids[row])
            cells = [repr(float(v)) for v in vals]
            cells += [str(int(trace.ppb_violation[row])),
                      str(int(trace.collision[row])),
                      str(int(trace.disconnection[row]))]
            fh.write(",".join(cells) + "\n")
