"""Scenario definition, JSON (de)serialization, validation, built-in setups.

A scenario bundles everything one closed-loop run needs: the formation graph
with either a desired realization or desired edge distances, initial
positions (or a seed to generate them near the target), per-agent radii,
funnel parameters, controller selection, disturbances, an optional reference
centroid velocity, and integration settings.

File format: JSON with a versioned schema (see ``to_jsonable`` for the exact
layout).  Agent and leader indices are 1-based in files, matching the usual
labeling of formation diagrams; the Python API is 0-based throughout.
Scalars may be given wherever a per-edge or per-agent list is expected and
are broadcast.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from ._core.plan import (
    INTEGRATOR_EULER,
    INTEGRATOR_RK4,
    SimPlan,
    VARIANT_CONVENTIONAL,
    VARIANT_MANEUVER,
    VARIANT_PPC,
    VARIANT_ROBUST,
)
from .controller import VARIANTS, expand_edge_weights
from .disturbance import DisturbanceSignal, SinusoidSignal, SinusoidTerm, flatten_terms
from .errors import ScenarioError
from .performance import (
    BOUNDARY_GUARD,
    DEFAULT_RIGIDITY_BUDGET,
    EdgeSpec,
    PerformanceFunction,
    omega_I_check,
)
from .rigidity import Framework, RigidGraph, is_infinitesimally_rigid, is_minimally_rigid
from .simulation import SimConfig, distance_errors

SCHEMA_VERSION = 1

_VARIANT_CODES = {
    "ppc": VARIANT_PPC,
    "ppc_maneuver": VARIANT_MANEUVER,
    "conventional": VARIANT_CONVENTIONAL,
    "robust_conventional": VARIANT_ROBUST,
}
_INTEGRATOR_CODES = {"rk4": INTEGRATOR_RK4, "euler": INTEGRATOR_EULER}


@dataclass(frozen=True)
class ConventionalParams:
    """Parameters of the conventional baselines (gradient gain, saturation
    sharpness, estimator decay and per-edge drive weights)."""

    k: float = 0.3
    epsilon: float = 0.01
    theta: float = 0.01
    weights: tuple[float, ...] | float = 1.5


@dataclass(frozen=True)
class Scenario:
    name: str
    dimension: int
    n_agents: int
    edges: tuple[tuple[int, int], ...]          # 0-based
    safety_radius: np.ndarray                   # (n,)
    sensing_radius: np.ndarray                  # (n,)
    initial_positions: np.ndarray | None        # (n, m) or None -> generated
    desired_positions: np.ndarray | None        # (n, m)
    desired_distances: np.ndarray | None        # (l,)
    mu: float
    mu_bar: np.ndarray                          # (l,)
    mu_underbar: np.ndarray                     # (l,)
    rho0: np.ndarray                            # (l,)
    rho_inf: np.ndarray                         # (l,)
    decay: np.ndarray                           # (l,)
    rigidity_budget: float | None
    gains: np.ndarray                           # (l,)
    variant: str
    leader: int | None                          # 0-based
    conventional: ConventionalParams
    disturbance: DisturbanceSignal
    centroid_velocity: SinusoidSignal | None
    sim: SimConfig
    initial_jitter: float = 0.25

    def prepare(self) -> "PreparedScenario":
        return prepare(self)

    def with_overrides(self, *, dt=None, duration=None, variant=None,
                       disturbance_scale=None, seed=None) -> "Scenario":
        """Copy with the standard command-line overrides applied."""
        sim = self.sim
        sim_kw = {}
        if dt is not None:
            sim_kw["dt"] = dt
        if duration is not None:
            sim_kw["duration"] = duration
        if seed is not None:
            sim_kw["seed"] = seed
        if sim_kw:
            sim = replace(sim, **sim_kw)
        out = replace(self, sim=sim)
        if variant is not None:
            leader = out.leader
            if variant != "ppc_maneuver":
                leader = None
            elif leader is None:
                raise ScenarioError("controller.leader: required for variant 'ppc_maneuver'")
            out = replace(out, variant=variant, leader=leader)
        if disturbance_scale is not None:
            dist = DisturbanceSignal(agents=out.disturbance.agents, scale=disturbance_scale)
            out = replace(out, disturbance=dist)
        return out


# ---------------------------------------------------------------------------
# JSON layer

def _expect(cond: bool, where: str, msg: str):
    if not cond:
        raise ScenarioError(f"{where}: {msg}")


def _get(obj: dict, where: str, key: str, required=True, default=None):
    if key not in obj or obj[key] is None:
        _expect(not required, f"{where}.{key}", "missing required field")
        return default
    return obj[key]


def _broadcast(value, count: int, where: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(count, float(arr))
    _expect(arr.shape == (count,), where, f"expected a scalar or list of length {count}")
    return arr


def _terms_from_json(axis_terms, where: str) -> tuple[SinusoidTerm, ...]:
    out = []
    for idx, term in enumerate(axis_terms or []):
        w = f"{where}[{idx}]"
        _expect(isinstance(term, dict), w, "term must be an object")
        kind = _get(term, w, "kind")
        amp = _get(term, w, "amplitude")
        freq = _get(term, w, "angular_frequency")
        try:
            out.append(SinusoidTerm(amplitude=float(amp), angular_frequency=float(freq), kind=kind))
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"{w}: {exc}") from exc
    return tuple(out)


def _terms_to_json(axis_terms) -> list:
    return [{"kind": t.kind, "amplitude": t.amplitude, "angular_frequency": t.angular_frequency}
            for t in axis_terms]


def scenario_from_jsonable(data: dict, name_hint: str = "scenario") -> Scenario:
    _expect(isinstance(data, dict), name_hint, "top level must be an object")
    version = _get(data, name_hint, "schema_version")
    _expect(version == SCHEMA_VERSION, f"{name_hint}.schema_version",
            f"unsupported version {version!r} (expected {SCHEMA_VERSION})")
    name = data.get("name", name_hint)
    dimension = int(_get(data, name_hint, "dimension"))
    _expect(dimension in (2, 3), f"{name_hint}.dimension", f"must be 2 or 3, got {dimension}")

    agents = _get(data, name_hint, "agents")
    n = int(_get(agents, "agents", "count"))
    _expect(n >= 2, "agents.count", f"need at least 2 agents, got {n}")
    init = agents.get("initial_positions")
    initial = None
    if init is not None:
        initial = np.asarray(init, dtype=float)
        _expect(initial.shape == (n, dimension), "agents.initial_positions",
                f"expected shape ({n}, {dimension}), got {initial.shape}")
    safety = _broadcast(_get(agents, "agents", "safety_radius"), n, "agents.safety_radius")
    sensing = _broadcast(_get(agents, "agents", "sensing_radius"), n, "agents.sensing_radius")

    formation = _get(data, name_hint, "formation")
    edges_raw = _get(formation, "formation", "edges")
    edges = []
    for k, pair in enumerate(edges_raw):
        where = f"formation.edges[{k}]"
        _expect(isinstance(pair, (list, tuple)) and len(pair) == 2, where, "must be a pair")
        i, j = int(pair[0]), int(pair[1])
        _expect(1 <= i <= n and 1 <= j <= n, where, f"vertex out of range 1..{n}")
        edges.append((i - 1, j - 1))
    edges = tuple(edges)
    l = len(edges)
    desired_pos = formation.get("desired_positions")
    if desired_pos is not None:
        desired_pos = np.asarray(desired_pos, dtype=float)
        _expect(desired_pos.shape == (n, dimension), "formation.desired_positions",
                f"expected shape ({n}, {dimension}), got {desired_pos.shape}")
    desired_d = formation.get("desired_distances")
    if desired_d is not None:
        desired_d = _broadcast(desired_d, l, "formation.desired_distances")
    _expect(desired_pos is not None or desired_d is not None, "formation",
            "need desired_positions or desired_distances")

    funnel = _get(data, name_hint, "funnel")
    rho0 = _broadcast(funnel.get("rho0", 1.0), l, "funnel.rho0")
    rho_inf = _broadcast(_get(funnel, "funnel", "rho_inf"), l, "funnel.rho_inf")
    decay = _broadcast(_get(funnel, "funnel", "decay"), l, "funnel.decay")
    mu = float(_get(funnel, "funnel", "mu"))
    mu_bar = _broadcast(_get(funnel, "funnel", "mu_bar"), l, "funnel.mu_bar")
    mu_underbar = _broadcast(_get(funnel, "funnel", "mu_underbar"), l, "funnel.mu_underbar")
    budget = funnel.get("rigidity_budget")
    if budget is not None:
        budget = float(budget)

    controller = _get(data, name_hint, "controller")
    variant = _get(controller, "controller", "variant")
    _expect(variant in VARIANTS, "controller.variant", f"must be one of {VARIANTS}")
    gains = _broadcast(_get(controller, "controller", "gains"), l, "controller.gains")
    leader = controller.get("leader")
    if leader is not None:
        leader = int(leader)
        _expect(1 <= leader <= n, "controller.leader", f"out of range 1..{n}")
        leader -= 1
    conv_raw = controller.get("conventional") or {}
    weights = conv_raw.get("weights", 1.5)
    if not np.isscalar(weights):
        weights = tuple(float(x) for x in np.asarray(weights, dtype=float).reshape(-1))
    conventional = ConventionalParams(
        k=float(conv_raw.get("k", 0.3)),
        epsilon=float(conv_raw.get("epsilon", 0.01)),
        theta=float(conv_raw.get("theta", 0.01)),
        weights=weights,
    )

    dist_raw = data.get("disturbance") or {}
    scale = float(dist_raw.get("scale", 1.0))
    per_agent = dist_raw.get("agents")
    if per_agent is None:
        signal = DisturbanceSignal.none(n, dimension)
        signal = DisturbanceSignal(agents=signal.agents, scale=scale)
    else:
        _expect(isinstance(per_agent, list) and len(per_agent) == n, "disturbance.agents",
                f"expected one axis-list per agent ({n})")
        sigs = []
        for a, axes in enumerate(per_agent):
            axes = axes or [[] for _ in range(dimension)]
            _expect(len(axes) == dimension, f"disturbance.agents[{a}]",
                    f"expected {dimension} axis term lists")
            sigs.append(SinusoidSignal(terms=tuple(
                _terms_from_json(axis, f"disturbance.agents[{a}][{ax}]")
                for ax, axis in enumerate(axes))))
        signal = DisturbanceSignal(agents=tuple(sigs), scale=scale)

    vd_raw = data.get("centroid_velocity")
    centroid_velocity = None
    if vd_raw is not None:
        _expect(isinstance(vd_raw, list) and len(vd_raw) == dimension, "centroid_velocity",
                f"expected {dimension} axis term lists")
        centroid_velocity = SinusoidSignal(terms=tuple(
            _terms_from_json(axis, f"centroid_velocity[{ax}]") for ax, axis in enumerate(vd_raw)))

    sim_raw = _get(data, name_hint, "simulation")
    try:
        sim = SimConfig(
            dt=float(_get(sim_raw, "simulation", "dt")),
            duration=float(_get(sim_raw, "simulation", "duration")),
            integrator=sim_raw.get("integrator", "rk4"),
            log_stride=int(sim_raw.get("log_stride", 1)),
            seed=None if sim_raw.get("seed") is None else int(sim_raw["seed"]),
        )
    except ValueError as exc:
        raise ScenarioError(f"simulation: {exc}") from exc

    return Scenario(
        name=name, dimension=dimension, n_agents=n, edges=edges,
        safety_radius=safety, sensing_radius=sensing,
        initial_positions=initial, desired_positions=desired_pos, desired_distances=desired_d,
        mu=mu, mu_bar=mu_bar, mu_underbar=mu_underbar,
        rho0=rho0, rho_inf=rho_inf, decay=decay, rigidity_budget=budget,
        gains=gains, variant=variant, leader=leader, conventional=conventional,
        disturbance=signal, centroid_velocity=centroid_velocity, sim=sim,
        initial_jitter=float(sim_raw.get("initial_jitter", 0.25)),
    )


def to_jsonable(sc: Scenario) -> dict:
    """Scenario as a plain JSON-serializable dict (1-based indices)."""
    return {
        "schema_version": SCHEMA_VERSION,
        "name": sc.name,
        "dimension": sc.dimension,
        "agents": {
            "count": sc.n_agents,
            "initial_positions": None if sc.initial_positions is None else sc.initial_positions.tolist(),
            "safety_radius": sc.safety_radius.tolist(),
            "sensing_radius": sc.sensing_radius.tolist(),
        },
        "formation": {
            "edges": [[i + 1, j + 1] for i, j in sc.edges],
            "desired_positions": None if sc.desired_positions is None else sc.desired_positions.tolist(),
            "desired_distances": None if sc.desired_distances is None else sc.desired_distances.tolist(),
        },
        "funnel": {
            "rho0": sc.rho0.tolist(),
            "rho_inf": sc.rho_inf.tolist(),
            "decay": sc.decay.tolist(),
            "mu": sc.mu,
            "mu_bar": sc.mu_bar.tolist(),
            "mu_underbar": sc.mu_underbar.tolist(),
            "rigidity_budget": sc.rigidity_budget,
        },
        "controller": {
            "variant": sc.variant,
            "gains": sc.gains.tolist(),
            "leader": None if sc.leader is None else sc.leader + 1,
            "conventional": {
                "k": sc.conventional.k,
                "epsilon": sc.conventional.epsilon,
                "theta": sc.conventional.theta,
                "weights": sc.conventional.weights if np.isscalar(sc.conventional.weights)
                           else list(sc.conventional.weights),
            },
        },
        "disturbance": {
            "scale": sc.disturbance.scale,
            "agents": [[_terms_to_json(axis) for axis in sig.terms] for sig in sc.disturbance.agents],
        },
        "centroid_velocity": None if sc.centroid_velocity is None
                             else [_terms_to_json(axis) for axis in sc.centroid_velocity.terms],
        "simulation": {
            "dt": sc.sim.dt,
            "duration": sc.sim.duration,
            "integrator": sc.sim.integrator,
            "log_stride": sc.sim.log_stride,
            "seed": sc.sim.seed,
            "initial_jitter": sc.initial_jitter,
        },
    }


def load_scenario(path) -> Scenario:
    """Load and fully validate a scenario file.

    Parse errors name the line and column; semantic errors name the field and
    the violated constraint.  The returned scenario has already passed
    :func:`prepare`-level validation.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read file ({exc})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    sc = scenario_from_jsonable(data, name_hint=path.stem)
    sc.prepare()
    return sc


def save_scenario(sc: Scenario, path) -> None:
    Path(path).write_text(json.dumps(to_jsonable(sc), indent=2) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Validation / preparation

@dataclass(frozen=True)
class ValidationReport:
    """What validation established, for display by the CLI."""

    desired_minimally_rigid: bool | None    # None when no realization given
    initial_infinitesimally_rigid: bool
    aggregate_bound_total: float
    aggregate_bound_budget: float
    aggregate_bound_within: bool
    edge_table: tuple[dict, ...]            # per-edge d, e0, bounds, half-widths


@dataclass(frozen=True)
class PreparedScenario:
    scenario: Scenario
    graph: RigidGraph
    desired_distances: np.ndarray           # (l,)
    desired_framework: Framework | None
    initial_framework: Framework
    specs: tuple[EdgeSpec, ...]
    r_s_edge: np.ndarray                    # (l,) pairwise collision limits
    r_c_edge: np.ndarray                    # (l,) pairwise connectivity limits
    report: ValidationReport

    def build_plan(self) -> SimPlan:
        return _build_plan(self)


def _generate_initial_positions(sc: Scenario, desired: np.ndarray) -> np.ndarray:
    if sc.sim.seed is None:
        raise ScenarioError("agents.initial_positions: missing and no simulation.seed "
                            "given to generate them")
    rng = np.random.default_rng(sc.sim.seed)
    return desired + rng.uniform(-sc.initial_jitter, sc.initial_jitter, size=desired.shape)


def prepare(sc: Scenario) -> PreparedScenario:
    """Check every scenario invariant and precompute the per-edge funnel data.

    Raises :class:`ScenarioError` naming the offending field or edge.  Edges
    are reported 1-based, as in the file format.
    """
    try:
        graph = RigidGraph(sc.n_agents, sc.edges)
    except ValueError as exc:
        raise ScenarioError(f"formation.edges: {exc}") from exc
    _expect(graph.is_connected(), "formation.edges", "graph must be connected")
    n, m, l = sc.n_agents, sc.dimension, graph.l

    if np.any(sc.safety_radius <= 0) or np.any(sc.sensing_radius <= 0):
        raise ScenarioError("agents: radii must be positive")
    if np.any(sc.sensing_radius <= sc.safety_radius):
        raise ScenarioError("agents: sensing radius must exceed safety radius for every agent")

    desired_fw = None
    d = sc.desired_distances
    if sc.desired_positions is not None:
        desired_fw = Framework(graph, sc.desired_positions)
        d_from_pos = np.sqrt(np.einsum("km,km->k", desired_fw.relative_positions(),
                                       desired_fw.relative_positions()))
        if d is None:
            d = d_from_pos
        elif not np.allclose(d, d_from_pos, rtol=1e-9, atol=1e-12):
            k = int(np.argmax(np.abs(d - d_from_pos)))
            raise ScenarioError(
                f"formation: desired_distances[{k}]={d[k]:.6g} disagrees with the "
                f"desired realization ({d_from_pos[k]:.6g})")
    if np.any(d <= 0):
        raise ScenarioError("formation: desired distances must be positive")

    desired_min_rigid = None
    if desired_fw is not None:
        desired_min_rigid = is_minimally_rigid(desired_fw)
        if not desired_min_rigid:
            raise ScenarioError("formation: desired framework is not minimally and "
                                "infinitesimally rigid")
    else:
        want = graph.minimally_rigid_edge_count(m)
        _expect(l == want, "formation.edges",
                f"need exactly {want} edges for a minimally rigid graph on {n} "
                f"vertices in {m}-D, got {l}")

    r_s_edge = np.empty(l)
    r_c_edge = np.empty(l)
    for k, (i, j) in enumerate(graph.edges):
        r_s_edge[k] = sc.safety_radius[i] + sc.safety_radius[j]
        r_c_edge[k] = min(sc.sensing_radius[i] + sc.safety_radius[j],
                          sc.sensing_radius[j] + sc.safety_radius[i])
        if not (r_s_edge[k] < d[k] < r_c_edge[k]):
            raise ScenarioError(
                f"formation: edge ({i + 1},{j + 1}): need r_s={r_s_edge[k]:.6g} < "
                f"d={d[k]:.6g} < r_c={r_c_edge[k]:.6g}; the formation is not feasible")

    q0 = sc.initial_positions
    if q0 is None:
        if desired_fw is None:
            raise ScenarioError("agents.initial_positions: missing and no desired "
                                "realization to generate them from")
        q0 = _generate_initial_positions(sc, sc.desired_positions)
    initial_fw = Framework(graph, q0)
    if not is_infinitesimally_rigid(initial_fw):
        raise ScenarioError("agents.initial_positions: initial framework is not "
                            "infinitesimally rigid")

    if sc.variant == "ppc_maneuver":
        _expect(sc.leader is not None, "controller.leader", "required for variant 'ppc_maneuver'")
        _expect(sc.centroid_velocity is not None, "centroid_velocity",
                "required for variant 'ppc_maneuver'")
        _expect(sc.centroid_velocity.dimension == m, "centroid_velocity",
                f"expected {m} axes, got {sc.centroid_velocity.dimension}")
    if np.any(sc.gains <= 0):
        raise ScenarioError("controller.gains: must be strictly positive")
    _expect(sc.disturbance.n_agents == n, "disturbance.agents",
            f"expected {n} agents, got {sc.disturbance.n_agents}")

    e0, _ = distance_errors(initial_fw, d)
    specs = []
    for k, (i, j) in enumerate(graph.edges):
        perf = PerformanceFunction(rho0=sc.rho0[k], rho_inf=sc.rho_inf[k], decay=sc.decay[k])
        try:
            specs.append(EdgeSpec.from_initial_error(
                e0[k], d[k], r_s_edge[k], r_c_edge[k],
                sc.mu, sc.mu_bar[k], sc.mu_underbar[k], perf))
        except ValueError as exc:
            raise ScenarioError(f"funnel: edge ({i + 1},{j + 1}): {exc}") from exc
    specs = tuple(specs)

    budget = DEFAULT_RIGIDITY_BUDGET if sc.rigidity_budget is None else sc.rigidity_budget
    agg = omega_I_check(specs, budget)
    if sc.rigidity_budget is not None and not agg.within:
        raise ScenarioError(
            f"funnel.rigidity_budget: aggregate initial bound {agg.total:.6g} exceeds "
            f"the configured budget {agg.budget:.6g}")

    edge_table = tuple(
        {"edge": (i + 1, j + 1), "d": float(d[k]), "e0": float(e0[k]),
         "e0_bar": specs[k].e0_bar, "e0_underbar": specs[k].e0_underbar,
         "b_bar": specs[k].b_bar, "b_underbar": specs[k].b_underbar}
        for k, (i, j) in enumerate(graph.edges))
    report = ValidationReport(
        desired_minimally_rigid=desired_min_rigid,
        initial_infinitesimally_rigid=True,
        aggregate_bound_total=agg.total,
        aggregate_bound_budget=agg.budget,
        aggregate_bound_within=agg.within,
        edge_table=edge_table,
    )
    return PreparedScenario(
        scenario=sc, graph=graph, desired_distances=np.asarray(d, dtype=float),
        desired_framework=desired_fw, initial_framework=initial_fw, specs=specs,
        r_s_edge=r_s_edge, r_c_edge=r_c_edge, report=report)


def _build_plan(prepared: PreparedScenario) -> SimPlan:
    sc = prepared.scenario
    graph = prepared.graph
    n, m, l = sc.n_agents, sc.dimension, graph.l
    ei = np.array([i for i, _ in graph.edges], dtype=np.int32)
    ej = np.array([j for _, j in graph.edges], dtype=np.int32)
    specs = prepared.specs

    vd_axes = sc.centroid_velocity.terms if sc.centroid_velocity is not None \
        else tuple(() for _ in range(m))
    vd_amp, vd_omega, vd_kind, vd_off = flatten_terms(vd_axes)
    db_axes = [axis for sig in sc.disturbance.agents for axis in sig.terms]
    db_amp, db_omega, db_kind, db_off = flatten_terms(db_axes)

    dhat0 = np.zeros(n * m)
    w_axis = expand_edge_weights(graph, sc.conventional.weights, m)
    return SimPlan(
        n=n, m=m, ei=ei, ej=ej,
        d=prepared.desired_distances,
        b_bar=np.array([s.b_bar for s in specs]),
        b_under=np.array([s.b_underbar for s in specs]),
        rho0=sc.rho0, rho_inf=sc.rho_inf, decay=sc.decay,
        gains=sc.gains,
        variant=_VARIANT_CODES[sc.variant],
        leader=-1 if sc.leader is None else sc.leader,
        vd_amp=vd_amp, vd_omega=vd_omega, vd_kind=vd_kind, vd_off=vd_off,
        db_amp=db_amp, db_omega=db_omega, db_kind=db_kind, db_off=db_off,
        db_scale=sc.disturbance.scale,
        k_conv=sc.conventional.k, epsilon=sc.conventional.epsilon,
        theta=sc.conventional.theta, w_axis=w_axis, dhat0=dhat0,
        r_s=prepared.r_s_edge, r_c=prepared.r_c_edge,
        q0=prepared.initial_framework.positions.reshape(-1),
        dt=sc.sim.dt, n_steps=sc.sim.n_steps,
        integrator=_INTEGRATOR_CODES[sc.sim.integrator],
        log_steps=sc.sim.log_steps(),
        guard=BOUNDARY_GUARD,
    )


# ---------------------------------------------------------------------------
# Built-in scenarios

def _sin(amp, omega):
    return SinusoidTerm(amplitude=amp, angular_frequency=omega, kind="sin")


def _cos(amp, omega):
    return SinusoidTerm(amplitude=amp, angular_frequency=omega, kind="cos")


def _tetra_desired() -> np.ndarray:
    """Tetrahedron with base side 1.5 and apex edges 2.5: apex on the z-axis
    above an equilateral triangle centered at the origin."""
    rb = 1.5 / math.sqrt(3.0)
    angles = (math.pi / 2, math.pi / 2 + 2 * math.pi / 3, math.pi / 2 + 4 * math.pi / 3)
    base = [[rb * math.cos(a), rb * math.sin(a), 0.0] for a in angles]
    apex = [0.0, 0.0, math.sqrt(2.5 ** 2 - rb ** 2)]
    return np.array([apex] + base)


def _tetra_acquisition() -> Scenario:
    pi = math.pi
    edges = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    l = len(edges)
    q0 = np.array([
        [2.0610, 1.9605, 3.8940],
        [0.3424, 0.3424, 0.3424],
        [2.9121, 1.4121, 1.4121],
        [0.8137, 1.3627, 0.0637],
    ])
    disturbance = DisturbanceSignal(agents=(
        SinusoidSignal(terms=(
            (_sin(0.4, 0.8 * pi), _cos(0.25, 2 * pi)),
            (_cos(0.5, pi),),
            (_sin(0.4, 2 * pi), _cos(0.2, 1.2 * pi)),
        )),
        SinusoidSignal(terms=(
            (_sin(0.8, 1.2 * pi), _cos(0.3, 0.5 * pi)),
            (_sin(0.4, 0.8 * pi), _cos(0.25, 2 * pi)),
            (_sin(0.35, 0.6 * pi), _cos(0.6, 1.2 * pi)),
        )),
        SinusoidSignal(terms=(
            (_sin(0.2, 1.2 * pi), _cos(0.4, 0.5 * pi)),
            (_sin(0.2, 1.2 * pi),),
            (_sin(0.5, 1.5 * pi), _cos(0.4, 2 * pi)),
        )),
        SinusoidSignal(terms=(
            (_sin(0.35, 0.6 * pi), _cos(0.6, 1.2 * pi)),
            (_sin(0.4, 0.8 * pi), _cos(0.25, 2 * pi)),
            (_sin(0.5, 0.8 * pi), _cos(0.7, pi)),
        )),
    ))
    return Scenario(
        name="tetra_acquisition", dimension=3, n_agents=4, edges=edges,
        safety_radius=np.full(4, 0.2), sensing_radius=np.full(4, 5.0),
        initial_positions=q0,
        desired_positions=_tetra_desired(),
        desired_distances=np.array([2.5, 2.5, 2.5, 1.5, 1.5, 1.5]),
        mu=0.12, mu_bar=np.full(l, 0.3), mu_underbar=np.full(l, 0.3),
        rho0=np.ones(l), rho_inf=np.full(l, 0.03), decay=np.full(l, 0.6),
        rigidity_budget=None,
        gains=np.full(l, 0.1), variant="ppc", leader=None,
        conventional=ConventionalParams(),
        disturbance=disturbance, centroid_velocity=None,
        sim=SimConfig(dt=1e-3, duration=10.0),
    )


def _pentagon_desired() -> np.ndarray:
    """Regular pentagon inscribed in the unit circle, vertex 1 on top."""
    angles = [math.pi / 2 + 2 * math.pi * k / 5 for k in range(5)]
    return np.array([[math.cos(a), math.sin(a)] for a in angles])


_PENTAGON_EDGES = ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4))


def _pentagon_distances() -> np.ndarray:
    side = math.sqrt(2.0 * (1.0 - math.cos(2.0 * math.pi / 5.0)))
    diag = math.sqrt(2.0 * (1.0 + math.cos(math.pi / 5.0)))
    return np.array([side, diag, diag, side, side, side, side])


def _pentagon_disturbance() -> DisturbanceSignal:
    pi = math.pi
    zero = SinusoidSignal.zero(2)
    return DisturbanceSignal(agents=(
        zero,
        SinusoidSignal(terms=(
            (_sin(0.6, 1.2 * pi), _sin(-0.3, 0.6 * pi)),
            (_sin(0.5, pi),),
        )),
        SinusoidSignal(terms=(
            (_sin(0.3, 0.6 * pi), _sin(-0.6, 1.2 * pi)),
            (_sin(-0.5, pi),),
        )),
        zero,
        zero,
    ))


def _pentagon_case(scale: float, name: str) -> Scenario:
    l = len(_PENTAGON_EDGES)
    q0 = np.array([
        [-0.8049, 0.6951],
        [-1.3941, -0.1340],
        [-0.4940, -0.7153],
        [1.5028, 0.1060],
        [1.8808, 1.2388],
    ])
    return Scenario(
        name=name, dimension=2, n_agents=5, edges=_PENTAGON_EDGES,
        safety_radius=np.full(5, 0.2), sensing_radius=np.full(5, 5.0),
        initial_positions=q0,
        desired_positions=_pentagon_desired(),
        desired_distances=_pentagon_distances(),
        mu=0.12, mu_bar=np.full(l, 0.3), mu_underbar=np.full(l, 0.3),
        rho0=np.ones(l), rho_inf=np.full(l, 0.03), decay=np.full(l, 1.0),
        rigidity_budget=None,
        gains=np.full(l, 0.3), variant="ppc", leader=None,
        conventional=ConventionalParams(k=0.3, epsilon=0.01, theta=0.01, weights=1.5),
        disturbance=DisturbanceSignal(agents=_pentagon_disturbance().agents, scale=scale),
        centroid_velocity=None,
        # the funnel gain stiffens as the envelopes settle; 5e-5 keeps classical
        # RK4 inside its stability region for these funnel widths
        sim=SimConfig(dt=5e-5, duration=20.0, log_stride=20),
    )


def _pentagon_maneuver() -> Scenario:
    l = len(_PENTAGON_EDGES)
    q0 = np.array([
        [-0.3639, 0.6361],
        [-1.7126, -0.4526],
        [0.4919, 0.2706],
        [2.0789, -0.0179],
        [0.9100, 0.2679],
    ])
    vd = SinusoidSignal(terms=((_sin(1.0, 0.5),), (_cos(1.0, 0.5),)))
    return Scenario(
        name="pentagon_maneuver", dimension=2, n_agents=5, edges=_PENTAGON_EDGES,
        safety_radius=np.full(5, 0.2), sensing_radius=np.full(5, 5.0),
        initial_positions=q0,
        desired_positions=_pentagon_desired(),
        desired_distances=_pentagon_distances(),
        mu=0.12, mu_bar=np.full(l, 0.3), mu_underbar=np.full(l, 0.3),
        rho0=np.ones(l), rho_inf=np.full(l, 0.03), decay=np.full(l, 1.0),
        rigidity_budget=None,
        gains=np.full(l, 0.2), variant="ppc_maneuver", leader=4,
        conventional=ConventionalParams(),
        disturbance=DisturbanceSignal.none(5, 2),
        centroid_velocity=vd,
        # see the stability note in _pentagon_case; 1e-4 suffices here
        sim=SimConfig(dt=1e-4, duration=20.0, log_stride=10),
    )


_BUILTINS = {
    "tetra_acquisition": _tetra_acquisition,
    "pentagon_case1": lambda: _pentagon_case(1.0, "pentagon_case1"),
    "pentagon_case2": lambda: _pentagon_case(2.0, "pentagon_case2"),
    "pentagon_case3": lambda: _pentagon_case(4.0, "pentagon_case3"),
    "pentagon_maneuver": _pentagon_maneuver,
}


def builtin_names() -> tuple[str, ...]:
    return tuple(_BUILTINS)


def builtin(name: str) -> Scenario:
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise ScenarioError(
            f"unknown builtin {name!r}; available: {', '.join(_BUILTINS)}") from None
    return factory()
