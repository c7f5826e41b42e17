"""Velocity control laws for single-integrator formations.

Four laws share this module: the funnel-based acquisition law in its stacked
and per-agent (decentralized) factorizations, its leader-pinned extension that
drives the formation centroid at a reference velocity, and two conventional
gradient baselines used for comparison.  All laws depend only on relative
positions, which makes them equivariant under rigid motions and implementable
in arbitrarily oriented local frames.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .performance import EdgeSpec, modulated_error, transform, xi
from .rigidity import Framework, RigidGraph, rigidity_transpose_apply

#: A reference velocity command: a bounded callable t -> (m,) vector.
VelocityCommand = Callable[[float], np.ndarray]

VARIANTS = ("ppc", "ppc_maneuver", "conventional", "robust_conventional")


@dataclass
class ControllerConfig:
    """Gains and variant selection for a closed-loop run.

    ``gains`` is the per-edge diagonal of the funnel law; ``k``, ``epsilon``,
    ``theta`` and ``weights`` parameterize the robust conventional baseline,
    whose disturbance-bound estimate starts from ``dhat0`` (stacked per agent
    axis, owned by the simulation loop thereafter).
    """

    gains: np.ndarray | float = 1.0
    variant: str = "ppc"
    leader: int | None = None
    k: float = 0.3
    epsilon: float = 0.01
    theta: float = 0.01
    weights: np.ndarray | float = 1.5
    dhat0: np.ndarray | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if np.any(np.asarray(self.gains, dtype=float) <= 0.0):
            raise ValueError("all edge gains must be strictly positive")
        if (self.variant == "ppc_maneuver") != (self.leader is not None):
            raise ValueError("a leader is required exactly when variant is 'ppc_maneuver'")
        if self.variant == "robust_conventional":
            if not (self.k > 0.0 and self.epsilon > 0.0 and self.theta >= 0.0):
                raise ValueError("robust baseline needs k > 0, epsilon > 0, theta >= 0")
            if np.any(np.asarray(self.weights, dtype=float) <= 0.0):
                raise ValueError("estimator weights must be strictly positive")
            if self.dhat0 is not None and np.any(np.asarray(self.dhat0, dtype=float) < 0.0):
                raise ValueError("dhat0 must be nonnegative")


def edge_gains(graph: RigidGraph, gains) -> np.ndarray:
    """Broadcast a scalar or per-edge gain spec to an (l,) array."""
    arr = np.broadcast_to(np.asarray(gains, dtype=float), (graph.l,)).copy()
    if np.any(arr <= 0.0):
        raise ValueError("all edge gains must be strictly positive")
    return arr


def _funnel_edge_weights(fw: Framework, specs, gains, t: float) -> np.ndarray:
    """Per-edge scalars k * xi * sigma of the funnel law at time t."""
    specs = list(specs)
    if len(specs) != fw.graph.l:
        raise ValueError(f"expected {fw.graph.l} edge specs, got {len(specs)}")
    k = edge_gains(fw.graph, gains)
    rel = fw.relative_positions()
    dist = np.sqrt(np.einsum("km,km->k", rel, rel))
    d = np.array([s.d for s in specs])
    e = dist - d
    eta = e * (e + 2.0 * d)
    rho_t = np.array([s.perf.rho(t) for s in specs])
    b_bar = np.array([s.b_bar for s in specs])
    b_under = np.array([s.b_underbar for s in specs])
    eta_hat = modulated_error(eta, rho_t)
    sigma = transform(eta_hat, b_bar, b_under, edges=fw.graph.edges, time=t)
    gain = xi(eta_hat, rho_t, b_bar, b_under, edges=fw.graph.edges, time=t)
    return k * gain * sigma


def ppc_control(fw: Framework, specs, gains, t: float) -> np.ndarray:
    """Funnel-based formation acquisition law, stacked over agents.

    Returns the (m*n,) velocity command ``-R^T diag(xi) K sigma``.  Zero when
    all distance errors are zero; requires every modulated error strictly
    inside its funnel (propagates the containment error otherwise).
    """
    w = _funnel_edge_weights(fw, specs, gains, t)
    return -rigidity_transpose_apply(fw, w)


def agent_control(i: int, neighbor_rel: Mapping[int, np.ndarray],
                  specs: Mapping[int, EdgeSpec], gains: Mapping[int, float],
                  t: float) -> np.ndarray:
    """Per-agent factorization of :func:`ppc_control`.

    ``neighbor_rel`` maps each neighbor j to the relative position of agent i
    with respect to j, expressed in any frame; ``specs`` and ``gains`` map the
    same neighbors to the shared edge data.  Only distances enter the scalar
    edge weight, so the output transforms like the inputs: stacking this over
    all agents (in a common frame) reproduces the stacked law.
    """
    m = None
    u = None
    for j, rel in neighbor_rel.items():
        rel = np.asarray(rel, dtype=float)
        if m is None:
            m = rel.shape[0]
            u = np.zeros(m)
        spec = specs[j]
        dist = float(np.linalg.norm(rel))
        e = dist - spec.d
        eta = e * (e + 2.0 * spec.d)
        rho_t = spec.perf.rho(t)
        eta_hat = modulated_error(eta, rho_t)
        sigma = transform(eta_hat, spec.b_bar, spec.b_underbar, edges=[(i, j)], time=t)
        gain = xi(eta_hat, rho_t, spec.b_bar, spec.b_underbar, edges=[(i, j)], time=t)
        u -= gains[j] * gain * sigma * rel
    if u is None:
        raise ValueError(f"agent {i} has no neighbors")
    return u


def maneuver_control(fw: Framework, specs, gains, leader: int,
                     v_d: VelocityCommand, t: float) -> np.ndarray:
    """Formation acquisition plus leader-pinned centroid velocity injection.

    Adds ``n * v_d(t)`` to the leader block only.  Because the acquisition
    term sums to zero across agents, the block average of the output equals
    ``v_d(t)`` identically, so the centroid moves at exactly the commanded
    velocity.
    """
    n, m = fw.n, fw.dimension
    if not (isinstance(leader, (int, np.integer)) and 0 <= leader < n):
        raise ValueError(f"leader must be a single agent index in 0..{n - 1}, got {leader!r}")
    u = ppc_control(fw, specs, gains, t)
    vd = np.asarray(v_d(t), dtype=float)
    if vd.shape != (m,):
        raise ValueError(f"v_d(t) must have shape ({m},), got {vd.shape}")
    u[leader * m:(leader + 1) * m] += n * vd
    return u


def conventional_control(fw: Framework, d, k: float) -> np.ndarray:
    """Plain gradient law ``-k R^T eta`` on the squared distance errors."""
    if not k > 0.0:
        raise ValueError(f"gain must be positive, got {k}")
    d = np.broadcast_to(np.asarray(d, dtype=float), (fw.graph.l,))
    rel = fw.relative_positions()
    dist = np.sqrt(np.einsum("km,km->k", rel, rel))
    e = dist - d
    eta = e * (e + 2.0 * d)
    return -k * rigidity_transpose_apply(fw, eta)


def expand_edge_weights(graph: RigidGraph, weights, m: int) -> np.ndarray:
    """Expand per-edge estimator weights to one weight per agent axis.

    Each agent axis receives the mean weight of the agent's incident edges
    (exactly the common weight when all are equal, the usual configuration).
    """
    w = np.broadcast_to(np.asarray(weights, dtype=float), (graph.l,))
    per_agent = np.zeros(graph.n)
    counts = np.zeros(graph.n)
    for k, (i, j) in enumerate(graph.edges):
        per_agent[i] += w[k]
        per_agent[j] += w[k]
        counts[i] += 1
        counts[j] += 1
    if np.any(counts == 0):
        raise ValueError("every agent must have at least one incident edge")
    return np.repeat(per_agent / counts, m)


def robust_conventional_control(fw: Framework, d, cfg: ControllerConfig,
                                dhat: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Conventional law with an adaptive disturbance-bound compensation term.

    Returns the control at the current state and the estimator state advanced
    by one step of the same length the plant uses.  The estimate enters as a
    per-axis saturation of the gradient direction; its update integrates the
    weighted absolute gradient with linear decay, so a nonnegative start stays
    nonnegative.
    """
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    n, m = fw.n, fw.dimension
    dhat = np.asarray(dhat, dtype=float)
    if dhat.shape != (n * m,):
        raise ValueError(f"dhat must have shape ({n * m},), got {dhat.shape}")
    d = np.broadcast_to(np.asarray(d, dtype=float), (fw.graph.l,))
    rel = fw.relative_positions()
    dist = np.sqrt(np.einsum("km,km->k", rel, rel))
    e = dist - d
    eta = e * (e + 2.0 * d)
    grad = cfg.k * rigidity_transpose_apply(fw, eta)
    u = -grad - dhat * np.tanh(dhat * grad / cfg.epsilon)

    w_axis = expand_edge_weights(fw.graph, cfg.weights, m)
    drive = w_axis * np.abs(grad)

    def rate(state):
        return drive - cfg.theta * state

    k1 = rate(dhat)
    k2 = rate(dhat + 0.5 * dt * k1)
    k3 = rate(dhat + 0.5 * dt * k2)
    k4 = rate(dhat + dt * k3)
    dhat_next = dhat + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return u, dhat_next
