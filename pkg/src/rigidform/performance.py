"""Prescribed-performance machinery.

Everything needed to wrap a squared distance error in a shrinking funnel:
exponentially decaying performance functions, distributed selection of the
initial error bounds from local geometry, conversion of those bounds into the
funnel half-widths, time-varying bounds on the plain (non-squared) error, the
modulated error, and the logarithmic error transformation with its gain.

The transformation is only defined strictly inside the open funnel interval;
evaluating it on or beyond the boundary raises
:class:`~rigidform.errors.ContainmentViolation` (never silently clamps), which
is the runtime signal that containment was breached, e.g. by a too-coarse
integration step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContainmentViolation

#: Absolute distance from the funnel boundary below which inputs are rejected.
BOUNDARY_GUARD = 1e-12

#: Permissive default for the aggregate initial-bound budget: the check is
#: reported, not enforced, unless the caller configures a finite budget.
DEFAULT_RIGIDITY_BUDGET = 1e6


@dataclass(frozen=True)
class PerformanceFunction:
    """Exponentially decaying envelope ``(rho0 - rho_inf) * exp(-decay*t) + rho_inf``.

    Strictly decreasing from ``rho0`` to the positive asymptote ``rho_inf``.
    """

    rho0: float
    rho_inf: float
    decay: float

    def __post_init__(self):
        if not (self.rho0 > self.rho_inf > 0.0):
            raise ValueError(f"need rho0 > rho_inf > 0, got rho0={self.rho0}, rho_inf={self.rho_inf}")
        if not self.decay > 0.0:
            raise ValueError(f"decay rate must be positive, got {self.decay}")

    def rho(self, t):
        return (self.rho0 - self.rho_inf) * np.exp(-self.decay * np.asarray(t, dtype=float)) + self.rho_inf

    def rho_dot(self, t):
        return -self.decay * (self.rho0 - self.rho_inf) * np.exp(-self.decay * np.asarray(t, dtype=float))


def select_initial_bounds(e0: float, d: float, r_s: float, r_c: float,
                          mu: float, mu_bar: float, mu_underbar: float) -> tuple[float, float]:
    """Distributed selection of the initial error bounds for one edge.

    Parameters
    ----------
    e0 : float
        Initial distance error (actual distance minus desired distance).
    d : float
        Desired distance.
    r_s, r_c : float
        Combined collision and connectivity limits for the edge: the sum of
        the two body radii, and the smaller of the two (sensing radius +
        other body radius) combinations.
    mu : float
        Slack added on the side binding the initial error.
    mu_bar, mu_underbar : float
        Robustness constants clipping the non-binding side; must satisfy
        ``0 < mu_bar <= r_c - d`` and ``0 < mu_underbar <= d - r_s``.

    Returns
    -------
    (e0_bar, e0_underbar)
        Positive bounds guaranteeing ``-e0_underbar < e0 < e0_bar``,
        ``e0_bar <= r_c - d`` and ``e0_underbar <= d - r_s``.
    """
    if not d > 0.0:
        raise ValueError(f"desired distance must be positive, got {d}")
    if not (r_s < d < r_c):
        raise ValueError(f"infeasible edge: need r_s < d < r_c, got r_s={r_s}, d={d}, r_c={r_c}")
    if not mu > 0.0:
        raise ValueError(f"slack mu must be positive, got {mu}")
    if not (0.0 < mu_bar <= r_c - d):
        raise ValueError(f"need 0 < mu_bar <= r_c - d = {r_c - d}, got {mu_bar}")
    if not (0.0 < mu_underbar <= d - r_s):
        raise ValueError(f"need 0 < mu_underbar <= d - r_s = {d - r_s}, got {mu_underbar}")
    if e0 <= -d:
        raise ValueError(f"initial error {e0} <= -d = {-d}: agents overlap at t=0")
    # the selection can only contain errors of edges that start collision-free
    # and connected
    if e0 <= r_s - d:
        raise ValueError(f"initial error {e0} <= r_s - d = {r_s - d}: edge starts in collision")
    if e0 >= r_c - d:
        raise ValueError(f"initial error {e0} >= r_c - d = {r_c - d}: edge starts disconnected")

    slack = abs(e0) + mu
    if e0 >= 0.0:
        e0_bar = min(slack, r_c - d)
        e0_underbar = min(slack, mu_underbar)
    else:
        e0_bar = min(slack, mu_bar)
        e0_underbar = min(slack, d - r_s)
    # Both minima keep mu of headroom on the binding side, so containment
    # holds by construction; assert it to catch configuration regressions.
    if not (-e0_underbar < e0 < e0_bar):
        raise AssertionError(f"bound selection failed to contain e0={e0}: ({-e0_underbar}, {e0_bar})")
    return e0_bar, e0_underbar


def bounds_to_b(e0_bar: float, e0_underbar: float, d: float, rho0: float = 1.0) -> tuple[float, float]:
    """Funnel half-widths reproducing the given initial error bounds.

    ``b_bar = (e0_bar^2 + 2 d e0_bar) / rho0`` and
    ``b_underbar = (2 d e0_underbar - e0_underbar^2) / rho0``; both strictly
    positive for valid inputs.  Requires ``0 < e0_underbar <= d`` (beyond d
    the lower mapping stops being monotone, which would indicate a bound
    selection bug upstream).
    """
    if not rho0 > 0.0:
        raise ValueError(f"rho0 must be positive, got {rho0}")
    if e0_bar < 0.0:
        raise ValueError(f"e0_bar must be nonnegative, got {e0_bar}")
    if not (0.0 <= e0_underbar <= d):
        raise ValueError(f"need 0 <= e0_underbar <= d = {d}, got {e0_underbar}")
    b_bar = (e0_bar ** 2 + 2.0 * d * e0_bar) / rho0
    b_underbar = (2.0 * d * e0_underbar - e0_underbar ** 2) / rho0
    return b_bar, b_underbar


@dataclass(frozen=True)
class EdgeSpec:
    """Per-edge formation data: desired distance, safety limits, funnel parameters."""

    d: float
    r_s: float
    r_c: float
    mu_bar: float
    mu_underbar: float
    perf: PerformanceFunction
    e0_bar: float
    e0_underbar: float
    b_bar: float
    b_underbar: float

    def __post_init__(self):
        if not (self.r_s < self.d < self.r_c):
            raise ValueError(f"infeasible edge: r_s={self.r_s}, d={self.d}, r_c={self.r_c}")
        if not (0.0 < self.mu_bar <= self.r_c - self.d):
            raise ValueError(f"mu_bar={self.mu_bar} outside (0, r_c - d]")
        if not (0.0 < self.mu_underbar <= self.d - self.r_s):
            raise ValueError(f"mu_underbar={self.mu_underbar} outside (0, d - r_s]")
        if not (0.0 < self.e0_underbar <= self.d):
            raise ValueError(f"e0_underbar={self.e0_underbar} outside (0, d]")
        if not self.e0_bar > 0.0:
            raise ValueError(f"e0_bar must be positive, got {self.e0_bar}")
        if not (self.b_bar > 0.0 and self.b_underbar > 0.0):
            raise ValueError("funnel half-widths must be positive")
        bb, bu = bounds_to_b(self.e0_bar, self.e0_underbar, self.d, self.perf.rho0)
        if not (np.isclose(bb, self.b_bar, rtol=1e-9) and np.isclose(bu, self.b_underbar, rtol=1e-9)):
            raise ValueError("funnel half-widths inconsistent with the stored initial bounds")

    @classmethod
    def from_initial_error(cls, e0: float, d: float, r_s: float, r_c: float,
                           mu: float, mu_bar: float, mu_underbar: float,
                           perf: PerformanceFunction) -> "EdgeSpec":
        """Run the bound selection and half-width conversion for one edge."""
        e0_bar, e0_underbar = select_initial_bounds(e0, d, r_s, r_c, mu, mu_bar, mu_underbar)
        b_bar, b_underbar = bounds_to_b(e0_bar, e0_underbar, d, perf.rho0)
        return cls(d=d, r_s=r_s, r_c=r_c, mu_bar=mu_bar, mu_underbar=mu_underbar,
                   perf=perf, e0_bar=e0_bar, e0_underbar=e0_underbar,
                   b_bar=b_bar, b_underbar=b_underbar)


def e_bounds_at(spec: EdgeSpec, t) -> tuple[np.ndarray, np.ndarray]:
    """Time-varying bounds on the plain distance error.

    Returns ``(e_bar_t, e_underbar_t)``, both positive and nonincreasing,
    with strictly positive limits as t grows.  Containment of the squared
    error in the funnel is equivalent to ``-e_underbar_t < e < e_bar_t``.
    """
    rho_t = spec.perf.rho(t)
    d2 = spec.d ** 2
    upper = -spec.d + np.sqrt(d2 + spec.b_bar * rho_t)
    arg = d2 - spec.b_underbar * rho_t
    if np.any(arg < 0.0):
        raise ValueError("lower-bound root argument negative: funnel configuration invalid")
    lower = spec.d - np.sqrt(arg)
    return upper, lower


def modulated_error(eta, rho_t):
    """Squared distance error divided by the performance function value."""
    rho_arr = np.asarray(rho_t, dtype=float)
    if np.any(rho_arr <= 0.0):
        raise ValueError("performance function value must be positive")
    return np.asarray(eta, dtype=float) / rho_arr


def check_containment(eta_hat, b_bar, b_underbar, edges=None, time=None):
    """Raise :class:`ContainmentViolation` unless strictly inside the funnel.

    Inputs may be scalars or aligned arrays; ``edges`` optionally names the
    edge carried by the exception.  Rejection (rather than clamping) is the
    deliberate breach signal: clamping would mask a real constraint violation.
    """
    eh = np.atleast_1d(np.asarray(eta_hat, dtype=float))
    bb = np.broadcast_to(np.asarray(b_bar, dtype=float), eh.shape)
    bu = np.broadcast_to(np.asarray(b_underbar, dtype=float), eh.shape)
    over = eh - (bb - BOUNDARY_GUARD)
    under = (-bu + BOUNDARY_GUARD) - eh
    worst = np.maximum(over, under)
    k = int(np.argmax(worst))
    if worst[k] >= 0.0:
        edge = None
        if edges is not None:
            edge = list(edges)[k]
        raise ContainmentViolation(eh[k], -bu[k], bb[k], edge=edge, time=time)


def transform(eta_hat, b_bar, b_underbar, edges=None, time=None):
    """Logarithmic bijection from the open funnel interval onto the real line.

    Strictly increasing, zero at zero, diverging at the interval endpoints.
    Out-of-domain input raises :class:`ContainmentViolation`.
    """
    check_containment(eta_hat, b_bar, b_underbar, edges=edges, time=time)
    eh = np.asarray(eta_hat, dtype=float)
    bb = np.asarray(b_bar, dtype=float)
    bu = np.asarray(b_underbar, dtype=float)
    return 0.5 * np.log((bb * eh + bb * bu) / (bb * bu - bu * eh))


def transform_inverse(sigma, b_bar, b_underbar):
    """Inverse of :func:`transform`: maps the real line back into the funnel."""
    s = np.asarray(sigma, dtype=float)
    bb = np.asarray(b_bar, dtype=float)
    bu = np.asarray(b_underbar, dtype=float)
    g = np.exp(2.0 * s)
    return bb * bu * (g - 1.0) / (bb + bu * g)


def xi(eta_hat, rho_t, b_bar, b_underbar, edges=None, time=None):
    """Funnel gain of the error transformation.

    Equals ``(1/rho) * (1/(eta_hat + b_underbar) - 1/(eta_hat - b_bar))``;
    strictly positive inside the funnel and equal to ``2/rho`` times the
    derivative of :func:`transform`.  Out-of-domain input raises
    :class:`ContainmentViolation`.
    """
    check_containment(eta_hat, b_bar, b_underbar, edges=edges, time=time)
    rho_arr = np.asarray(rho_t, dtype=float)
    if np.any(rho_arr <= 0.0):
        raise ValueError("performance function value must be positive")
    eh = np.asarray(eta_hat, dtype=float)
    bb = np.asarray(b_bar, dtype=float)
    bu = np.asarray(b_underbar, dtype=float)
    return (1.0 / rho_arr) * (1.0 / (eh + bu) - 1.0 / (eh - bb))


@dataclass(frozen=True)
class AggregateBoundReport:
    """Outcome of the aggregate initial-bound budget check."""

    total: float
    budget: float
    within: bool


def omega_I_check(specs, budget: float = DEFAULT_RIGIDITY_BUDGET) -> AggregateBoundReport:
    """Sum of the larger initial bound over all edges, against a budget.

    Keeping this aggregate small enough guarantees the moving shape stays in
    the rigidity-preserving neighborhood of the target.  No constructive
    recipe exists for the true threshold, so the default budget is a
    permissive sentinel and the result is meant to be reported; callers that
    configure a finite budget may enforce ``within``.
    """
    total = float(sum(max(abs(s.e0_underbar), abs(s.e0_bar)) for s in specs))
    return AggregateBoundReport(total=total, budget=float(budget), within=total <= budget)
