"""Shared test helpers: random rigid frameworks and funnel scaffolding."""

import numpy as np
import pytest

from rigidform import EdgeSpec, Framework, PerformanceFunction, RigidGraph


def henneberg_graph(rng, n, m):
    """Random minimally rigid graph via vertex additions of degree m.

    Start from a complete graph on m vertices and attach each new vertex to m
    distinct existing ones; the edge count lands exactly on 2n-3 (2-D) /
    3n-6 (3-D) and generic realizations are infinitesimally rigid.
    """
    assert n >= m + 1
    edges = [(i, j) for i in range(m) for j in range(i + 1, m)]
    if m == 2:
        edges = [(0, 1)]
    for v in range(m, n):
        picks = rng.choice(v, size=m, replace=False)
        edges.extend((int(p), v) for p in sorted(picks))
    return RigidGraph(n, tuple(edges))


def random_rigid_framework(rng, n=None, m=2, spread=2.0):
    """Random framework on a Henneberg graph with generic positions."""
    if n is None:
        n = int(rng.integers(m + 1, m + 6))
    graph = henneberg_graph(rng, n, m)
    while True:
        pos = rng.uniform(-spread, spread, size=(n, m))
        fw = Framework(graph, pos)
        from rigidform import is_minimally_rigid
        if is_minimally_rigid(fw):
            return fw


def random_rotation(rng, m):
    """Haar-ish random proper rotation matrix."""
    a = rng.normal(size=(m, m))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def specs_for(fw, d=None, mu=0.12, mu_bar=0.3, mu_underbar=0.3,
              rho_inf=0.03, decay=0.6):
    """EdgeSpecs built from a framework's own initial errors.

    ``d`` defaults to 90% of the current edge lengths, so the initial state
    is strictly inside the funnel by construction.  Safety and connectivity
    limits scale with each desired distance to stay feasible for any edge.
    """
    from rigidform import distance_errors
    rel = fw.relative_positions()
    lengths = np.sqrt(np.einsum("km,km->k", rel, rel))
    if d is None:
        d = 0.9 * lengths
    d = np.broadcast_to(np.asarray(d, dtype=float), (fw.graph.l,))
    e0, _ = distance_errors(fw, d)
    perf = PerformanceFunction(rho0=1.0, rho_inf=rho_inf, decay=decay)
    specs = []
    for k in range(fw.graph.l):
        r_s = 0.2 * d[k]
        r_c = 2.0 * d[k] + 5.0
        specs.append(EdgeSpec.from_initial_error(
            e0[k], d[k], r_s, r_c, mu,
            min(mu_bar, 0.9 * (r_c - d[k])), min(mu_underbar, 0.9 * (d[k] - r_s)), perf))
    return tuple(specs), d


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
