"""Rigid-graph primitives.

A *framework* is an undirected graph together with an assignment of points in
2-D or 3-D space to its vertices.  This module provides the incidence matrix,
the edge (squared-length) function, the rigidity matrix (half the Jacobian of
the edge function with respect to the stacked positions), numerical rank tests
for infinitesimal and minimal rigidity, and a shape-discrepancy measure.

Conventions
-----------
Vertices are 0-based.  The stored edge order of :class:`RigidGraph` fixes the
row order of every stacked quantity produced here and downstream (error
vectors, bounds, trace columns).  Edge orientation for the incidence matrix is
"-1 at the first-listed vertex, +1 at the second"; the rigidity matrix itself
is orientation-independent.

All functions are pure and operate on immutable inputs, so they are safe for
concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FrameworkMismatch

#: Relative singular-value cutoff used by the numerical rank tests.
DEFAULT_RANK_TOL = 1e-9


@dataclass(frozen=True)
class RigidGraph:
    """Undirected graph with a fixed edge ordering.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : sequence of (int, int)
        Vertex pairs, 0-based, no self-loops, each unordered pair at most
        once.  The sequence order is significant and preserved.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"vertex count must be a positive integer, got {self.n!r}")
        norm = tuple((int(i), int(j)) for i, j in self.edges)
        object.__setattr__(self, "edges", norm)
        seen = set()
        for k, (i, j) in enumerate(norm):
            if i == j:
                raise ValueError(f"edge {k} is a self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge {k} = ({i}, {j}) references a vertex outside 0..{self.n - 1}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate undirected edge ({i}, {j})")
            seen.add(key)

    @property
    def l(self) -> int:
        """Edge count."""
        return len(self.edges)

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Neighbors of vertex ``i`` in stored edge order."""
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return tuple(out)

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        adj = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def minimally_rigid_edge_count(self, dimension: int) -> int:
        """Edge count of a minimally rigid graph on ``n`` vertices: 2n-3 or 3n-6."""
        if dimension == 2:
            return 2 * self.n - 3
        if dimension == 3:
            return 3 * self.n - 6
        raise ValueError(f"dimension must be 2 or 3, got {dimension}")


@dataclass(frozen=True)
class Framework:
    """A graph realized by vertex positions in 2-D or 3-D space."""

    graph: RigidGraph
    positions: np.ndarray

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim != 2:
            raise ValueError(f"positions must be a 2-D array, got shape {pos.shape}")
        n, m = pos.shape
        if n != self.graph.n:
            raise ValueError(f"got {n} positions for a graph with {self.graph.n} vertices")
        if m not in (2, 3):
            raise ValueError(f"dimension must be 2 or 3, got {m}")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    def relative_positions(self) -> np.ndarray:
        """Per-edge difference vectors ``q_i - q_j``, shape (l, m), stored edge order."""
        idx = np.asarray(self.graph.edges, dtype=int)
        if idx.size == 0:
            return np.zeros((0, self.dimension))
        return self.positions[idx[:, 0]] - self.positions[idx[:, 1]]


def incidence_matrix(graph: RigidGraph) -> np.ndarray:
    """Signed edge-vertex incidence matrix, shape (l, n).

    Row k for stored edge (i, j) holds -1 in column i and +1 in column j.
    For a connected graph the rows annihilate the all-ones vector.
    """
    H = np.zeros((graph.l, graph.n))
    for k, (i, j) in enumerate(graph.edges):
        H[k, i] = -1.0
        H[k, j] = 1.0
    return H


def edge_function(fw: Framework) -> np.ndarray:
    """Vector of squared edge lengths, shape (l,), in stored edge order.

    Invariant under rotation, translation, and reflection of all positions.
    """
    rel = fw.relative_positions()
    return np.einsum("km,km->k", rel, rel)


def rigidity_matrix(fw: Framework) -> np.ndarray:
    """Half the Jacobian of :func:`edge_function` w.r.t. stacked positions.

    Shape (l, m*n).  Row k for edge (i, j) carries the relative position
    ``q_i - q_j`` in column block i and its negative in column block j.
    Depends only on relative positions, so it is translation-invariant.
    """
    m = fw.dimension
    R = np.zeros((fw.graph.l, m * fw.n))
    rel = fw.relative_positions()
    for k, (i, j) in enumerate(fw.graph.edges):
        R[k, m * i:m * (i + 1)] = rel[k]
        R[k, m * j:m * (j + 1)] = -rel[k]
    return R


def rigidity_transpose_apply(fw: Framework, weights: np.ndarray) -> np.ndarray:
    """Product of the transposed rigidity matrix with a per-edge weight vector.

    Returns the stacked (m*n,) vector ``R(q)^T w`` without forming R; this is
    the scatter pattern every distance-based control law reduces to.
    """
    w = np.asarray(weights, dtype=float)
    if w.shape != (fw.graph.l,):
        raise ValueError(f"expected {fw.graph.l} edge weights, got shape {w.shape}")
    rel = fw.relative_positions()
    out = np.zeros((fw.n, fw.dimension))
    for k, (i, j) in enumerate(fw.graph.edges):
        contrib = w[k] * rel[k]
        out[i] += contrib
        out[j] -= contrib
    return out.reshape(-1)


def _numerical_rank(matrix: np.ndarray, rank_tol: float) -> int:
    sv = np.linalg.svd(matrix, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > rank_tol * sv[0]))


def is_infinitesimally_rigid(fw: Framework, rank_tol: float = DEFAULT_RANK_TOL) -> bool:
    """Rank test: the rigidity matrix must reach rank ``m*n - m(m+1)/2``.

    Requires n >= m + 1.  A degenerate framework (all points coincident)
    returns False rather than raising.
    """
    m = fw.dimension
    if fw.n < m + 1:
        raise ValueError(f"need at least {m + 1} vertices in {m}-D, got {fw.n}")
    target = m * fw.n - m * (m + 1) // 2
    return _numerical_rank(rigidity_matrix(fw), rank_tol) == target


def is_minimally_rigid(fw: Framework, rank_tol: float = DEFAULT_RANK_TOL) -> bool:
    """True iff the framework is infinitesimally rigid with exactly 2n-3 (2-D)
    or 3n-6 (3-D) edges, so that no single edge can be removed."""
    if fw.graph.l != fw.graph.minimally_rigid_edge_count(fw.dimension):
        return False
    return is_infinitesimally_rigid(fw, rank_tol)


def shape_discrepancy(fw_q: Framework, fw_p: Framework) -> float:
    """Sum over edges of squared differences of edge lengths.

    Zero iff the two frameworks have identical edge lengths (in particular for
    isometric copies).  Both frameworks must share the same graph.
    """
    if fw_q.graph != fw_p.graph:
        raise FrameworkMismatch("frameworks do not share the same graph (vertex count or edge list differs)")
    if fw_q.dimension != fw_p.dimension:
        raise FrameworkMismatch(f"frameworks live in different dimensions ({fw_q.dimension} vs {fw_p.dimension})")
    len_q = np.sqrt(edge_function(fw_q))
    len_p = np.sqrt(edge_function(fw_p))
    return float(np.sum((len_q - len_p) ** 2))


def grammian_min_eigenvalue(fw: Framework) -> float:
    """Smallest eigenvalue of R(q) R(q)^T.

    Strictly positive whenever the framework is minimally and infinitesimally
    rigid; numerically zero on degenerate (e.g. collinear) configurations.
    Scales quadratically when all positions are scaled.
    """
    R = rigidity_matrix(fw)
    return float(np.linalg.eigvalsh(R @ R.T)[0])
