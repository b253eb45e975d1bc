"""Network analysis over simulation outputs: betweenness/closeness
centrality on the undirected view, derived-cell profiling, and population
metrics.

The betweenness main path is Brandes' pair-dependency accumulation compiled
with numba; the naive all-paths enumerator used to cross-check it lives in
the test suite, not here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .dynamics import CellState, ModelState, dead_inflamed_ratio, state_counts
from .errors import ProfileUndefinedError
from .graph import TumorGraph, density


@dataclass
class CentralityMap:
    """Per-node centrality values plus the normalization applied."""

    values: np.ndarray
    normalized: bool

    def __getitem__(self, node: int) -> float:
        return float(self.values[node])

    def as_dict(self) -> dict[int, float]:
        return {i: float(v) for i, v in enumerate(self.values)}


@dataclass(frozen=True)
class DerivedCellProfile:
    """Argmax-betweenness readout of one growth pattern: the tied derived
    cell ids (ascending) and the maximal normalized betweenness value."""

    derived_cell_ids: tuple[int, ...]
    essential_genomic_profile: float
    mean_genomic_profile: float
    pattern_index: int


def undirected_csr(graph: TumorGraph) -> tuple[np.ndarray, np.ndarray]:
    """CSR (indptr, indices) of the undirected view."""
    n = graph.node_count
    indptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        indptr[v + 1] = indptr[v] + graph.undirected_degree(v)
    indices = np.empty(indptr[-1], dtype=np.int64)
    fill = indptr[:-1].copy()
    for s, d in graph.edges:
        indices[fill[s]] = d
        fill[s] += 1
        indices[fill[d]] = s
        fill[d] += 1
    return indptr, indices


@njit(cache=True)
def _brandes(indptr, indices, n):  # pragma: no cover - exercised via betweenness
    centrality = np.zeros(n, dtype=np.float64)
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n, dtype=np.float64)
    delta = np.empty(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[:] = -1
        sigma[:] = 0.0
        delta[:] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v]
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        for i in range(tail - 1, 0, -1):
            w = order[i]
            dw = dist[w]
            coeff = (1.0 + delta[w]) / sigma[w]
            for ei in range(indptr[w], indptr[w + 1]):
                v = indices[ei]
                if dist[v] == dw - 1:
                    delta[v] += sigma[v] * coeff
        for v in range(n):
            if v != s:
                centrality[v] += delta[v]
    return centrality


def betweenness(graph: TumorGraph, normalized: bool = True) -> CentralityMap:
    """Freeman betweenness on the undirected view with shortest-path-count
    splitting for ties; pairs in different components contribute nothing.

    Raw values count each unordered pair once; normalization divides by
    (n-1)(n-2)/2. Graphs with fewer than 3 nodes are all-zero.
    """
    n = graph.node_count
    if n < 3:
        return CentralityMap(np.zeros(n), normalized)
    indptr, indices = undirected_csr(graph)
    raw = _brandes(indptr, indices, n) / 2.0  # each pair visited from both ends
    if normalized:
        raw = raw / ((n - 1) * (n - 2) / 2.0)
    return CentralityMap(raw, normalized)


def closeness(graph: TumorGraph) -> CentralityMap:
    """Closeness (n_r - 1)/sum(d) on the undirected view, scaled by the
    component factor (n_r - 1)/(n - 1); isolated nodes get 0."""
    n = graph.node_count
    values = np.zeros(n)
    if n <= 1:
        return CentralityMap(values, True)
    rows = np.empty(2 * graph.edge_count, dtype=np.int64)
    cols = np.empty(2 * graph.edge_count, dtype=np.int64)
    for i, (s, d) in enumerate(graph.edges):
        rows[2 * i], cols[2 * i] = s, d
        rows[2 * i + 1], cols[2 * i + 1] = d, s
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    dist = shortest_path(adj, method="D", unweighted=True, directed=False)
    finite = np.isfinite(dist)
    reachable = finite.sum(axis=1)  # includes the node itself
    total = np.where(finite, dist, 0.0).sum(axis=1)
    mask = reachable > 1
    values[mask] = ((reachable[mask] - 1) / total[mask]) * (
        (reachable[mask] - 1) / (n - 1)
    )
    return CentralityMap(values, True)


def derived_cell_profile(graph: TumorGraph, pattern_index: int) -> DerivedCellProfile:
    """Profile a growth pattern: all argmax-betweenness node ids (exact float
    tie set, ascending) and the maximal value."""
    if graph.node_count < 3:
        raise ProfileUndefinedError(
            f"profile needs >= 3 nodes, graph has {graph.node_count}"
        )
    cmap = betweenness(graph)
    top = cmap.values.max()
    ids = tuple(int(i) for i in np.flatnonzero(cmap.values == top))
    return DerivedCellProfile(
        derived_cell_ids=ids,
        essential_genomic_profile=float(top),
        mean_genomic_profile=float(cmap.values.mean()),
        pattern_index=pattern_index,
    )


@dataclass
class PopulationMetrics:
    n_nodes: int
    counts: dict[CellState, int]
    density: float
    dead_inflamed_ratio: float | None


def population_metrics(model: ModelState) -> PopulationMetrics:
    """Current per-state counts, node count (volume proxy), density, and the
    dead/inflamed ratio (None when no cell is inflamed)."""
    counts = state_counts(model.states)
    return PopulationMetrics(
        n_nodes=model.graph.node_count,
        counts=counts,
        density=density(model.graph),
        dead_inflamed_ratio=dead_inflamed_ratio(
            counts[CellState.DEAD], counts[CellState.INFLAMED]
        ),
    )
