"""Independent brute-force oracles used only by the test suite.

These deliberately share no code with the main implementations: betweenness
enumerates every shortest path explicitly, closeness distances come from
Floyd-Warshall, and the growth probability is estimated by simulating the
underlying division coin-flips.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from oncograph.graph import TumorGraph


def undirected_adj(graph: TumorGraph) -> list[set[int]]:
    adj = [set() for _ in range(graph.node_count)]
    for s, d in graph.edges:
        adj[s].add(d)
        adj[d].add(s)
    return adj


def bfs_dist(adj: list[set[int]], src: int) -> list[float]:
    dist = [float("inf")] * len(adj)
    dist[src] = 0
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] == float("inf"):
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def _all_shortest_paths(adj, dist, src, dst):
    """Enumerate every shortest src->dst path by walking the BFS DAG."""
    paths = []
    stack = [(src, [src])]
    while stack:
        v, path = stack.pop()
        if v == dst:
            paths.append(path)
            continue
        for w in adj[v]:
            if dist[w] == dist[v] + 1 and dist[w] <= dist[dst]:
                stack.append((w, path + [w]))
    return paths


def brute_betweenness(graph: TumorGraph, normalized: bool = True) -> np.ndarray:
    """Naive all-paths enumerator with shortest-path-count splitting."""
    n = graph.node_count
    raw = np.zeros(n)
    adj = undirected_adj(graph)
    for s in range(n):
        dist = bfs_dist(adj, s)
        for t in range(s + 1, n):
            if dist[t] == float("inf"):
                continue
            paths = _all_shortest_paths(adj, dist, s, t)
            share = 1.0 / len(paths)
            for path in paths:
                for v in path[1:-1]:
                    raw[v] += share
    if normalized and n > 2:
        raw = raw / ((n - 1) * (n - 2) / 2.0)
    return raw


def brute_closeness(graph: TumorGraph) -> np.ndarray:
    """Floyd-Warshall distances, then the component-scaled closeness."""
    n = graph.node_count
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for s, d in graph.edges:
        dist[s, d] = dist[d, s] = 1.0
    for k in range(n):
        dist = np.minimum(dist, dist[:, k : k + 1] + dist[k : k + 1, :])
    values = np.zeros(n)
    for v in range(n):
        finite = np.isfinite(dist[v])
        r = int(finite.sum())
        if r <= 1:
            continue
        total = dist[v][finite].sum()
        values[v] = ((r - 1) / total) * ((r - 1) / (n - 1))
    return values


def mc_growth_probability(
    u: float, d: int, k: int, N: int, trials: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Monte Carlo estimate of the driver-mutation growth probability.

    Simulates N cells x k pathways x d Bernoulli(u) divisions per trial (the
    d coin flips per pathway are aggregated as one binomial draw). Returns
    (estimate, standard error).
    """
    hits = 0
    chunk = max(1, min(trials, 200_000 // max(1, N * k)))
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        mutations = rng.binomial(d, u, size=(m, N, k))
        transformed = (mutations > 0).all(axis=2).any(axis=1)
        hits += int(transformed.sum())
        done += m
    p_hat = hits / trials
    se = float(np.sqrt(max(p_hat * (1 - p_hat), 1e-12) / trials))
    return p_hat, se


def random_er_tumor_graph(n: int, p: float, rng: np.random.Generator) -> TumorGraph:
    """Small random graph built straight from pair coin-flips (independent of
    the package generator)."""
    g = TumorGraph()
    for _ in range(n):
        g.add_node()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                g.add_edge(i, j)
    return g


def is_connected(graph: TumorGraph) -> bool:
    if graph.node_count == 0:
        return True
    adj = undirected_adj(graph)
    return sum(d < float("inf") for d in bfs_dist(adj, 0)) == graph.node_count
