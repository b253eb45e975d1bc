"""Graph substrate: node/edge storage, Erdős–Rényi seeding, and growth by
redirection.

Edges are directed. The ER seed is canonicalized low-id -> high-id; grown
nodes always point new -> attachment target, so the edge set never contains a
reciprocal pair or a self-loop.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, IntegrityError
from .rng import make_rng

SEED = "seed"
GROWN = "grown"


@dataclass
class TumorGraph:
    """Directed graph of cell nodes with per-node origin marks.

    Single-writer: grow_gnr requires exclusive access; density/snapshot are
    read-only and may run concurrently.
    """

    out_adj: list[list[int]] = field(default_factory=list)
    in_adj: list[list[int]] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)
    origins: list[str] = field(default_factory=list)

    @property
    def node_count(self) -> int:
        return len(self.out_adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def add_node(self, origin: str = SEED) -> int:
        self.out_adj.append([])
        self.in_adj.append([])
        self.origins.append(origin)
        return len(self.out_adj) - 1

    def add_edge(self, src: int, dst: int) -> None:
        if src == dst:
            raise IntegrityError(f"self-loop on node {src}")
        n = self.node_count
        if not (0 <= src < n and 0 <= dst < n):
            raise IntegrityError(f"edge ({src}, {dst}) has an endpoint outside 0..{n - 1}")
        self.out_adj[src].append(dst)
        self.in_adj[dst].append(src)
        self.edges.append((src, dst))

    def undirected_neighbors(self, node: int) -> list[int]:
        # out- and in-neighbor lists are disjoint: ER edges point low->high
        # and grown edges leave a brand-new node, so no reciprocal pairs exist.
        return self.out_adj[node] + self.in_adj[node]

    def undirected_degree(self, node: int) -> int:
        return len(self.out_adj[node]) + len(self.in_adj[node])


def generate_er(n: int, p_edge: float, seed) -> TumorGraph:
    """Erdős–Rényi G(n, p) seed graph.

    Each unordered pair gets an edge independently with probability p_edge,
    stored as a single directed edge low-id -> high-id. All nodes are marked
    as seed nodes.
    """
    if n < 0:
        raise ConfigError("n must be >= 0", field="n")
    if not (0.0 <= p_edge <= 1.0):
        raise ConfigError("p_edge must be in [0, 1]", field="p_edge")
    rng = make_rng(seed)
    g = TumorGraph()
    for _ in range(n):
        g.add_node(SEED)
    if n >= 2:
        src, dst = np.triu_indices(n, k=1)
        keep = rng.random(src.shape[0]) < p_edge
        for i, j in zip(src[keep].tolist(), dst[keep].tolist()):
            g.add_edge(i, j)
    return g


def grow_gnr(graph: TumorGraph, n_new: int, p_redirect: float, seed) -> TumorGraph:
    """Grow the graph by redirection: n_new nodes, one out-edge each.

    Per new node: pick a target uniformly among existing nodes; with
    probability p_redirect redirect to a uniformly chosen out-neighbor of the
    target (kept as-is when the target has none); add edge new -> chosen.
    """
    if graph.node_count == 0:
        raise ConfigError("cannot grow an empty graph: no attachment target")
    if not (0.0 <= p_redirect <= 1.0):
        raise ConfigError("p_redirect must be in [0, 1]", field="p_redirect")
    rng = make_rng(seed)
    for _ in range(n_new):
        target = int(rng.integers(graph.node_count))
        if rng.random() < p_redirect:
            outs = graph.out_adj[target]
            if outs:
                target = outs[int(rng.integers(len(outs)))]
        v = graph.add_node(GROWN)
        graph.add_edge(v, target)
    return graph


def density(graph: TumorGraph) -> float:
    """Directed density m / (n (n-1)); 0 for graphs with fewer than 2 nodes."""
    n = graph.node_count
    if n <= 1:
        return 0.0
    return graph.edge_count / (n * (n - 1))


def snapshot(graph: TumorGraph, states) -> dict:
    """Node-link document for serialization; see load_snapshot for the inverse.

    `states` maps every node id to a state carrying a lowercase string value.
    """
    if len(states) != graph.node_count:
        raise IntegrityError(
            f"state map covers {len(states)} nodes, graph has {graph.node_count}"
        )
    return {
        "node_count": graph.node_count,
        "nodes": [
            {"id": i, "state": _state_str(states[i]), "origin": graph.origins[i]}
            for i in range(graph.node_count)
        ],
        "links": [{"src": s, "dst": d} for s, d in graph.edges],
    }


def _state_str(state) -> str:
    return state.value if hasattr(state, "value") else str(state)


def snapshot_json(doc: dict) -> str:
    """Canonical single-line rendering; byte-stable for equal documents."""
    return json.dumps(doc, separators=(",", ":"), sort_keys=True)


def load_snapshot(doc: dict) -> tuple[TumorGraph, list[str]]:
    """Rebuild (graph, state strings) from a node-link document."""
    nodes = sorted(doc["nodes"], key=lambda e: e["id"])
    if [e["id"] for e in nodes] != list(range(doc["node_count"])):
        raise IntegrityError("node ids are not dense 0..node_count-1")
    g = TumorGraph()
    states = []
    for entry in nodes:
        g.add_node(entry["origin"])
        states.append(entry["state"])
    for link in doc["links"]:
        g.add_edge(link["src"], link["dst"])
    return g, states
