"""Multiscale dynamics: driver-mutation growth probability, the
angiogenic-switch probabilistic automaton over cell states, per-step agent
activation, and the coupling that grows the graph as the population evolves.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigError
from .graph import GROWN, TumorGraph, generate_er, grow_gnr, snapshot
from .rng import make_rng


class CellState(str, Enum):
    NORMAL = "normal"
    PROLIFERATIVE = "proliferative"
    INFLAMED = "inflamed"
    QUIESCENT = "quiescent"
    METASTATIC = "metastatic"
    DEAD = "dead"


#: states with no outgoing transitions
ABSORBING = frozenset({CellState.METASTATIC, CellState.DEAD})

#: alphabet labels: each transition is driven by exactly one switch factor
ANGIOPREVENTION = "angioprevention"
ANGIOGENESIS = "angiogenesis"
QUIESCENT_FACTOR = "quiescent"
ALPHABET = (ANGIOPREVENTION, ANGIOGENESIS, QUIESCENT_FACTOR)


@dataclass(frozen=True)
class DriverParams:
    """Cancer-driver parameters: mutation rate u per division, d divisions,
    k rate-limiting pathway driver mutations, N stem cells."""

    u: float
    d: int
    k: int
    N: int

    def validate(self) -> "DriverParams":
        if not (0.0 <= self.u <= 1.0):
            raise ConfigError("u must be in [0, 1]", field="driver.u")
        if self.d < 0:
            raise ConfigError("d must be >= 0", field="driver.d")
        if self.k < 1:
            raise ConfigError("k must be >= 1", field="driver.k")
        if self.N < 1:
            raise ConfigError("N must be >= 1", field="driver.N")
        return self


@dataclass(frozen=True)
class AngiogenicSwitch:
    """The three transition-probability factors, each in [0, 1]."""

    angioprevention: float
    angiogenesis: float
    quiescent: float

    def validate(self) -> "AngiogenicSwitch":
        for name in ("angioprevention", "angiogenesis", "quiescent"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ConfigError(f"{name} must be in [0, 1]", field=f"switch.{name}")
        return self

    def factor(self, label: str) -> float:
        return getattr(self, label)


@dataclass(frozen=True)
class PfaDefinition:
    """Probabilistic automaton: initial distribution I, per-state final
    probability F, and labeled transition probabilities P with
    F(s) + sum_{s',b} P(s,b,s') = 1 for every state."""

    states: tuple[CellState, ...]
    alphabet: tuple[str, ...]
    initial: dict[CellState, float]
    final: dict[CellState, float]
    transitions: dict[tuple[CellState, str, CellState], float]

    def row(self, state: CellState) -> dict[tuple[str, CellState], float]:
        return {
            (b, dst): p
            for (src, b, dst), p in self.transitions.items()
            if src == state
        }


def growth_probability(params: DriverParams) -> float:
    """Probability of tumor growth from the driver-mutation model:
    p = 1 - (1 - (1 - (1-u)^d)^k)^N, clamped only against float rounding."""
    params.validate()
    pathway = 1.0 - (1.0 - params.u) ** params.d
    cell = pathway**params.k
    p = 1.0 - (1.0 - cell) ** params.N
    return min(1.0, max(0.0, p))


def transition_trial(factor: float, rng: np.random.Generator) -> bool:
    """One threshold trial: draw K ~ Uniform[0,1) and fire iff factor > K."""
    return factor > rng.random()


def cascade_transition(
    state: CellState,
    switch: AngiogenicSwitch,
    f_inf: float,
    rng: np.random.Generator,
) -> CellState:
    """Per-state ordered trial cascade; the first successful trial fires,
    otherwise the agent keeps its state.

    f_inf is the local neighbor-inflammation fraction; it amplifies the
    proliferation entry from Normal and gates metastasis from Inflamed.
    """
    a_p = switch.angioprevention
    a_g = switch.angiogenesis
    q = switch.quiescent
    if state is CellState.NORMAL:
        if transition_trial(min(1.0, a_g * (1.0 + f_inf)), rng):
            return CellState.PROLIFERATIVE
        if transition_trial(q, rng):
            return CellState.QUIESCENT
        return state
    if state is CellState.PROLIFERATIVE:
        if transition_trial(a_g, rng):
            return CellState.INFLAMED
        if transition_trial(a_p, rng):
            return CellState.NORMAL
        return state
    if state is CellState.INFLAMED:
        if transition_trial(q, rng):
            return CellState.QUIESCENT
        if transition_trial(a_p, rng):
            return CellState.DEAD
        if transition_trial(a_g * f_inf, rng):
            return CellState.METASTATIC
        return state
    if state is CellState.QUIESCENT:
        # reactivation needs local angiogenic drive; without inflamed
        # neighbors a quiescent cell stays put
        if transition_trial(a_g * f_inf, rng):
            return CellState.NORMAL
        return state
    return state  # Metastatic / Dead are absorbing


def build_pfa(switch: AngiogenicSwitch) -> PfaDefinition:
    """Compile the trial cascade (neighbor term 0) into an automaton whose
    stay mass is folded into the per-state final probability."""
    switch.validate()
    a_p = switch.angioprevention
    a_g = switch.angiogenesis
    q = switch.quiescent
    N, P, I, Q, M, D = (
        CellState.NORMAL,
        CellState.PROLIFERATIVE,
        CellState.INFLAMED,
        CellState.QUIESCENT,
        CellState.METASTATIC,
        CellState.DEAD,
    )
    transitions = {
        (N, ANGIOGENESIS, P): a_g,
        (N, QUIESCENT_FACTOR, Q): (1.0 - a_g) * q,
        (P, ANGIOGENESIS, I): a_g,
        (P, ANGIOPREVENTION, N): (1.0 - a_g) * a_p,
        (I, QUIESCENT_FACTOR, Q): q,
        (I, ANGIOPREVENTION, D): (1.0 - q) * a_p,
        (I, ANGIOGENESIS, M): 0.0,  # metastasis needs inflamed neighbors
        (Q, ANGIOGENESIS, N): 0.0,  # reactivation needs inflamed neighbors
    }
    final = {
        N: (1.0 - a_g) * (1.0 - q),
        P: (1.0 - a_g) * (1.0 - a_p),
        I: (1.0 - q) * (1.0 - a_p),
        Q: 1.0,
        M: 1.0,
        D: 1.0,
    }
    initial = {s: 0.0 for s in CellState}
    initial[N] = 1.0
    return PfaDefinition(
        states=tuple(CellState),
        alphabet=ALPHABET,
        initial=initial,
        final=final,
        transitions=transitions,
    )


def sample_initial_state(pfa: PfaDefinition, rng: np.random.Generator) -> CellState:
    """Draw a state from the initial distribution (no draw is consumed when
    the distribution is a point mass)."""
    support = [(s, p) for s, p in pfa.initial.items() if p > 0.0]
    if len(support) == 1:
        return support[0][0]
    u = rng.random()
    acc = 0.0
    for s, p in support:
        acc += p
        if u < acc:
            return s
    return support[-1][0]


def neighbor_inflammation(graph: TumorGraph, node: int, states) -> float:
    """Fraction of undirected neighbors that are inflamed or metastatic."""
    neigh = graph.undirected_neighbors(node)
    if not neigh:
        return 0.0
    hot = sum(
        1
        for w in neigh
        if states[w] is CellState.INFLAMED or states[w] is CellState.METASTATIC
    )
    return hot / len(neigh)


@dataclass
class StepMetrics:
    """Per-step population readout; dead_inflamed_ratio is None when the
    inflamed count is zero (the ratio is undefined, not 0)."""

    step: int
    n_nodes: int
    n_normal: int
    n_proliferative: int
    n_inflamed: int
    n_quiescent: int
    n_metastatic: int
    n_dead: int
    dead_inflamed_ratio: float | None
    p_redirect: float
    n_new: int = 0

    CSV_COLUMNS = (
        "step",
        "n_nodes",
        "n_normal",
        "n_proliferative",
        "n_inflamed",
        "n_quiescent",
        "n_metastatic",
        "n_dead",
        "dead_inflamed_ratio",
        "p_redirect",
    )

    def csv_row(self) -> list:
        row = [getattr(self, c) for c in self.CSV_COLUMNS]
        return ["" if v is None else v for v in row]

    def as_dict(self) -> dict:
        d = {c: getattr(self, c) for c in self.CSV_COLUMNS}
        d["n_new"] = self.n_new
        return d


def state_counts(states) -> dict[CellState, int]:
    counts = {s: 0 for s in CellState}
    for s in states:
        counts[s] += 1
    return counts


def dead_inflamed_ratio(n_dead: int, n_inflamed: int) -> float | None:
    if n_inflamed == 0:
        return None
    return n_dead / n_inflamed


@dataclass
class ModelState:
    """One simulation instance; strictly single-threaded during step/run."""

    graph: TumorGraph
    states: list[CellState]
    steps_in_state: list[int]
    switch: AngiogenicSwitch
    driver: DriverParams
    rng: np.random.Generator
    growth_plan: list[int] = field(default_factory=list)
    step_index: int = 0
    pfa: PfaDefinition = None

    def __post_init__(self):
        if self.pfa is None:
            self.pfa = build_pfa(self.switch)

    @classmethod
    def create(
        cls,
        n: int,
        p_edge: float,
        driver: DriverParams,
        switch: AngiogenicSwitch,
        seed,
        growth_plan: list[int] | None = None,
        graph: TumorGraph | None = None,
    ) -> "ModelState":
        """Fresh ER-seeded model; a pre-built seed graph may be supplied to
        share one substrate across repetitions."""
        driver.validate()
        switch.validate()
        rng = make_rng(seed)
        if graph is None:
            graph = generate_er(n, p_edge, rng)
        pfa = build_pfa(switch)
        model = cls(
            graph=graph,
            states=[],
            steps_in_state=[0] * graph.node_count,
            switch=switch,
            driver=driver,
            rng=rng,
            growth_plan=list(growth_plan or []),
            pfa=pfa,
        )
        model.states = [sample_initial_state(pfa, rng) for _ in range(graph.node_count)]
        return model

    def set_switch(self, switch: AngiogenicSwitch) -> None:
        switch.validate()
        self.switch = switch
        self.pfa = build_pfa(switch)

    def grow(self, n_new: int) -> float:
        """Add n_new nodes at the current driver-derived redirection
        probability; returns the p_redirect used."""
        p_redirect = growth_probability(self.driver)
        grow_gnr(self.graph, n_new, p_redirect, self.rng)
        for _ in range(n_new):
            self.states.append(sample_initial_state(self.pfa, self.rng))
            self.steps_in_state.append(0)
        return p_redirect

    def metrics(self, n_new: int = 0, p_redirect: float | None = None) -> StepMetrics:
        counts = state_counts(self.states)
        return StepMetrics(
            step=self.step_index,
            n_nodes=self.graph.node_count,
            n_normal=counts[CellState.NORMAL],
            n_proliferative=counts[CellState.PROLIFERATIVE],
            n_inflamed=counts[CellState.INFLAMED],
            n_quiescent=counts[CellState.QUIESCENT],
            n_metastatic=counts[CellState.METASTATIC],
            n_dead=counts[CellState.DEAD],
            dead_inflamed_ratio=dead_inflamed_ratio(
                counts[CellState.DEAD], counts[CellState.INFLAMED]
            ),
            p_redirect=(
                growth_probability(self.driver) if p_redirect is None else p_redirect
            ),
            n_new=n_new,
        )


def step(model: ModelState) -> StepMetrics:
    """One scheduler tick: shuffled asynchronous agent activation, then graph
    growth per the growth plan (an exhausted plan grows 0 nodes)."""
    graph, states = model.graph, model.states
    order = model.rng.permutation(graph.node_count)
    for v in order.tolist():
        s = states[v]
        if s in ABSORBING:
            model.steps_in_state[v] += 1
            continue
        if s is not CellState.PROLIFERATIVE:
            f_inf = neighbor_inflammation(graph, v, states)
        else:
            f_inf = 0.0
        nxt = cascade_transition(s, model.switch, f_inf, model.rng)
        if nxt is s:
            model.steps_in_state[v] += 1
        else:
            states[v] = nxt
            model.steps_in_state[v] = 0
    if model.step_index < len(model.growth_plan):
        n_new = model.growth_plan[model.step_index]
    else:
        n_new = 0
    p_redirect = model.grow(n_new) if n_new else growth_probability(model.driver)
    model.step_index += 1
    return model.metrics(n_new=n_new, p_redirect=p_redirect)


@dataclass
class RunRecord:
    """One run's config echo, seed, metric series, final snapshot, and
    profile. wall_time is informational and excluded from the deterministic
    payload (canonical_dict / to_json)."""

    config: dict
    seed: dict
    metrics: list[StepMetrics]
    final_snapshot: dict
    profile: "object | None" = None
    pattern_index: int = 1
    wall_time: float = 0.0

    def canonical_dict(self) -> dict:
        profile = None
        if self.profile is not None:
            profile = {
                "derived_cell_ids": list(self.profile.derived_cell_ids),
                "essential_genomic_profile": self.profile.essential_genomic_profile,
                "mean_genomic_profile": self.profile.mean_genomic_profile,
                "pattern_index": self.profile.pattern_index,
            }
        return {
            "config": self.config,
            "seed": self.seed,
            "pattern_index": self.pattern_index,
            "metrics": [m.as_dict() for m in self.metrics],
            "final_snapshot": self.final_snapshot,
            "profile": profile,
        }

    def to_json(self) -> str:
        import json

        return json.dumps(self.canonical_dict(), sort_keys=True, separators=(",", ":"))


def run(
    model: ModelState,
    n_steps: int,
    pattern_index: int = 1,
    config_echo: dict | None = None,
    seed_info: dict | None = None,
    compute_profile: bool = True,
) -> RunRecord:
    """Apply `step` n_steps times and package the outcome.

    Equal seeds and configs yield bit-identical records (wall_time aside).
    """
    if n_steps < 0:
        raise ConfigError("n_steps must be >= 0", field="steps")
    t0 = time.perf_counter()
    series = [step(model) for _ in range(n_steps)]
    snap = snapshot(model.graph, model.states)
    profile = None
    if compute_profile and model.graph.node_count >= 3:
        from .analysis import derived_cell_profile  # avoids a module cycle

        profile = derived_cell_profile(model.graph, pattern_index)
    return RunRecord(
        config=config_echo or {},
        seed=seed_info or {},
        metrics=series,
        final_snapshot=snap,
        profile=profile,
        pattern_index=pattern_index,
        wall_time=time.perf_counter() - t0,
    )


def make_growth_plan(total_new: int, n_steps: int) -> list[int]:
    """Spread a node budget uniformly over n_steps, remainder to the early
    steps."""
    if n_steps <= 0:
        return []
    base, rem = divmod(total_new, n_steps)
    return [base + (1 if i < rem else 0) for i in range(n_steps)]
