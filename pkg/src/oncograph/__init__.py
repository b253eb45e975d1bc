"""Deterministic multiscale graph agent-based tumor-growth simulator."""

from .analysis import (
    CentralityMap,
    DerivedCellProfile,
    PopulationMetrics,
    betweenness,
    closeness,
    derived_cell_profile,
    population_metrics,
)
from .dynamics import (
    AngiogenicSwitch,
    CellState,
    DriverParams,
    ModelState,
    PfaDefinition,
    RunRecord,
    StepMetrics,
    build_pfa,
    growth_probability,
    make_growth_plan,
    neighbor_inflammation,
    run,
    step,
    transition_trial,
)
from .errors import ConfigError, IntegrityError, OncoGraphError, ProfileUndefinedError
from .graph import (
    TumorGraph,
    density,
    generate_er,
    grow_gnr,
    load_snapshot,
    snapshot,
    snapshot_json,
)
from .harness import (
    BaselineConfig,
    builtin_baselines,
    builtin_switches,
    run_baseline,
    run_switch_comparison,
)
from .rng import make_rng, split_seed

__version__ = "0.1.0"
