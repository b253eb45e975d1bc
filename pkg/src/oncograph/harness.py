"""Parametric executions: the four patient baselines with three growth
patterns each, angiogenic-switch comparisons over replicate seeds, parallel
fan-out, and CSV/manifest emission."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .analysis import DerivedCellProfile
from .dynamics import (
    AngiogenicSwitch,
    DriverParams,
    ModelState,
    RunRecord,
    StepMetrics,
    make_growth_plan,
    run,
)
from .errors import ConfigError
from .graph import generate_er, snapshot_json
from .rng import child_seed_key, make_rng, split_seed

DEFAULT_DRIVER_U = 1e-6
DEFAULT_DRIVER_D = 100
DEFAULT_DRIVER_K = 3
DEFAULT_STEPS = 50

# spawn-key layout under a baseline's master seed: index 0 is reserved for a
# shared ER substrate (reuse_seed_graph), repetition i uses 1 + i.
_ER_REUSE_INDEX = 0
_REP_OFFSET = 1


@dataclass(frozen=True)
class BaselineConfig:
    """One patient-scale configuration: initial size, growth target, and the
    cancer-stem-cell count that enters the driver-mutation probability."""

    name: str
    initial_stem_cells: int
    target_cells: int
    cancer_stem_cells: int
    repetitions: int = 3
    steps: int = DEFAULT_STEPS
    er_edge_probability: float | None = None  # None -> expected seed degree 4
    switch: AngiogenicSwitch = AngiogenicSwitch(0.4, 0.6, 0.2)
    driver_u: float = DEFAULT_DRIVER_U
    driver_d: int = DEFAULT_DRIVER_D
    driver_k: int = DEFAULT_DRIVER_K
    master_seed: int = 0
    reuse_seed_graph: bool = False

    def validate(self) -> "BaselineConfig":
        if self.initial_stem_cells < 1:
            raise ConfigError(
                "initial_stem_cells must be >= 1", field="baseline.initial_stem_cells"
            )
        if self.target_cells < self.initial_stem_cells:
            raise ConfigError(
                "target_cells must be >= initial_stem_cells",
                field="baseline.target_cells",
            )
        if self.cancer_stem_cells < 1:
            raise ConfigError(
                "cancer_stem_cells must be >= 1", field="baseline.cancer_stem_cells"
            )
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1", field="baseline.repetitions")
        if self.steps < 1:
            raise ConfigError("steps must be >= 1", field="baseline.steps")
        p = self.p_edge
        if not (0.0 <= p <= 1.0):
            raise ConfigError(
                "er_edge_probability must be in [0, 1]",
                field="baseline.er_edge_probability",
            )
        self.switch.validate()
        self.driver.validate()
        return self

    @property
    def p_edge(self) -> float:
        if self.er_edge_probability is not None:
            return self.er_edge_probability
        return min(1.0, 4.0 / max(1, self.initial_stem_cells - 1))

    @property
    def driver(self) -> DriverParams:
        return DriverParams(
            u=self.driver_u, d=self.driver_d, k=self.driver_k, N=self.cancer_stem_cells
        )

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "initial_stem_cells": self.initial_stem_cells,
            "target_cells": self.target_cells,
            "cancer_stem_cells": self.cancer_stem_cells,
            "repetitions": self.repetitions,
            "steps": self.steps,
            "er_edge_probability": self.p_edge,
            "switch": {
                "angioprevention": self.switch.angioprevention,
                "angiogenesis": self.switch.angiogenesis,
                "quiescent": self.switch.quiescent,
            },
            "driver": {
                "u": self.driver_u,
                "d": self.driver_d,
                "k": self.driver_k,
                "N": self.cancer_stem_cells,
            },
            "master_seed": self.master_seed,
            "reuse_seed_graph": self.reuse_seed_graph,
        }


def builtin_switches() -> list[AngiogenicSwitch]:
    """ASW1-3 transition-probability presets."""
    return [
        AngiogenicSwitch(angioprevention=0.4, angiogenesis=0.6, quiescent=0.2),
        AngiogenicSwitch(angioprevention=0.6, angiogenesis=0.4, quiescent=0.2),
        AngiogenicSwitch(angioprevention=0.4, angiogenesis=0.6, quiescent=0.8),
    ]


def builtin_baselines(master_seed: int = 0, switch: AngiogenicSwitch | None = None) -> list[BaselineConfig]:
    """The four patient baselines (initial -> target under CSC count)."""
    sw = switch or builtin_switches()[0]
    scales = [
        ("patient1", 200, 400, 50),
        ("patient2", 400, 800, 200),
        ("patient3", 600, 1200, 400),
        ("patient4", 1200, 2400, 650),
    ]
    return [
        BaselineConfig(
            name=name,
            initial_stem_cells=n0,
            target_cells=n1,
            cancer_stem_cells=csc,
            switch=sw,
            master_seed=master_seed,
        )
        for name, n0, n1, csc in scales
    ]


def run_repetition(
    config: BaselineConfig, rep_index: int, compute_profile: bool = True
) -> RunRecord:
    """One growth pattern of a baseline; rep seeds are split from the master
    seed by index, so repetitions are order- and worker-independent."""
    config.validate()
    seed_seq = split_seed(config.master_seed, _REP_OFFSET + rep_index)
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    graph = None
    if config.reuse_seed_graph:
        graph = generate_er(
            config.initial_stem_cells,
            config.p_edge,
            make_rng(config.master_seed, _ER_REUSE_INDEX),
        )
    model = ModelState.create(
        n=config.initial_stem_cells,
        p_edge=config.p_edge,
        driver=config.driver,
        switch=config.switch,
        seed=rng,
        growth_plan=make_growth_plan(
            config.target_cells - config.initial_stem_cells, config.steps
        ),
        graph=graph,
    )
    return run(
        model,
        config.steps,
        pattern_index=rep_index + 1,
        config_echo=config.as_dict(),
        seed_info=child_seed_key(config.master_seed, _REP_OFFSET + rep_index),
        compute_profile=compute_profile,
    )


def max_workers() -> int:
    cap = os.environ.get("ONCOGRAPH_THREADS")
    if cap:
        return max(1, int(cap))
    return os.cpu_count() or 1


def run_baseline(
    config: BaselineConfig, parallel: bool = False, compute_profile: bool = True
) -> list[RunRecord]:
    """All repetitions of a baseline; parallel and sequential execution yield
    identical records (seeds are pre-split, aggregation is by index)."""
    config.validate()
    reps = range(config.repetitions)
    if parallel and config.repetitions > 1:
        with ProcessPoolExecutor(
            max_workers=min(max_workers(), config.repetitions)
        ) as pool:
            futures = [
                pool.submit(run_repetition, config, i, compute_profile) for i in reps
            ]
            return [f.result() for f in futures]
    return [run_repetition(config, i, compute_profile) for i in reps]


@dataclass
class SwitchComparisonRow:
    switch_name: str
    switch: AngiogenicSwitch
    inflamed: list[int]
    dead: list[int]
    ratio: list[float]  # NaN where inflamed == 0

    def summary(self) -> dict:
        def quartiles(xs):
            arr = np.asarray(xs, dtype=float)
            if np.all(np.isnan(arr)):
                return (float("nan"),) * 3
            return tuple(float(v) for v in np.nanpercentile(arr, [25, 50, 75]))

        q1_i, med_i, q3_i = quartiles(self.inflamed)
        q1_d, med_d, q3_d = quartiles(self.dead)
        q1_r, med_r, q3_r = quartiles(self.ratio)
        return {
            "switch": self.switch_name,
            "angioprevention": self.switch.angioprevention,
            "angiogenesis": self.switch.angiogenesis,
            "quiescent": self.switch.quiescent,
            "median_inflamed": med_i,
            "q1_inflamed": q1_i,
            "q3_inflamed": q3_i,
            "median_dead": med_d,
            "q1_dead": q1_d,
            "q3_dead": q3_d,
            "median_ratio": med_r,
            "q1_ratio": q1_r,
            "q3_ratio": q3_r,
        }


def _comparison_replicate(config: BaselineConfig) -> tuple[int, int, float]:
    record = run_repetition(config, 0, compute_profile=False)
    last = record.metrics[-1]
    ratio = float("nan") if last.dead_inflamed_ratio is None else last.dead_inflamed_ratio
    return last.n_inflamed, last.n_dead, ratio


def run_switch_comparison(
    base: BaselineConfig,
    switches: list[AngiogenicSwitch],
    n_seeds: int,
    parallel: bool = False,
) -> list[SwitchComparisonRow]:
    """Run n_seeds independent replicates of the baseline under each switch
    and summarize final inflamed/dead counts and dead-inflamed ratio."""
    if n_seeds < 1:
        raise ConfigError("n_seeds must be >= 1", field="n_seeds")
    configs = []
    for si, sw in enumerate(switches):
        for ri in range(n_seeds):
            # distinct master per replicate keeps rep-0 streams independent
            seed = int(
                split_seed(base.master_seed, 1000 + si, ri).generate_state(1)[0]
            )
            configs.append(replace(base, switch=sw, master_seed=seed, repetitions=1))
    if parallel and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=max_workers()) as pool:
            finals = list(pool.map(_comparison_replicate, configs))
    else:
        finals = [_comparison_replicate(c) for c in configs]
    rows = []
    for si, sw in enumerate(switches):
        chunk = finals[si * n_seeds : (si + 1) * n_seeds]
        rows.append(
            SwitchComparisonRow(
                switch_name=f"ASW{si + 1}",
                switch=sw,
                inflamed=[c[0] for c in chunk],
                dead=[c[1] for c in chunk],
                ratio=[c[2] for c in chunk],
            )
        )
    return rows


def sci3(value: float) -> str:
    """Scientific notation with 3 significant digits, e.g. 2.19E-03."""
    return f"{value:.2E}"


def emit_profile_tables(records_by_baseline: dict[str, list[RunRecord]]) -> str:
    """Long-form CSV of the per-pattern profiles: one row per (patient, GP)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "patient",
            "pattern",
            "derived_cell_ids",
            "essential_genomic_profile",
            "mean_genomic_profile",
        ]
    )
    for patient, records in records_by_baseline.items():
        for record in records:
            prof: DerivedCellProfile = record.profile
            writer.writerow(
                [
                    patient,
                    f"GP{prof.pattern_index}",
                    ";".join(str(i) for i in prof.derived_cell_ids),
                    sci3(prof.essential_genomic_profile),
                    sci3(prof.mean_genomic_profile),
                ]
            )
    return buf.getvalue()


def emit_profile_markdown(records_by_baseline: dict[str, list[RunRecord]]) -> str:
    """Per-baseline tables with GP1..GPr columns, mirroring the report layout."""
    out = []
    for patient, records in records_by_baseline.items():
        cols = [f"GP{r.profile.pattern_index}" for r in records]
        ids = [";".join(str(i) for i in r.profile.derived_cell_ids) for r in records]
        vals = [sci3(r.profile.essential_genomic_profile) for r in records]
        out.append(f"| Initial tumor ({patient}) | " + " | ".join(cols) + " |")
        out.append("|" + "---|" * (len(cols) + 1))
        out.append("| tumor-derived cell ID | " + " | ".join(ids) + " |")
        out.append("| Essential Genomic Profile | " + " | ".join(vals) + " |")
        out.append("")
    return "\n".join(out)


def emit_metrics_csv(metrics: list[StepMetrics]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(StepMetrics.CSV_COLUMNS)
    for m in metrics:
        writer.writerow(m.csv_row())
    return buf.getvalue()


def emit_switch_comparison_csv(rows: list[SwitchComparisonRow]) -> str:
    buf = io.StringIO()
    summaries = [r.summary() for r in rows]
    writer = csv.DictWriter(buf, fieldnames=list(summaries[0].keys()), lineterminator="\n")
    writer.writeheader()
    for s in summaries:
        writer.writerow(s)
    return buf.getvalue()


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def write_baseline_outputs(
    config: BaselineConfig, records: list[RunRecord], out_dir: str | Path
) -> dict:
    """Write metrics/snapshot/profile artifacts plus a manifest with content
    hashes; returns the manifest. Deterministic for equal (seed, config)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: dict[str, str] = {}

    def emit(name: str, text: str) -> None:
        data = text.encode()
        (out / name).write_bytes(data)
        files[name] = _sha256(data)

    for i, record in enumerate(records, start=1):
        emit(f"metrics_{config.name}_{i}.csv", emit_metrics_csv(record.metrics))
        emit(
            f"snapshot_{config.name}_{i}.json",
            snapshot_json(record.final_snapshot),
        )
    if all(r.profile is not None for r in records):
        emit("profile_tables.csv", emit_profile_tables({config.name: records}))
    manifest = {
        "config": config.as_dict(),
        "seeds": [r.seed for r in records],
        "files": files,
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n"
    )
    return manifest


def write_suite_outputs(
    configs: list[BaselineConfig],
    records_by_baseline: dict[str, list[RunRecord]],
    out_dir: str | Path,
    extra_files: dict[str, str] | None = None,
) -> dict:
    """Combined emission for a multi-baseline suite (one shared manifest)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: dict[str, str] = {}

    def emit(name: str, text: str) -> None:
        data = text.encode()
        (out / name).write_bytes(data)
        files[name] = _sha256(data)

    for config in configs:
        for i, record in enumerate(records_by_baseline[config.name], start=1):
            emit(f"metrics_{config.name}_{i}.csv", emit_metrics_csv(record.metrics))
            emit(
                f"snapshot_{config.name}_{i}.json",
                snapshot_json(record.final_snapshot),
            )
    emit("profile_tables.csv", emit_profile_tables(records_by_baseline))
    emit("profile_tables.md", emit_profile_markdown(records_by_baseline))
    for name, text in (extra_files or {}).items():
        emit(name, text)
    manifest = {
        "configs": [c.as_dict() for c in configs],
        "seeds": {
            name: [r.seed for r in records]
            for name, records in records_by_baseline.items()
        },
        "files": files,
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n"
    )
    return manifest


def baseline_config_from_dict(doc: dict, prefix: str = "baseline") -> BaselineConfig:
    """Parse/validate the experiment-config baseline block; errors carry the
    offending field path."""
    if not isinstance(doc, dict):
        raise ConfigError("baseline must be an object", field=prefix)
    known = {
        "name",
        "initial_stem_cells",
        "target_cells",
        "cancer_stem_cells",
        "repetitions",
        "steps",
        "er_edge_probability",
        "switch",
        "driver",
        "master_seed",
        "reuse_seed_graph",
    }
    for key in doc:
        if key not in known:
            raise ConfigError(f"unknown field {key!r}", field=f"{prefix}.{key}")
    try:
        switch = switch_from_dict(doc.get("switch", {}), prefix=f"{prefix}.switch")
        driver = doc.get("driver", {})
        if not isinstance(driver, dict):
            raise ConfigError("driver must be an object", field=f"{prefix}.driver")
        config = BaselineConfig(
            name=str(doc.get("name", "baseline")),
            initial_stem_cells=int(doc["initial_stem_cells"]),
            target_cells=int(doc["target_cells"]),
            cancer_stem_cells=int(doc["cancer_stem_cells"]),
            repetitions=int(doc.get("repetitions", 3)),
            steps=int(doc.get("steps", DEFAULT_STEPS)),
            er_edge_probability=(
                None
                if doc.get("er_edge_probability") is None
                else float(doc["er_edge_probability"])
            ),
            switch=switch,
            driver_u=float(driver.get("u", DEFAULT_DRIVER_U)),
            driver_d=int(driver.get("d", DEFAULT_DRIVER_D)),
            driver_k=int(driver.get("k", DEFAULT_DRIVER_K)),
            master_seed=int(doc.get("master_seed", 0)),
            reuse_seed_graph=bool(doc.get("reuse_seed_graph", False)),
        )
    except KeyError as exc:
        raise ConfigError(
            f"missing required field {exc.args[0]!r}",
            field=f"{prefix}.{exc.args[0]}",
        ) from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), field=prefix) from exc
    return config.validate()


def switch_from_dict(doc: dict, prefix: str = "switch") -> AngiogenicSwitch:
    if not isinstance(doc, dict):
        raise ConfigError("switch must be an object", field=prefix)
    defaults = builtin_switches()[0]
    try:
        switch = AngiogenicSwitch(
            angioprevention=float(doc.get("angioprevention", defaults.angioprevention)),
            angiogenesis=float(doc.get("angiogenesis", defaults.angiogenesis)),
            quiescent=float(doc.get("quiescent", defaults.quiescent)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), field=prefix) from exc
    try:
        return switch.validate()
    except ConfigError as exc:
        raise ConfigError(str(exc), field=f"{prefix}.{exc.field.split('.')[-1]}" if exc.field else prefix) from exc
