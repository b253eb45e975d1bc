"""Headless entry points: run baselines and sweeps, analyze snapshots, serve
the session API, export tables.

Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import harness
from .analysis import betweenness, derived_cell_profile
from .errors import ConfigError, OncoGraphError, ProfileUndefinedError
from .graph import TumorGraph, density, load_snapshot

EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def _fail_config(message: str, field: str | None = None) -> None:
    loc = f" (field: {field})" if field else ""
    click.echo(f"error: {message}{loc}", err=True)
    sys.exit(EXIT_CONFIG)


def _fail_runtime(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_RUNTIME)


@click.group()
def main():
    """Tumor-growth graph simulator."""


@main.command("simulate")
@click.argument("config_path", type=click.Path(path_type=Path))
@click.option("--seed", type=int, default=None, help="Override the master seed.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=None)
@click.option("--parallel/--sequential", default=False)
def cmd_simulate(config_path: Path, seed, out_dir, parallel):
    """Run the baseline described by an experiment config file."""
    if not config_path.exists():
        _fail_config(f"config file not found: {config_path}", field="config")
    try:
        doc = json.loads(config_path.read_text())
    except json.JSONDecodeError as exc:
        _fail_config(f"config is not valid JSON at position {exc.pos}: {exc.msg}")
    if not isinstance(doc, dict) or "baseline" not in doc:
        _fail_config("config must be an object with a 'baseline' block", field="baseline")
    try:
        config = harness.baseline_config_from_dict(doc["baseline"])
        if seed is not None:
            from dataclasses import replace

            config = replace(config, master_seed=seed)
        out = Path(out_dir or doc.get("out_dir", "out"))
        records = harness.run_baseline(config, parallel=parallel)
        extra = {}
        if doc.get("switches"):
            switches = [
                harness.switch_from_dict(s, prefix=f"switches[{i}]")
                for i, s in enumerate(doc["switches"])
            ]
            rows = harness.run_switch_comparison(
                config, switches, int(doc.get("n_seeds", 1)), parallel=parallel
            )
            extra["switch_comparison.csv"] = harness.emit_switch_comparison_csv(rows)
        harness.write_suite_outputs(
            [config], {config.name: records}, out, extra_files=extra
        )
    except ConfigError as exc:
        _fail_config(str(exc), exc.field)
    except (OncoGraphError, OSError) as exc:
        _fail_runtime(str(exc))
    click.echo(f"wrote {out}/manifest.json")


@main.command("baselines")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("out"))
@click.option("--seed", type=int, default=0)
@click.option("--parallel/--sequential", default=False)
def cmd_baselines(out_dir: Path, seed: int, parallel: bool):
    """Run the four built-in patient baselines under ASW1 and emit the
    per-patient profile tables."""
    try:
        configs = harness.builtin_baselines(master_seed=seed)
        records = {
            c.name: harness.run_baseline(c, parallel=parallel) for c in configs
        }
        harness.write_suite_outputs(configs, records, out_dir)
    except ConfigError as exc:
        _fail_config(str(exc), exc.field)
    except (OncoGraphError, OSError) as exc:
        _fail_runtime(str(exc))
    click.echo(f"wrote {out_dir}/manifest.json")


@main.command("switch-compare")
@click.option("--patient", type=int, default=3, help="Patient baseline 1..4.")
@click.option("--seeds", "n_seeds", type=int, default=30)
@click.option("--seed", "master_seed", type=int, default=0)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("out"))
@click.option("--parallel/--sequential", default=False)
def cmd_switch_compare(patient, n_seeds, master_seed, out_dir, parallel):
    """Compare final inflamed/dead counts under ASW1-3 for one patient."""
    if not 1 <= patient <= 4:
        _fail_config(f"patient must be in 1..4, got {patient}", field="patient")
    try:
        base = harness.builtin_baselines(master_seed=master_seed)[patient - 1]
        rows = harness.run_switch_comparison(
            base, harness.builtin_switches(), n_seeds, parallel=parallel
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        text = harness.emit_switch_comparison_csv(rows)
        (out_dir / "switch_comparison.csv").write_text(text)
    except ConfigError as exc:
        _fail_config(str(exc), exc.field)
    except (OncoGraphError, OSError) as exc:
        _fail_runtime(str(exc))
    click.echo(f"wrote {out_dir}/switch_comparison.csv")


@main.command("analyze")
@click.argument("snapshot_path", type=click.Path(path_type=Path))
def cmd_analyze(snapshot_path: Path):
    """Print density, state counts, top betweenness nodes, and the profile of
    a snapshot file."""
    if not snapshot_path.exists():
        _fail_config(f"snapshot not found: {snapshot_path}", field="snapshot")
    try:
        doc = json.loads(snapshot_path.read_text())
    except json.JSONDecodeError as exc:
        _fail_config(f"snapshot is not valid JSON at position {exc.pos}: {exc.msg}")
    try:
        graph, states = load_snapshot(doc)
    except (OncoGraphError, KeyError, TypeError) as exc:
        _fail_config(f"malformed snapshot: {exc}")
    click.echo(f"nodes: {graph.node_count}  edges: {graph.edge_count}")
    click.echo(f"density: {density(graph):.6f}")
    counts: dict[str, int] = {}
    for s in states:
        counts[s] = counts.get(s, 0) + 1
    for state, count in sorted(counts.items()):
        click.echo(f"  {state}: {count}")
    try:
        cmap = betweenness(graph)
        top = sorted(
            range(graph.node_count), key=lambda v: (-cmap.values[v], v)
        )[:10]
        click.echo("top betweenness:")
        for v in top:
            click.echo(f"  node {v}: {harness.sci3(cmap[v])}")
        prof = derived_cell_profile(graph, pattern_index=1)
        ids = ";".join(str(i) for i in prof.derived_cell_ids)
        click.echo(
            f"derived cells: {ids}  "
            f"essential genomic profile: {harness.sci3(prof.essential_genomic_profile)}"
        )
    except ProfileUndefinedError as exc:
        _fail_runtime(str(exc))


@main.command("serve")
@click.option("--port", type=int, default=8000)
@click.option("--host", default="127.0.0.1")
@click.option("--ttl", type=float, default=3600.0, help="Idle session TTL (s).")
def cmd_serve(port: int, host: str, ttl: float):
    """Host the interactive session API."""
    import uvicorn

    from .service import create_app

    try:
        uvicorn.run(create_app(ttl_seconds=ttl), host=host, port=port, log_level="warning")
    except (OSError, SystemExit) as exc:
        _fail_runtime(f"server failed: {exc}")


if __name__ == "__main__":
    main()
