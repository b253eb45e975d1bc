"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with `pytest -s tests/test_acceptance.py -v`)."""

import math
from dataclasses import replace

import numpy as np
import pytest
from fastapi.testclient import TestClient
from scipy.stats import binomtest

from oncograph.analysis import betweenness, closeness
from oncograph.dynamics import (
    AngiogenicSwitch,
    CellState,
    DriverParams,
    build_pfa,
    cascade_transition,
    growth_probability,
)
from oncograph.graph import generate_er, grow_gnr, TumorGraph
from oncograph.harness import (
    builtin_baselines,
    builtin_switches,
    run_baseline,
    run_switch_comparison,
    sci3,
    write_baseline_outputs,
)
from oncograph.rng import make_rng
from oncograph.service import create_app

from oracles import (
    brute_betweenness,
    brute_closeness,
    is_connected,
    mc_growth_probability,
    random_er_tumor_graph,
)

LIVE_STATES = (
    CellState.NORMAL,
    CellState.PROLIFERATIVE,
    CellState.INFLAMED,
    CellState.QUIESCENT,
)


def report(criterion: str, ok: bool) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion}")
    assert ok, criterion


def test_criterion_1_growth_probability_matches_monte_carlo():
    """Closed form vs 1e6-trial division-coin-flip oracle on a 20-point grid."""
    rng = make_rng(2024)
    trials = 1_000_000
    ok = True
    for _ in range(20):
        u = float(rng.uniform(0.01, 0.5))
        d = int(rng.integers(1, 11))
        k = int(rng.integers(1, 4))
        N = int(rng.integers(1, 9))
        exact = growth_probability(DriverParams(u, d, k, N))
        est, _ = mc_growth_probability(u, d, k, N, trials, rng)
        # sigma of the estimator under the closed-form p being correct
        se = math.sqrt(exact * (1 - exact) / trials)
        if abs(est - exact) >= 3 * se + 1 / trials:
            ok = False
            break
    ok = ok and growth_probability(DriverParams(0.0, 7, 2, 5)) == 0.0
    ok = ok and growth_probability(DriverParams(1.0, 1, 2, 5)) == 1.0
    report("criterion 1: growth probability matches Monte Carlo oracle", ok)


def test_criterion_2_pfa_normalization():
    """Initial mass exactly 1; per-state F + sum(P) = 1 within 1e-12."""
    rng = make_rng(11)
    grid = np.linspace(0.0, 1.0, 11)
    switches = [
        AngiogenicSwitch(float(ap), float(ag), float(q))
        for ap in grid
        for ag in grid
        for q in grid
    ]
    switches += [
        AngiogenicSwitch(*(float(x) for x in rng.random(3))) for _ in range(1000)
    ]
    ok = True
    for switch in switches:
        pfa = build_pfa(switch)
        if sum(pfa.initial.values()) != 1.0:
            ok = False
            break
        for s in CellState:
            if abs(pfa.final[s] + sum(pfa.row(s).values()) - 1.0) > 1e-12:
                ok = False
                break
        if not ok:
            break
    report("criterion 2: PFA normalization identities", ok)


def test_criterion_3_one_step_distribution():
    """Empirical single-agent frequencies (1e6 trials, neighbor term 0) match
    the compiled automaton rows within 3 sigma for ASW1-3."""
    trials = 1_000_000
    ok = True
    for si, switch in enumerate(builtin_switches()):
        pfa = build_pfa(switch)
        rng = make_rng(100 + si)
        for state in LIVE_STATES:
            counts = {s: 0 for s in CellState}
            for _ in range(trials):
                counts[cascade_transition(state, switch, 0.0, rng)] += 1
            expected = {state: pfa.final[state]}
            for (_, dst), p in pfa.row(state).items():
                expected[dst] = expected.get(dst, 0.0) + p
            for dst, p in expected.items():
                freq = counts[dst] / trials
                se = math.sqrt(max(p * (1 - p), 1e-12) / trials)
                if abs(freq - p) > 3 * max(se, 1e-9):
                    ok = False
            for dst, c in counts.items():
                if dst not in expected and c > 0:
                    ok = False
        if not ok:
            break
    report("criterion 3: one-step distribution equals automaton rows", ok)


def test_criterion_4_centrality_oracle_equivalence():
    """Brandes betweenness and scaled closeness vs brute-force enumerators."""
    rng = make_rng(77)
    corpus = []
    while len(corpus) < 60:  # connected graphs with <= 8 nodes
        n = int(rng.integers(3, 9))
        g = random_er_tumor_graph(n, float(rng.uniform(0.25, 0.9)), rng)
        if is_connected(g):
            corpus.append(g)
    for _ in range(100):  # random ER graphs, n <= 30, connectivity not required
        n = int(rng.integers(4, 31))
        corpus.append(random_er_tumor_graph(n, float(rng.uniform(0.05, 0.5)), rng))
    ok = True
    for g in corpus:
        if not np.allclose(betweenness(g).values, brute_betweenness(g), atol=1e-9):
            ok = False
            break
        if not np.allclose(closeness(g).values, brute_closeness(g), atol=1e-9):
            ok = False
            break
    # fixed cases at exact values
    star = TumorGraph()
    for _ in range(4):
        star.add_node()
    for leaf in (1, 2, 3):
        star.add_edge(0, leaf)
    ok = ok and betweenness(star).values.tolist() == [1.0, 0.0, 0.0, 0.0]
    path = TumorGraph()
    for _ in range(3):
        path.add_node()
    path.add_edge(0, 1)
    path.add_edge(1, 2)
    ok = ok and betweenness(path).values.tolist() == [0.0, 1.0, 0.0]
    ok = ok and closeness(path).values[1] == 1.0
    ok = ok and abs(closeness(path).values[0] - 2 / 3) < 1e-12
    cyc = TumorGraph()
    for _ in range(5):
        cyc.add_node()
    for i in range(5):
        cyc.add_edge(i, (i + 1) % 5)
    ok = ok and np.allclose(betweenness(cyc).values, 1 / 6, atol=1e-12)
    report("criterion 4: centrality equals brute-force oracle", ok)


def test_criterion_5_generator_statistics():
    """ER mean edge count, full-redirection root attachment, exact growth."""
    n, p, runs = 200, 0.05, 1000
    pairs = n * (n - 1) // 2
    counts = np.array([generate_er(n, p, seed=s).edge_count for s in range(runs)])
    se = math.sqrt(pairs * p * (1 - p) / runs)
    ok = abs(counts.mean() - pairs * p) < 3 * se
    for seed in range(50):
        g = TumorGraph()
        g.add_node()
        grow_gnr(g, 20, 1.0, seed=seed)
        ok = ok and all(dst == 0 for _, dst in g.edges)
    rng = make_rng(5)
    for _ in range(50):
        g = generate_er(int(rng.integers(1, 20)), float(rng.random()), rng)
        n0, m0 = g.node_count, g.edge_count
        n_new = int(rng.integers(0, 30))
        grow_gnr(g, n_new, float(rng.random()), rng)
        ok = ok and g.node_count == n0 + n_new and g.edge_count == m0 + n_new
    report("criterion 5: generator statistics", ok)


def test_criterion_6_baseline_endpoints(tmp_path):
    """Four baselines reach their exact node targets; tables have the GP1..3
    layout with scientific-notation values."""
    targets = {"patient1": 400, "patient2": 800, "patient3": 1200, "patient4": 2400}
    configs = builtin_baselines(master_seed=17)
    ok = True
    records = {}
    for config in configs:
        recs = run_baseline(config)
        records[config.name] = recs
        for rec in recs:
            if rec.final_snapshot["node_count"] != targets[config.name]:
                ok = False
    import csv as csv_mod
    import io

    from oncograph.harness import emit_profile_tables

    text = emit_profile_tables(records)
    rows = list(csv_mod.DictReader(io.StringIO(text)))
    ok = ok and len(rows) == 12  # 4 tables x 3 GP columns
    for patient in targets:
        patterns = [r["pattern"] for r in rows if r["patient"] == patient]
        ok = ok and patterns == ["GP1", "GP2", "GP3"]
    import re

    sci = re.compile(r"^\d\.\d{2}E[+-]\d{2}$")
    ok = ok and all(sci.match(r["essential_genomic_profile"]) for r in rows)
    ok = ok and sci3(0.00219) == "2.19E-03"
    report("criterion 6: baseline endpoints and table layout", ok)


def test_criterion_7_switch_comparison_trend():
    """Patient 3, 30 replicate seeds: inflamed(ASW1) > ASW2 and ASW3 by sign
    test at alpha = 0.05."""
    base = builtin_baselines(master_seed=0)[2]
    rows = run_switch_comparison(base, builtin_switches(), n_seeds=30)
    asw1, asw2, asw3 = rows
    med = lambda r: float(np.median(r.inflamed))
    ok = med(asw1) > med(asw2) and med(asw1) > med(asw3)
    for other in (asw2, asw3):
        wins = sum(a > b for a, b in zip(asw1.inflamed, other.inflamed))
        pvalue = binomtest(wins, 30, alternative="greater").pvalue
        ok = ok and pvalue < 0.05
    report("criterion 7: inflamed counts fall under ASW2/ASW3", ok)


def test_criterion_8_profile_magnitude_trend():
    """Mean essential genomic profile decreases from patient 1 to patient 4
    over 10 master seeds."""
    p1_means, p4_means = [], []
    for seed in range(10):
        baselines = builtin_baselines(master_seed=seed)
        for config, sink in ((baselines[0], p1_means), (baselines[3], p4_means)):
            recs = run_baseline(config)
            sink.append(
                float(np.mean([r.profile.essential_genomic_profile for r in recs]))
            )
    ok = float(np.mean(p1_means)) > float(np.mean(p4_means))
    ok = ok and sum(a > b for a, b in zip(p1_means, p4_means)) >= 8
    report("criterion 8: profile magnitude falls from P1 to P4", ok)


def test_criterion_9_determinism_and_parallel_equivalence(tmp_path):
    """Equal (seed, config) gives byte-identical manifests; parallel equals
    sequential repetition execution."""
    config = replace(
        builtin_baselines(master_seed=23)[0],
        initial_stem_cells=60,
        target_cells=120,
        steps=12,
    )
    seq = run_baseline(config)
    par = run_baseline(config, parallel=True)
    ok = [r.to_json() for r in seq] == [r.to_json() for r in par]
    write_baseline_outputs(config, seq, tmp_path / "a")
    write_baseline_outputs(config, run_baseline(config), tmp_path / "b")
    ok = ok and (tmp_path / "a/manifest.json").read_bytes() == (
        tmp_path / "b/manifest.json"
    ).read_bytes()
    report("criterion 9: determinism and parallel equivalence", ok)


def test_criterion_10_session_replay():
    """A recorded command log replayed on a fresh service reproduces the
    final snapshot byte-identically (no web console involved)."""
    create = {
        "n": 80,
        "p_edge": 0.05,
        "driver": {"u": 1e-6, "d": 100, "k": 3, "N": 50},
        "switch": {"angioprevention": 0.4, "angiogenesis": 0.6, "quiescent": 0.2},
        "seed": 99,
    }
    with TestClient(create_app()) as client:
        sid = client.post("/sessions", json=create).json()["session_id"]
        client.post(f"/sessions/{sid}/grow", json={"n_new": 20})
        client.post(
            f"/sessions/{sid}/switch",
            json={"angioprevention": 0.6, "angiogenesis": 0.4, "quiescent": 0.2},
        )
        client.post(f"/sessions/{sid}/step", json={"k": 8})
        log = client.get(f"/sessions/{sid}/log").json()["log"]
        snap = client.get(f"/sessions/{sid}/snapshot").content
    with TestClient(create_app()) as fresh:
        sid2 = fresh.post("/sessions", json=log[0]["args"]).json()["session_id"]
        for entry in log[1:]:
            resp = fresh.post(f"/sessions/{sid2}/{entry['op']}", json=entry["args"])
            assert resp.status_code == 200
        replayed = fresh.get(f"/sessions/{sid2}/snapshot").content
    report("criterion 10: session replay is byte-identical", replayed == snap)
