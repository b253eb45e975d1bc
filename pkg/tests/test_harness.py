import csv
import io
import json
from dataclasses import replace

import pytest

from oncograph.dynamics import AngiogenicSwitch
from oncograph.errors import ConfigError
from oncograph.harness import (
    BaselineConfig,
    baseline_config_from_dict,
    builtin_baselines,
    builtin_switches,
    emit_metrics_csv,
    emit_profile_tables,
    emit_switch_comparison_csv,
    run_baseline,
    run_switch_comparison,
    sci3,
    write_baseline_outputs,
    write_suite_outputs,
)

SMALL = BaselineConfig(
    name="patient1",
    initial_stem_cells=30,
    target_cells=60,
    cancer_stem_cells=10,
    repetitions=3,
    steps=10,
    master_seed=1,
)


class TestBuiltins:
    def test_baseline_scales(self):
        p1, p2, p3, p4 = builtin_baselines()
        assert (p1.initial_stem_cells, p1.target_cells, p1.cancer_stem_cells) == (200, 400, 50)
        assert (p2.initial_stem_cells, p2.target_cells, p2.cancer_stem_cells) == (400, 800, 200)
        assert (p3.initial_stem_cells, p3.target_cells, p3.cancer_stem_cells) == (600, 1200, 400)
        assert (p4.initial_stem_cells, p4.target_cells, p4.cancer_stem_cells) == (1200, 2400, 650)
        assert all(c.repetitions == 3 for c in builtin_baselines())

    def test_switch_presets(self):
        asw1, asw2, asw3 = builtin_switches()
        assert asw1 == AngiogenicSwitch(0.4, 0.6, 0.2)
        assert asw2 == AngiogenicSwitch(0.6, 0.4, 0.2)
        assert asw3 == AngiogenicSwitch(0.4, 0.6, 0.8)


class TestRunBaseline:
    def test_reaches_target_and_counts(self):
        records = run_baseline(SMALL)
        assert len(records) == 3
        for i, rec in enumerate(records):
            assert rec.final_snapshot["node_count"] == 60
            assert len(rec.metrics) == 10
            assert rec.profile.pattern_index == i + 1

    def test_single_repetition(self):
        records = run_baseline(replace(SMALL, repetitions=1))
        assert len(records) == 1

    def test_deterministic(self):
        a = run_baseline(SMALL)
        b = run_baseline(SMALL)
        assert [r.to_json() for r in a] == [r.to_json() for r in b]

    def test_parallel_matches_sequential(self):
        seq = run_baseline(SMALL)
        par = run_baseline(SMALL, parallel=True)
        assert [r.to_json() for r in seq] == [r.to_json() for r in par]

    def test_repetitions_differ(self):
        records = run_baseline(SMALL)
        assert records[0].final_snapshot != records[1].final_snapshot

    def test_reuse_seed_graph_shares_substrate(self):
        records = run_baseline(replace(SMALL, reuse_seed_graph=True, steps=1))
        seed_links = [
            [l for l in r.final_snapshot["links"] if l["src"] < 30 and l["dst"] < 30]
            for r in records
        ]
        assert seed_links[0] == seed_links[1] == seed_links[2]

    def test_invalid_config_rejected(self):
        with pytest.raises(ConfigError):
            run_baseline(replace(SMALL, target_cells=10))


class TestSwitchComparison:
    def test_single_seed_single_switch(self):
        rows = run_switch_comparison(SMALL, [builtin_switches()[0]], n_seeds=1)
        assert len(rows) == 1
        s = rows[0].summary()
        assert s["median_inflamed"] == s["q1_inflamed"] == s["q3_inflamed"]
        assert s["median_inflamed"] == rows[0].inflamed[0]

    def test_degenerate_switch_is_inert(self):
        rows = run_switch_comparison(SMALL, [AngiogenicSwitch(0, 0, 0)], n_seeds=3)
        assert rows[0].inflamed == [0, 0, 0]
        assert rows[0].dead == [0, 0, 0]

    def test_rejects_zero_seeds(self):
        with pytest.raises(ConfigError):
            run_switch_comparison(SMALL, builtin_switches(), n_seeds=0)

    def test_csv_shape(self):
        rows = run_switch_comparison(SMALL, builtin_switches(), n_seeds=2)
        text = emit_switch_comparison_csv(rows)
        parsed = list(csv.DictReader(io.StringIO(text)))
        assert [r["switch"] for r in parsed] == ["ASW1", "ASW2", "ASW3"]


class TestEmission:
    def test_sci3_format(self):
        assert sci3(0.00219) == "2.19E-03"
        assert sci3(3.4e-3) == "3.40E-03"

    def test_profile_table_shape_and_tie_rendering(self):
        records = run_baseline(SMALL)
        # inject a tie to pin the separator
        object.__setattr__(records[0].profile, "derived_cell_ids", (17, 10))
        text = emit_profile_tables({"patient1": records})
        parsed = list(csv.DictReader(io.StringIO(text)))
        assert len(parsed) == 3
        assert [r["pattern"] for r in parsed] == ["GP1", "GP2", "GP3"]
        assert parsed[0]["derived_cell_ids"] == "17;10"

    def test_profile_table_round_trips(self):
        records = run_baseline(SMALL)
        text = emit_profile_tables({"patient1": records})
        parsed = list(csv.DictReader(io.StringIO(text)))
        for row, rec in zip(parsed, records):
            assert row["derived_cell_ids"] == ";".join(
                str(i) for i in rec.profile.derived_cell_ids
            )
            assert row["essential_genomic_profile"] == sci3(
                rec.profile.essential_genomic_profile
            )

    def test_metrics_csv_round_trip(self):
        records = run_baseline(replace(SMALL, repetitions=1))
        text = emit_metrics_csv(records[0].metrics)
        parsed = list(csv.DictReader(io.StringIO(text)))
        assert len(parsed) == 10
        for row, m in zip(parsed, records[0].metrics):
            assert int(row["step"]) == m.step
            assert int(row["n_nodes"]) == m.n_nodes
            assert float(row["p_redirect"]) == m.p_redirect
            if m.dead_inflamed_ratio is None:
                assert row["dead_inflamed_ratio"] == ""
            else:
                assert float(row["dead_inflamed_ratio"]) == m.dead_inflamed_ratio

    def test_write_outputs_and_manifest(self, tmp_path):
        records = run_baseline(SMALL)
        manifest = write_baseline_outputs(SMALL, records, tmp_path)
        for i in range(1, 4):
            assert (tmp_path / f"metrics_patient1_{i}.csv").exists()
            assert (tmp_path / f"snapshot_patient1_{i}.json").exists()
        assert (tmp_path / "profile_tables.csv").exists()
        on_disk = json.loads((tmp_path / "manifest.json").read_text())
        assert on_disk == manifest
        assert len(manifest["seeds"]) == 3

    def test_manifest_is_deterministic(self, tmp_path):
        write_baseline_outputs(SMALL, run_baseline(SMALL), tmp_path / "a")
        write_baseline_outputs(SMALL, run_baseline(SMALL), tmp_path / "b")
        assert (tmp_path / "a/manifest.json").read_bytes() == (
            tmp_path / "b/manifest.json"
        ).read_bytes()

    def test_suite_outputs(self, tmp_path):
        config = replace(SMALL, name="patientX")
        records = {"patientX": run_baseline(config)}
        manifest = write_suite_outputs([config], records, tmp_path)
        assert "profile_tables.csv" in manifest["files"]
        assert (tmp_path / "profile_tables.md").exists()


class TestConfigParsing:
    def test_round_trip(self):
        config = baseline_config_from_dict(SMALL.as_dict())
        assert config.initial_stem_cells == 30
        assert config.switch == SMALL.switch

    def test_missing_field_path(self):
        with pytest.raises(ConfigError) as err:
            baseline_config_from_dict({"name": "x"})
        assert err.value.field.startswith("baseline.")

    def test_bad_switch_field_path(self):
        doc = SMALL.as_dict()
        doc["switch"]["angiogenesis"] = 1.2
        with pytest.raises(ConfigError) as err:
            baseline_config_from_dict(doc)
        assert "angiogenesis" in err.value.field

    def test_unknown_field_rejected(self):
        doc = SMALL.as_dict()
        doc["bogus"] = 1
        with pytest.raises(ConfigError) as err:
            baseline_config_from_dict(doc)
        assert err.value.field == "baseline.bogus"
