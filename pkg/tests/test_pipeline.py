"""End-to-end pipeline behavior."""

import numpy as np
import pytest

from stringkit.corpus import demo_table
from stringkit.encoders import EncodedMatrix
from stringkit.pipeline import ConfigError, PipelineConfig, run_pipeline
from stringkit.table import Column, Table


@pytest.fixture(scope="module")
def small_run():
    table, planted = demo_table(seed=0, n_rows=150)
    matrix, report = run_pipeline(table, PipelineConfig(seed=7))
    return table, planted, matrix, report


class TestConfig:
    def test_defaults_valid(self):
        cfg = PipelineConfig()
        assert cfg.encode and cfg.alpha == 0.05

    def test_bad_alpha(self):
        with pytest.raises(ConfigError):
            PipelineConfig(alpha=2.0)

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError):
            PipelineConfig.from_json({"no_such_option": 1})

    def test_missing_path_rejected(self):
        with pytest.raises(ConfigError):
            PipelineConfig(geo_table_path="/does/not/exist.tsv")

    def test_target_encoding_needs_target(self):
        with pytest.raises(ConfigError):
            PipelineConfig(use_target_encoding=True)


class TestRunPipeline:
    def test_all_numeric_input_passes_through(self):
        t = Table((Column("a", (1, 2, 3)), Column("b", (0.5, 1.5, 2.5))))
        matrix, report = run_pipeline(t, PipelineConfig())
        assert isinstance(matrix, EncodedMatrix)
        assert matrix.values.shape == (3, 2)
        assert matrix.values[:, 0].tolist() == [1.0, 2.0, 3.0]
        assert matrix.values[:, 1].tolist() == [0.5, 1.5, 2.5]
        text_cols = [c for c in report.columns
                     if c.winner not in ("integer", "float")]
        assert not text_cols

    def test_day_column_fully_numeric_output(self):
        t = Table((Column("d", ("Monday", "Tuesday", "Friday", "Monday")),))
        matrix, _ = run_pipeline(t, PipelineConfig())
        assert isinstance(matrix, EncodedMatrix)
        assert not np.isnan(matrix.values).any()

    def test_output_is_nan_free(self, small_run):
        _, _, matrix, _ = small_run
        assert not np.isnan(matrix.values).any()

    def test_report_covers_every_column_once(self, small_run):
        table, _, _, report = small_run
        assert [c.name for c in report.columns] == [c.name for c in table.columns]

    def test_winners_match_column_construction(self, small_run):
        _, _, _, report = small_run
        expected = {
            "user_email": "email", "visit_day": "day", "joined": "month",
            "location": "coordinate", "homepage": "url",
            "image_path": "filepath", "company_size": "numerical",
            "review": "sentence", "postcode": "zipcode",
            "opinion": "standard", "city": "standard",
        }
        for name, kind in expected.items():
            assert report.column(name).winner == kind, name

    def test_stat_types_assigned_to_standard_columns(self, small_run):
        _, _, _, report = small_run
        assert report.column("opinion").stat_type == "ordinal"
        assert report.column("city").stat_type == "nominal"
        assert report.column("user_email").stat_type is None

    def test_planted_typos_all_logged(self, small_run):
        _, planted, _, report = small_run
        fixed = {(e["column"], e["row"])
                 for e in report.repair["entries"]
                 if e["action"] == "typo_fixed"}
        for typo in planted["typos"]:
            assert (typo["column"], typo["row"]) in fixed

    def test_planted_anomalies_all_flagged(self, small_run):
        _, planted, _, report = small_run
        for anomaly in planted["anomalies"]:
            rows = report.column(anomaly["column"]).anomaly_rows
            assert anomaly["row"] in rows, anomaly

    def test_missingness_diagnosed(self, small_run):
        _, _, _, report = small_run
        assert report.missingness["mechanism"] in ("mcar", "mar", "mnar")
        assert 0.0 <= report.missingness["p_value"] <= 1.0

    def test_timings_for_every_stage(self, small_run):
        _, _, _, report = small_run
        assert set(report.timings) == {"infer", "clean", "reinfer", "process",
                                       "stattype", "encode"}

    def test_determinism_across_runs(self):
        table, _ = demo_table(seed=3, n_rows=80)
        m1, _ = run_pipeline(table, PipelineConfig(seed=11))
        m2, _ = run_pipeline(table, PipelineConfig(seed=11))
        assert np.array_equal(m1.values, m2.values)
        assert m1.output_names() == m2.output_names()

    def test_seed_changes_hash_based_encoders(self):
        table, _ = demo_table(seed=3, n_rows=80)
        m1, _ = run_pipeline(table, PipelineConfig(seed=1))
        m2, _ = run_pipeline(table, PipelineConfig(seed=2))
        assert not np.array_equal(m1.values, m2.values)

    def test_no_encode_returns_processed_table(self):
        table, _ = demo_table(seed=0, n_rows=60)
        out, report = run_pipeline(table, PipelineConfig(encode=False))
        assert isinstance(out, Table)
        names = [c.name for c in out.columns]
        # zip text retained plus enrichment columns appended
        assert "postcode" in names
        assert {"postcode_lat", "postcode_lon", "postcode_ecef_x",
                "postcode_ecef_y", "postcode_ecef_z",
                "postcode_country"} <= set(names)
        zips = [v for v in out.column("postcode").cells if v is not None]
        assert any(isinstance(v, str) for v in zips)

    def test_encoder_override_forces_choice(self):
        t = Table((Column("c", tuple("abcdefgh" * 5)),))
        cfg = PipelineConfig(encoder_overrides={"c": "minhash"}, minhash_k=8)
        matrix, report = run_pipeline(t, cfg)
        assert report.column("c").encoders_used == ["minhash"]
        assert matrix.values.shape[1] == 8

    def test_target_encoding_via_override(self):
        t = Table((Column("c", ("a", "b", "a", "b")),
                   Column("y", (1.0, 5.0, 3.0, 7.0))))
        cfg = PipelineConfig(encoder_overrides={"c": "target_mean"},
                             use_target_encoding=True, target_column="y")
        matrix, _ = run_pipeline(t, cfg)
        assert matrix.values[:, 0].tolist() == [2.0, 6.0, 2.0, 6.0]

    def test_disabled_machine_downgrades_column(self):
        t = Table((Column("z", ("SS2 6ST", "EC1A 1BB", "M1 1AE") * 4),))
        cfg = PipelineConfig(disabled_machines=("zipcode",))
        _, report = run_pipeline(t, cfg)
        assert report.column("z").winner != "zipcode"

    def test_all_missing_column_dropped_with_warning(self):
        t = Table((Column("gone", (None, None, None)),
                   Column("keep", (1.0, 2.0, 3.0))))
        matrix, report = run_pipeline(t, PipelineConfig())
        assert matrix.values.shape == (3, 1)
        assert any("gone" in w for w in report.warnings)

    def test_report_is_json_serializable(self, small_run, tmp_path):
        import json
        _, _, _, report = small_run
        path = tmp_path / "r.json"
        report.write(path)
        doc = json.loads(path.read_text())
        assert doc["format_version"] == 1
        assert len(doc["columns"]) == doc["n_columns"]

    def test_data_dir_env_var_overrides_geo_table(self, tmp_path, monkeypatch):
        # a postal table found via the environment directory takes priority
        (tmp_path / "postal_codes.tsv").write_text("XX\tQ1\t10.0\t20.0\n")
        monkeypatch.setenv("STRINGKIT_DATA_DIR", str(tmp_path))
        t = Table((Column("z", ("SS2 6ST", "EC1A 1BB", "M1 1AE")),))
        out, report = run_pipeline(t, PipelineConfig(encode=False))
        lat = out.column("z_lat")
        assert all(v is None for v in lat.cells)  # all misses in the tiny table
        assert any("not in the geo table" in n
                   for n in report.column("z").notes)

    def test_column_failure_downgrades_instead_of_aborting(self, monkeypatch):
        # a processor that blows up must cost only its own column
        from stringkit import pipeline as pl

        def boom(col, ctx):
            raise RuntimeError("synthetic processor failure")

        monkeypatch.setitem(pl._PROCESSORS, "day", boom)
        t = Table((Column("d", ("Monday", "Tuesday", "Friday") * 5),
                   Column("v", tuple(float(i) for i in range(15)))))
        matrix, report = run_pipeline(t, PipelineConfig(seed=1))
        assert not np.isnan(matrix.values).any()
        assert any("synthetic processor failure" in w for w in report.warnings)
        # the day column still produced encoded output via the fallback
        assert report.column("d").outputs

    def test_custom_noun_list_via_config(self, tmp_path):
        nouns = tmp_path / "nouns.txt"
        nouns.write_text("gizmo\n")
        stops = tmp_path / "stopwords.txt"
        stops.write_text("the\na\nvery\nis\nof\nand\nwith\nthis\nhas\n")
        t = Table((Column("s", ("the gizmo is very shiny and red today",
                                "a gizmo of chrome with red paint inside") * 4),))
        cfg = PipelineConfig(encode=False, nouns_path=str(nouns),
                             stopwords_path=str(stops))
        out, report = run_pipeline(t, cfg)
        assert report.column("s").winner == "sentence"
        assert all("gizmo" in v for v in out.column("s").cells)
