"""Command-line interface contracts."""

import json

import pytest

from stringkit.cli import main
from stringkit.corpus import demo_table, write_stattype_corpus_json, stattype_corpus
from stringkit.table import write_delimited


@pytest.fixture(scope="module")
def input_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "in.csv"
    table, _ = demo_table(seed=0, n_rows=80)
    write_delimited(table, path)
    return path


def test_clean_happy_path(input_csv, tmp_path):
    out = tmp_path / "out.csv"
    report = tmp_path / "report.json"
    code = main(["clean", str(input_csv), "--out", str(out),
                 "--report", str(report), "--seed", "5"])
    assert code == 0
    assert out.exists() and report.exists()
    doc = json.loads(report.read_text())
    assert doc["format_version"] == 1
    header = out.read_text().splitlines()[0]
    assert header  # encoded matrix with named columns


def test_clean_deterministic_at_fixed_seed(input_csv, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["clean", str(input_csv), "--out", str(a),
          "--report", str(tmp_path / "ra.json"), "--seed", "7"])
    main(["clean", str(input_csv), "--out", str(b),
          "--report", str(tmp_path / "rb.json"), "--seed", "7"])
    assert a.read_bytes() == b.read_bytes()


def test_clean_header_only_file_succeeds(tmp_path):
    src = tmp_path / "empty.csv"
    src.write_text("a,b,c\n")
    code = main(["clean", str(src), "--out", str(tmp_path / "o.csv"),
                 "--report", str(tmp_path / "r.json")])
    assert code == 0
    doc = json.loads((tmp_path / "r.json").read_text())
    assert len(doc["columns"]) == 3  # every input column still reported


def test_clean_missing_input_is_exit_1(tmp_path):
    code = main(["clean", str(tmp_path / "nope.csv"),
                 "--out", str(tmp_path / "o.csv"),
                 "--report", str(tmp_path / "r.json")])
    assert code == 1


def test_clean_bad_config_is_exit_2(input_csv, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 9}))
    code = main(["clean", str(input_csv), "--out", str(tmp_path / "o.csv"),
                 "--report", str(tmp_path / "r.json"), "--config", str(cfg)])
    assert code == 2


def test_clean_unknown_config_key_is_exit_2(input_csv, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"wat": 1}))
    code = main(["clean", str(input_csv), "--out", str(tmp_path / "o.csv"),
                 "--report", str(tmp_path / "r.json"), "--config", str(cfg)])
    assert code == 2


def test_usage_error_is_exit_2(capsys):
    assert main(["clean"]) == 2
    assert "usage" in capsys.readouterr().err.lower()


def test_no_encode_writes_processed_table(input_csv, tmp_path):
    out = tmp_path / "proc.csv"
    code = main(["clean", str(input_csv), "--out", str(out),
                 "--report", str(tmp_path / "r.json"), "--no-encode"])
    assert code == 0
    header = out.read_text().splitlines()[0].split(",")
    assert "postcode" in header and "postcode_lat" in header


def test_infer_writes_profiles(input_csv, tmp_path):
    report = tmp_path / "profiles.json"
    code = main(["infer", str(input_csv), "--report", str(report)])
    assert code == 0
    doc = json.loads(report.read_text())
    winners = {c["name"]: c["winner"] for c in doc["columns"]}
    assert winners["user_email"] == "email"
    assert winners["visit_day"] == "day"


def test_train_stattype_from_corpus_file(tmp_path):
    corpus_path = tmp_path / "corpus.json"
    full = stattype_corpus(seed=0)
    mixed = full[:20] + full[-20:]  # both classes represented
    write_stattype_corpus_json(corpus_path, mixed)
    model_path = tmp_path / "model.json"
    code = main(["train-stattype", str(corpus_path), "--model", str(model_path)])
    assert code == 0
    doc = json.loads(model_path.read_text())
    assert doc["format_version"] == 1
    assert doc["trees"]


def test_train_stattype_bundled(tmp_path, capsys):
    model_path = tmp_path / "model.json"
    code = main(["train-stattype", "bundled", "--model", str(model_path)])
    assert code == 0
    assert "trained on 149 columns" in capsys.readouterr().out


def test_eval_ordering_prints_comparison(capsys):
    code = main(["eval-ordering", "bundled"])
    assert code == 0
    out = capsys.readouterr().out
    assert "intensity" in out and "baseline" in out and "mean" in out


def test_eval_ordering_from_file(tmp_path, capsys):
    suite = [{"name": "toy", "values_in_order": ["bad", "good"]}]
    path = tmp_path / "suite.json"
    path.write_text(json.dumps(suite))
    assert main(["eval-ordering", str(path)]) == 0
    assert "toy" in capsys.readouterr().out
