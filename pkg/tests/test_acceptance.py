"""Acceptance criteria, one test per criterion.

Each test prints a single PASS line once its assertions hold (run with
``pytest -s`` or ``-v`` to see them), and pins the tolerances stated in
the project requirements. The final criterion documents what is out of
scope rather than asserting behavior.
"""

import json
import math
import random
import time

import numpy as np
import pytest

from stringkit.cleaning import littles_test
from stringkit.corpus import (demo_table, golden_string_corpus, likert_suite,
                              stattype_corpus)
from stringkit.encoders import (baseline_ordinal_encode, bundled_lexicon,
                                generalized_kl, gamma_poisson_fit, jaccard,
                                minhash_signature, ngram_set, ordering_of,
                                ordinal_encode, similarity_encode,
                                spearman_rank_correlation)
from stringkit.gbc import predict_stat_type, train_gbc
from stringkit.inference import infer_column
from stringkit.ordinality import extract_features
from stringkit.processing import dms_to_decimal
from stringkit.table import Column, Table, read_delimited, write_delimited


def _report(line):
    print(f"\nACCEPTANCE {line}")


def test_criterion_1_string_type_inference(registry):
    """Golden-corpus type assignment accuracies and zero false positives."""
    corpus = golden_string_corpus(seed=0)
    per_kind = {}
    t0 = time.perf_counter()
    for lc in corpus:
        profile = infer_column(lc.column, registry)
        per_kind.setdefault(lc.label, []).append(profile.winner)
    elapsed = time.perf_counter() - t0

    exact = ("coordinate", "day", "email", "month", "numerical", "url",
             "zipcode")
    accuracies = {}
    for kind, winners in per_kind.items():
        want = kind
        accuracies[kind] = sum(w == want for w in winners) / len(winners)

    for kind in exact:
        assert len(per_kind[kind]) >= 20
        assert accuracies[kind] == 1.0, (kind, accuracies[kind])
    for kind in ("sentence", "filepath"):
        assert len(per_kind[kind]) >= 20
        assert accuracies[kind] >= 0.75, (kind, accuracies[kind])

    # negatives must never be classified as a special type
    negative_hits = [w for w in per_kind["standard"] if w != "standard"]
    assert negative_hits == []
    assert elapsed < 10.0, f"inference took {elapsed:.1f}s"
    _report(f"1 string-type inference: PASS "
            f"(exact kinds 1.0, sentence {accuracies['sentence']:.2f}, "
            f"filepath {accuracies['filepath']:.2f}, "
            f"0 false positives, {elapsed:.2f}s)")


def test_criterion_2_statistical_type_loocv():
    """Leave-one-out accuracy and F1 on the annotated 149-column corpus."""
    corpus = stattype_corpus(seed=0)
    assert len(corpus) == 149
    labels = [lc.label for lc in corpus]
    assert labels.count("ordinal") == 81 and labels.count("nominal") == 68

    X = [extract_features(lc.column, lc.name).to_vector() for lc in corpus]
    tp = fp = fn = tn = 0
    for i in range(len(corpus)):
        model = train_gbc(X[:i] + X[i + 1:], labels[:i] + labels[i + 1:])
        pred, _ = predict_stat_type(model, X[i])
        if labels[i] == "ordinal":
            tp += pred == "ordinal"
            fn += pred == "nominal"
        else:
            tn += pred == "nominal"
            fp += pred == "ordinal"

    accuracy = (tp + tn) / len(corpus)
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    f1 = 2 * precision * recall / (precision + recall)
    off_diagonal = (fp + fn) / len(corpus)

    assert accuracy >= 0.90, accuracy
    assert f1 >= 0.90, f1
    assert off_diagonal <= 0.10, off_diagonal
    _report(f"2 statistical-type LOOCV: PASS (accuracy {accuracy:.3f}, "
            f"F1 {f1:.3f}, off-diagonal {off_diagonal:.3f}, "
            f"confusion [[{tp} {fn}] [{fp} {tn}]])")


def test_criterion_3_ordinal_ordering():
    """Intensity ordering beats the lexicographic baseline on the suite."""
    suite = likert_suite()
    assert len(suite) >= 15
    lexicon = bundled_lexicon()
    rho_lex, rho_base = [], []
    for name, truth in suite:
        col = Column(name, tuple(truth))
        rho_lex.append(spearman_rank_correlation(
            ordering_of(ordinal_encode(col, lexicon), col), list(truth)))
        rho_base.append(spearman_rank_correlation(
            ordering_of(baseline_ordinal_encode(col), col), list(truth)))
        if name == "agreement_5":
            assert rho_lex[-1] == 1.0, "canonical 5-point scale must be exact"

    mean_lex = sum(rho_lex) / len(rho_lex)
    mean_base = sum(rho_base) / len(rho_base)
    assert mean_lex >= 0.7, mean_lex
    assert mean_lex > mean_base
    _report(f"3 ordinal ordering: PASS (intensity {mean_lex:.4f} vs "
            f"baseline {mean_base:.4f} over {len(suite)} scales)")


def test_criterion_4_dms_conversion():
    """1000 random tuples against an independent formula evaluation."""
    rng = random.Random(12345)
    worst = 0.0
    for _ in range(1000):
        d = rng.randint(0, 179)
        m = rng.randint(0, 59)
        s = rng.uniform(0, 59.9999)
        c = rng.choice("NESW")
        got = dms_to_decimal(d, m, s, c)
        sign = -1.0 if c in "SW" else 1.0
        expected = sign * (d + m / 60.0 + s / 3600.0)
        worst = max(worst, abs(got - expected))
    assert worst <= 1e-9, worst
    _report(f"4 DMS conversion: PASS (max abs error {worst:.2e})")


def test_criterion_5_littles_test_calibration():
    """Null rejection rate within [0.02, 0.10]; MAR power at least 0.9."""
    rng = np.random.default_rng(42)
    trials = 200
    rejections = 0
    for _ in range(trials):
        X = rng.normal(size=(200, 3))
        mask = rng.random((200, 3)) < 0.2
        cols = tuple(
            Column(f"c{j}", tuple(None if mask[i, j] else float(X[i, j])
                                  for i in range(200)))
            for j in range(3))
        rejections += littles_test(Table(cols)).p_value <= 0.05
    rate = rejections / trials
    assert 0.02 <= rate <= 0.10, rate

    power_hits = 0
    for s in range(trials):
        r = np.random.default_rng(10_000 + s)
        a = r.normal(size=200)
        b = 0.8 * a + 0.6 * r.normal(size=200)
        med = np.median(a)
        t = Table((
            Column("a", tuple(float(x) for x in a)),
            Column("b", tuple(None if a[i] > med else float(b[i])
                              for i in range(200))),
        ))
        d = littles_test(t)
        power_hits += (d.p_value < 0.05) and (d.mechanism != "mcar")
    power = power_hits / trials
    assert power >= 0.9, power
    _report(f"5 Little's test: PASS (null rejection {rate:.3f}, "
            f"MAR power {power:.2f})")


def test_criterion_6_encoder_properties():
    """Min-hash collision calibration, Gamma-Poisson descent, similarity."""
    # min-hash: component collision rate vs exact trigram Jaccard, 3 sigma
    rng = random.Random(777)
    alphabet = "abcdefghijklmnopqrstuvwxyz"
    k = 256
    checked = 0
    for _ in range(100):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(3, 12)))
        # mutate a to get related strings with nontrivial overlap
        b = list(a)
        for _ in range(rng.randint(0, 4)):
            b[rng.randrange(len(b))] = rng.choice(alphabet)
        b = "".join(b)
        truth = jaccard(ngram_set(a), ngram_set(b))
        sa = minhash_signature(a, k=k, seed=2024)
        sb = minhash_signature(b, k=k, seed=2024)
        estimate = float((sa == sb).mean())
        sigma = math.sqrt(truth * (1 - truth) / k)
        assert abs(estimate - truth) <= 3 * sigma + 1e-9, (a, b, truth, estimate)
        checked += 1
    assert checked == 100

    # Gamma-Poisson: monotone objective and rank-1 recovery
    rngnp = np.random.default_rng(5)
    V = rngnp.poisson(2.0, size=(25, 40)).astype(float)
    _, _, history = gamma_poisson_fit(V, d=6, iterations=80, seed=1,
                                      return_objective=True)
    assert all(b <= a + 1e-10 for a, b in zip(history, history[1:]))

    V1 = np.outer(rngnp.uniform(0.5, 2.0, size=9),
                  rngnp.uniform(0.5, 2.0, size=14))
    W, A = gamma_poisson_fit(V1, d=1, iterations=100, seed=2)
    kl = generalized_kl(V1, A @ W)
    assert kl <= 1e-6, kl

    # similarity: exact ones on the diagonal
    col = Column("c", ("alpha", "beta", "gamma", "delta"))
    m = similarity_encode(col)
    assert all(m.values[i, i] == 1.0 for i in range(4))
    _report(f"6 encoder properties: PASS (100 min-hash pairs in 3 sigma, "
            f"rank-1 KL {kl:.2e}, unit diagonal)")


def test_criterion_7_end_to_end(tmp_path):
    """CLI run on the bundled 500-row fixture: clean exit, numeric output,
    planted defects flagged, byte-identical reruns, under 60s."""
    from stringkit.cli import main

    table, planted = demo_table(seed=0, n_rows=500)
    input_path = tmp_path / "fixture.csv"
    write_delimited(table, input_path)

    out1, rep1 = tmp_path / "out1.csv", tmp_path / "rep1.json"
    out2, rep2 = tmp_path / "out2.csv", tmp_path / "rep2.json"

    t0 = time.perf_counter()
    code1 = main(["clean", str(input_path), "--out", str(out1),
                  "--report", str(rep1), "--seed", "7"])
    code2 = main(["clean", str(input_path), "--out", str(out2),
                  "--report", str(rep2), "--seed", "7"])
    elapsed = time.perf_counter() - t0

    assert code1 == 0 and code2 == 0
    assert out1.read_bytes() == out2.read_bytes()

    lines = out1.read_text().splitlines()
    assert len(lines) == 501
    values = np.array([[float(x) for x in line.split(",")]
                       for line in lines[1:]])
    assert not np.isnan(values).any()

    report = json.loads(rep1.read_text())
    fixed = {(e["column"], e["row"]) for e in report["repair"]["entries"]
             if e["action"] == "typo_fixed"}
    for typo in planted["typos"]:
        assert (typo["column"], typo["row"]) in fixed, typo
    by_name = {c["name"]: c for c in report["columns"]}
    for anomaly in planted["anomalies"]:
        assert anomaly["row"] in by_name[anomaly["column"]]["anomaly_rows"], anomaly

    assert elapsed < 60.0, elapsed
    _report(f"7 end-to-end: PASS (two runs byte-identical, "
            f"{values.shape[1]} numeric outputs, {elapsed:.1f}s for both)")


def test_criterion_8_out_of_scope_declaration():
    """Downstream model benchmarks on external datasets are explicitly out
    of scope; criteria 1-7 are the property-level replication."""
    _report("8 out-of-scope: downstream benchmark deltas on external "
            "datasets are not reproduced here (external data and learners); "
            "criteria 1-7 stand in")
