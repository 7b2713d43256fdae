"""Embeddings, the eight column signals, and the boosting classifier."""

import json

import numpy as np
import pytest

from stringkit.embeddings import (DimensionMismatchError, EmbeddingStore,
                                  embedding_dispersion, load_embeddings)
from stringkit.gbc import (DegenerateLabelsError, GbcModel, SchemaError,
                           load_model, predict_stat_type, save_model,
                           train_gbc)
from stringkit.ordinality import (OrdinalityFeatures, default_keywords,
                                  extract_features, shared_substring)
from stringkit.table import Column


class TestEmbeddingStore:
    def test_load_two_line_file(self, tmp_path):
        p = tmp_path / "vec.txt"
        p.write_text("hello " + " ".join(["0.5"] * 50) + "\n"
                     "world " + " ".join(["-1.0"] * 50) + "\n")
        store = load_embeddings(p)
        assert len(store) == 2
        assert store.dimension == 50
        assert store.lookup("hello")[0] == 0.5

    def test_dimension_mismatch_detected(self, tmp_path):
        p = tmp_path / "vec.txt"
        p.write_text("a 1.0 2.0\nb 1.0\n")
        with pytest.raises(DimensionMismatchError):
            load_embeddings(p)

    def test_duplicate_token_first_wins(self, tmp_path):
        p = tmp_path / "vec.txt"
        p.write_text("a 1.0\na 2.0\n")
        store = load_embeddings(p)
        assert store.lookup("a")[0] == 1.0

    def test_fallback_is_stable_per_token(self):
        store = EmbeddingStore(dimension=8, fallback_seed=3)
        v1 = store.lookup("zyxwv")
        v2 = store.lookup("zyxwv")
        assert np.array_equal(v1, v2)
        assert not np.array_equal(v1, store.lookup("other"))

    def test_fallback_depends_on_seed(self):
        a = EmbeddingStore(dimension=8, fallback_seed=0).lookup("tok")
        b = EmbeddingStore(dimension=8, fallback_seed=1).lookup("tok")
        assert not np.array_equal(a, b)


class TestEmbeddingDispersion:
    def test_identical_entries_zero(self):
        store = EmbeddingStore(dimension=4)
        assert embedding_dispersion({"same"}, store) == 0.0

    def test_single_entry_zero(self):
        store = EmbeddingStore(dimension=4)
        assert embedding_dispersion({"lonely"}, store) == 0.0

    def test_two_point_arithmetic_oracle(self):
        store = EmbeddingStore(dimension=2, vectors={
            "aa": np.array([1.0, 3.0]), "bb": np.array([3.0, 7.0])})
        # points (1,3) and (3,7): per-dimension population variances are
        # 1.0 and 4.0, so the mean is 2.5
        assert embedding_dispersion({"aa", "bb"}, store) == pytest.approx(2.5)

    def test_multi_word_entries_average_their_words(self):
        store = EmbeddingStore(dimension=1, vectors={
            "a": np.array([0.0]), "b": np.array([2.0]), "c": np.array([4.0])})
        # entries "a b" -> 1.0 and "c" -> 4.0: variance of {1, 4} = 2.25
        assert embedding_dispersion({"a b", "c"}, store) == pytest.approx(2.25)


class TestExtractFeatures:
    def test_unique_ratio_exact(self):
        cells = tuple(["a", "b", "c", "d", "e"] * 20)
        f = extract_features(Column("col", cells))
        assert f.n_rows == 100
        assert f.n_unique == 5
        assert f.unique_ratio == pytest.approx(0.05)

    def test_name_keyword_two_way_containment(self):
        col = Column("x", ("p", "q"))
        assert extract_features(col, "grade").name_is_ordinal
        assert extract_features(col, "damage_grade").name_is_ordinal
        assert extract_features(col, "city").name_is_nominal
        assert not extract_features(col, "widget").name_is_ordinal

    def test_likert_values_flagged(self):
        col = Column("x", ("disagree", "agree", "wholeheartedly agree"))
        f = extract_features(col)
        assert f.values_have_ordinal_keywords
        assert f.values_share_substring  # all contain "agree"

    def test_row_permutation_invariance(self):
        rng = np.random.default_rng(0)
        values = [rng.choice(["low", "mid", "high"]) for _ in range(60)]
        f1 = extract_features(Column("c", tuple(values)))
        rng.shuffle(values)
        f2 = extract_features(Column("c", tuple(values)))
        assert f1 == f2

    def test_duplicating_rows_only_changes_n_rows(self):
        cells = ("red", "blue", "red", "green")
        f1 = extract_features(Column("c", cells))
        f2 = extract_features(Column("c", cells * 2))
        assert f2.n_rows == 2 * f1.n_rows
        assert f2.n_unique == f1.n_unique
        assert f2.unique_ratio == pytest.approx(f1.unique_ratio / 2)
        assert f2.embedding_dispersion == pytest.approx(f1.embedding_dispersion)
        assert f2.values_share_substring == f1.values_share_substring

    def test_keyword_flag_monotone_under_new_values(self):
        base = ("foo", "bar")
        f1 = extract_features(Column("c", base))
        f2 = extract_features(Column("c", base + ("agree",)))
        assert not f1.values_have_ordinal_keywords
        assert f2.values_have_ordinal_keywords

    def test_vector_layout(self):
        f = extract_features(Column("grade", ("low", "high")))
        v = f.to_vector()
        assert v.shape == (8,)
        assert v[0] == 2 and v[1] == 2


class TestSharedSubstring:
    def test_agree_family(self):
        assert shared_substring(["disagree", "agree", "wholeheartedly agree"])

    def test_unrelated_words(self):
        assert not shared_substring(["red", "blue", "green", "mauve", "pink"])

    def test_coverage_threshold(self):
        values = ["stage one", "stage two", "stage three", "other", "thing"]
        # "stage" covers 3/5 = 60%
        assert shared_substring(values)


class TestGbc:
    def test_separable_data_fits_exactly(self):
        X = [[float(i), 0, 0, 0, 0, 0, 0, 0] for i in range(12)]
        y = ["nominal"] * 6 + ["ordinal"] * 6
        model = train_gbc(X, y, n_trees=20)
        assert all(predict_stat_type(model, x)[0] == lab
                   for x, lab in zip(X, y))

    def test_training_loss_non_increasing(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(80, 8))
        y = ["ordinal" if x[2] + 0.2 * rng.normal() > 0 else "nominal"
             for x in X]
        model = train_gbc(X, y)
        losses = model.train_loss
        assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))

    def test_single_class_rejected(self):
        with pytest.raises(DegenerateLabelsError):
            train_gbc([[0] * 8, [1] * 8], ["ordinal", "ordinal"])

    def test_zero_tree_model_returns_prior(self):
        model = GbcModel(base_score=0.0)
        label, prob = predict_stat_type(model, [0] * 8)
        assert prob == pytest.approx(0.5)
        assert label == "ordinal"  # ties resolve to ordinal at p >= 0.5

    def test_probability_in_open_interval(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(40, 8))
        y = ["ordinal" if v > 0 else "nominal" for v in X[:, 0]]
        model = train_gbc(X, y, n_trees=30)
        probs = model.predict_proba(rng.normal(size=(200, 8)))
        assert np.all(probs > 0) and np.all(probs < 1)

    def test_deterministic_given_order(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(50, 8))
        y = ["ordinal" if v > 0 else "nominal" for v in X[:, 3]]
        m1 = train_gbc(X, y)
        m2 = train_gbc(X, y)
        assert m1.to_json() == m2.to_json()


class TestModelSerialization:
    def test_round_trip_predictions_identical(self, tmp_path):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(60, 8))
        y = ["ordinal" if v > 0 else "nominal" for v in X[:, 1]]
        model = train_gbc(X, y)
        path = tmp_path / "model.json"
        save_model(model, path)
        back = load_model(path)
        probe = rng.normal(size=(100, 8))
        assert np.array_equal(model.predict_proba(probe),
                              back.predict_proba(probe))

    def test_empty_model_round_trips(self, tmp_path):
        model = GbcModel(base_score=-0.25)
        path = tmp_path / "m.json"
        save_model(model, path)
        assert load_model(path).base_score == -0.25

    def test_corrupted_file_raises_schema_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(SchemaError):
            load_model(path)

    def test_wrong_version_rejected(self, tmp_path):
        path = tmp_path / "v99.json"
        path.write_text(json.dumps({"format_version": 99, "trees": [],
                                    "learning_rate": 0.1, "base_score": 0,
                                    "n_features": 8}))
        with pytest.raises(SchemaError):
            load_model(path)

    def test_bad_feature_index_rejected(self, tmp_path):
        doc = {"format_version": 1, "learning_rate": 0.1, "base_score": 0.0,
               "n_features": 8,
               "trees": [{"feature": 12, "threshold": 0.0,
                          "left": {"value": 0.0}, "right": {"value": 0.0}}]}
        path = tmp_path / "badidx.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(SchemaError):
            load_model(path)
