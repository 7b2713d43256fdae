"""Missingness diagnosis, imputation, typos, outlier repair."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stringkit.cleaning import (MCAR, MAR, MissingnessDiagnosis, correct_typos,
                                impute, levenshtein, littles_test,
                                repair_type_outliers)
from stringkit.inference import infer_column
from stringkit.table import Column, Table


def _numeric_table(X, mask):
    cols = []
    for j in range(X.shape[1]):
        cells = tuple(None if mask[i, j] else float(X[i, j])
                      for i in range(X.shape[0]))
        cols.append(Column(f"c{j}", cells))
    return Table(tuple(cols))


class TestLittlesTest:
    def test_complete_data_is_mcar_with_zero_statistic(self):
        t = Table((Column("a", (1.0, 2.0, 3.0, 4.0)),
                   Column("b", (2.0, 1.0, 4.0, 3.0))))
        d = littles_test(t)
        assert d.mechanism == MCAR
        assert d.statistic == pytest.approx(0.0, abs=1e-12)
        assert d.dof == 0
        assert d.p_value == 1.0

    def test_no_numeric_columns_defaults_to_mcar(self):
        t = Table((Column("s", ("a", "b", None)),))
        d = littles_test(t)
        assert d.mechanism == MCAR
        assert d.p_value == 1.0

    def test_invalid_alpha_rejected(self):
        t = Table((Column("a", (1.0, 2.0)),))
        with pytest.raises(ValueError):
            littles_test(t, alpha=1.5)

    def test_mcar_null_calibration(self):
        """Monte-Carlo oracle: under MCAR the test rejects at roughly the
        nominal rate."""
        rng = np.random.default_rng(42)
        rejections = 0
        trials = 200
        for _ in range(trials):
            X = rng.normal(size=(200, 3))
            mask = rng.random((200, 3)) < 0.2
            d = littles_test(_numeric_table(X, mask))
            rejections += d.p_value <= 0.05
        assert 0.02 <= rejections / trials <= 0.10

    def test_mar_alternative_power(self):
        """Missingness of B forced by the value of A: detected as not MCAR
        in at least 90% of seeded trials."""
        detected = 0
        mar_label = 0
        trials = 200
        for s in range(trials):
            rng = np.random.default_rng(10_000 + s)
            a = rng.normal(size=200)
            b = 0.8 * a + 0.6 * rng.normal(size=200)
            med = np.median(a)
            t = Table((
                Column("a", tuple(float(x) for x in a)),
                Column("b", tuple(None if a[i] > med else float(b[i])
                                  for i in range(200))),
            ))
            d = littles_test(t)
            detected += d.p_value < 0.05
            mar_label += d.mechanism == MAR
        assert detected / trials >= 0.9
        assert mar_label / trials >= 0.9

    def test_statistic_invariant_under_row_permutation(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(60, 3))
        mask = rng.random((60, 3)) < 0.25
        d1 = littles_test(_numeric_table(X, mask))
        perm = rng.permutation(60)
        d2 = littles_test(_numeric_table(X[perm], mask[perm]))
        assert d1.statistic == pytest.approx(d2.statistic, rel=1e-9)
        assert d1.dof == d2.dof


class TestImpute:
    def test_mcar_mean_for_numeric(self):
        t = Table((Column("n", (1, None, 3)),))
        out, log = impute(t, MissingnessDiagnosis(MCAR, 0.0, 0, 1.0))
        assert out.column("n").cells == (1, 2, 3)
        assert len(log.entries) == 1
        assert log.entries[0].action == "imputed"

    def test_mcar_mode_for_text(self):
        t = Table((Column("s", ("a", "a", "b", None)),))
        out, _ = impute(t, MissingnessDiagnosis(MCAR, 0.0, 0, 1.0))
        assert out.column("s").cells == ("a", "a", "b", "a")

    def test_round_robin_matches_least_squares_oracle(self):
        # two perfectly correlated columns: the imputed value must match
        # the closed-form linear prediction
        a = tuple(float(i) for i in range(20))
        b = tuple(2.0 * v + 1.0 for v in a)
        b = b[:7] + (None,) + b[8:]
        t = Table((Column("a", a), Column("b", b)))
        out, _ = impute(t, MissingnessDiagnosis(MAR, 9.0, 2, 0.001))
        expected = 2.0 * a[7] + 1.0
        assert out.column("b").cells[7] == pytest.approx(expected, abs=1e-6)

    def test_no_missing_cells_after_impute(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(40, 2))
        mask = rng.random((40, 2)) < 0.3
        t = _numeric_table(X, mask)
        t = Table(t.columns + (Column("s", tuple(
            None if rng.random() < 0.3 else rng.choice(["x", "y", "z"])
            for _ in range(40))),))
        for mech in (MCAR, MAR):
            out, _ = impute(t, MissingnessDiagnosis(mech, 1.0, 1, 0.5))
            for col in out.columns:
                assert all(v is not None for v in col.cells), col.name

    def test_all_missing_column_dropped_with_warning(self):
        t = Table((Column("gone", (None, None)), Column("a", (1.0, 2.0))))
        out, log = impute(t, MissingnessDiagnosis(MCAR, 0.0, 0, 1.0))
        assert [c.name for c in out.columns] == ["a"]
        assert any("gone" in w for w in log.warnings)

    def test_text_target_conditional_mode(self):
        # text label follows the sign of x; the missing label at x=10
        # should copy its numeric neighborhood, not the global mode
        x = tuple(float(v) for v in (-3, -2, -1, -4, -5, 8, 9, 10, 11, 12))
        s = ("neg", "neg", "neg", "neg", "neg", "pos", "pos", None, "pos", "pos")
        t = Table((Column("x", x), Column("s", s)))
        out, _ = impute(t, MissingnessDiagnosis(MAR, 5.0, 1, 0.01))
        assert out.column("s").cells[7] == "pos"


def _lev_oracle(a, b):
    # quadratic reference implementation
    m, n = len(a), len(b)
    D = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        D[i][0] = i
    for j in range(n + 1):
        D[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            D[i][j] = min(D[i - 1][j] + 1, D[i][j - 1] + 1,
                          D[i - 1][j - 1] + (a[i - 1] != b[j - 1]))
    return D[m][n]


class TestLevenshtein:
    def test_identity(self):
        assert levenshtein("agree", "agree") == 0

    def test_single_deletion(self):
        assert levenshtein("agree", "agre") == 1

    def test_empty_vs_word(self):
        assert levenshtein("", "abc") == 3

    @given(st.text(max_size=12), st.text(max_size=12))
    @settings(max_examples=200)
    def test_matches_oracle(self, a, b):
        assert levenshtein(a, b) == _lev_oracle(a, b)

    @given(st.text(max_size=10), st.text(max_size=10), st.text(max_size=10))
    @settings(max_examples=100)
    def test_metric_properties(self, a, b, c):
        assert levenshtein(a, b) == levenshtein(b, a)
        assert (levenshtein(a, b) == 0) == (a == b)
        assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


class TestCorrectTypos:
    def test_dominant_near_duplicate_rewritten(self):
        col = Column("state", tuple(["California"] * 99 + ["Califronia"]))
        out, log = correct_typos(col)
        assert set(out.cells) == {"California"}
        assert len(log.entries) == 1
        assert log.entries[0].old == "Califronia"

    def test_no_rewrite_without_frequency_dominance(self):
        col = Column("x", tuple(["cat"] * 5 + ["car"] * 5))
        out, log = correct_typos(col)
        assert out.cells == col.cells
        assert not log.entries

    def test_ambiguous_candidates_left_alone(self):
        col = Column("y", tuple(["male"] * 99 + ["mole"] * 99 + ["mqle"]))
        out, log = correct_typos(col)
        assert out.cells[-1] == "mqle"
        assert not log.entries

    def test_distance_bound_respected(self):
        col = Column("z", tuple(["abcdef"] * 50 + ["xyz"]))
        out, _ = correct_typos(col, max_dist=2)
        assert out.cells[-1] == "xyz"

    def test_idempotent(self):
        rng = np.random.default_rng(11)
        values = (["spring"] * 60 + ["sprng"] + ["summer"] * 60 + ["sumer"]
                  + ["autumn"] * 9 + ["autumm"] * 5)
        rng.shuffle(values)
        col = Column("season", tuple(values))
        once, _ = correct_typos(col)
        twice, log2 = correct_typos(once)
        assert once.cells == twice.cells
        assert not log2.entries


class TestRepairTypeOutliers:
    def test_numeric_string_coerced_in_integer_column(self, registry):
        cells = tuple(range(38)) + ("12", ">10")
        col = Column("m", cells)
        profile = infer_column(col, registry)
        out, log = repair_type_outliers(col, profile, registry)
        assert out.cells[38] == 12
        assert out.cells[39] is None  # unparseable: blanked for re-imputation
        actions = {e.action for e in log.entries}
        assert actions == {"outlier_coerced"}

    def test_number_in_email_column_blanked(self, registry):
        cells = tuple(f"u{i}@m.com" for i in range(99)) + (12345,)
        col = Column("e", cells)
        profile = infer_column(col, registry)
        out, log = repair_type_outliers(col, profile, registry)
        assert out.cells[99] is None
        assert len(log.entries) == 1

    def test_bare_number_in_numerical_column_blanked(self, registry):
        # "17" is not a numerical-string form, so the anomaly is blanked
        cells = tuple(["100 to 200", "1-5", "3:9"] * 20) + (17,)
        col = Column("r", cells)
        profile = infer_column(col, registry)
        assert profile.winner == "numerical"
        assert 60 in profile.anomaly_rows
        out, _ = repair_type_outliers(col, profile, registry)
        assert out.cells[60] is None

    def test_clean_column_untouched(self, registry):
        col = Column("d", ("Monday", "Friday"))
        profile = infer_column(col, registry)
        out, log = repair_type_outliers(col, profile, registry)
        assert out.cells == col.cells
        assert not log.entries
