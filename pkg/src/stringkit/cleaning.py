"""Missingness diagnosis, imputation, typo correction and outlier repair.

The missingness mechanism is diagnosed with a chi-square test comparing
per-pattern means of the numeric columns against available-case estimates.
Under the completely-at-random hypothesis the statistic is asymptotically
chi-square with ``sum(p_j) - p`` degrees of freedom. A rejected test is
split into at-random vs not-at-random by checking whether any missingness
indicator correlates with an observed numeric column.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2

from . import machines as mk
from .inference import ColumnProfile
from .table import Column, Table, cell_text, is_number

log = logging.getLogger("stringkit")

MCAR = "mcar"
MAR = "mar"
MNAR = "mnar"

IMPUTED = "imputed"
TYPO_FIXED = "typo_fixed"
OUTLIER_COERCED = "outlier_coerced"

#: |point-biserial correlation| beyond which missingness is considered
#: explained by an observed column (at-random rather than not-at-random).
MAR_CORRELATION = 0.2

_RIDGE = 1e-6


@dataclass(frozen=True)
class MissingnessDiagnosis:
    mechanism: str
    statistic: float
    dof: int
    p_value: float


@dataclass(frozen=True)
class RepairEntry:
    column: str
    row: int
    action: str
    old: object
    new: object


@dataclass
class RepairLog:
    entries: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def add(self, column, row, action, old, new):
        self.entries.append(RepairEntry(column, row, action, old, new))

    def warn(self, message: str):
        self.warnings.append(message)
        log.warning(message)

    def extend(self, other: "RepairLog"):
        self.entries.extend(other.entries)
        self.warnings.extend(other.warnings)

    def to_json(self):
        return {
            "entries": [
                {"column": e.column, "row": e.row, "action": e.action,
                 "old": e.old, "new": e.new}
                for e in self.entries
            ],
            "warnings": list(self.warnings),
        }


def _numeric_columns(table: Table):
    """Columns whose observed cells are all numeric (and at least one)."""
    out = []
    for c in table.columns:
        obs = [v for v in c.cells if v is not None]
        if obs and all(is_number(v) for v in obs):
            out.append(c)
    return out


def _numeric_matrix(cols):
    n = len(cols[0])
    X = np.full((n, len(cols)), np.nan)
    for j, c in enumerate(cols):
        for i, v in enumerate(c.cells):
            if v is not None:
                X[i, j] = float(v)
    return X


def littles_test(table: Table, alpha: float = 0.05) -> MissingnessDiagnosis:
    """Chi-square test of the completely-at-random hypothesis.

    Rows are grouped by their missingness pattern over the numeric columns;
    the statistic accumulates the Mahalanobis distance of each pattern's
    observed means from the available-case means, under the pairwise-
    complete covariance. Falls back to MCAR when there is nothing to test.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha out of range: {alpha}")
    cols = _numeric_columns(table)
    if not cols:
        log.warning("littles_test: no numeric columns; defaulting to MCAR")
        return MissingnessDiagnosis(MCAR, 0.0, 0, 1.0)

    X = _numeric_matrix(cols)
    n, p = X.shape
    observed = ~np.isnan(X)

    mu = np.array([X[observed[:, j], j].mean() if observed[:, j].any() else 0.0
                   for j in range(p)])
    S = _pairwise_covariance(X, observed, mu)

    patterns = {}
    for i in range(n):
        patterns.setdefault(tuple(observed[i]), []).append(i)

    d2 = 0.0
    dof = -p
    for mask, rows in sorted(patterns.items()):
        idx = [j for j, m in enumerate(mask) if m]
        if not idx:
            continue
        dof += len(idx)
        sub = X[np.ix_(rows, idx)]
        diff = sub.mean(axis=0) - mu[idx]
        cov = S[np.ix_(idx, idx)]
        try:
            sol = np.linalg.solve(cov, diff)
            if not np.all(np.isfinite(sol)):
                raise np.linalg.LinAlgError("non-finite solve")
        except np.linalg.LinAlgError:
            log.warning("littles_test: singular covariance, adding ridge")
            sol = np.linalg.solve(cov + _RIDGE * np.eye(len(idx)), diff)
        d2 += len(rows) * float(diff @ sol)

    dof = max(dof, 0)
    d2 = max(d2, 0.0)
    p_value = float(chi2.sf(d2, dof)) if dof > 0 else 1.0

    if p_value > alpha:
        mechanism = MCAR
    else:
        mechanism = MAR if _missingness_correlated(X, observed) else MNAR
    return MissingnessDiagnosis(mechanism, d2, dof, p_value)


def _pairwise_covariance(X, observed, mu):
    p = X.shape[1]
    S = np.zeros((p, p))
    centered = X - mu
    for j in range(p):
        for k in range(j, p):
            both = observed[:, j] & observed[:, k]
            m = int(both.sum())
            if m >= 2:
                S[j, k] = S[k, j] = float(
                    (centered[both, j] * centered[both, k]).sum() / (m - 1))
    return S


def _missingness_correlated(X, observed):
    n, p = X.shape
    for j in range(p):
        miss = ~observed[:, j]
        if not miss.any() or miss.all():
            continue
        for k in range(p):
            if k == j:
                continue
            rows = observed[:, k]
            if rows.sum() < 3:
                continue
            a = miss[rows].astype(float)
            b = X[rows, k]
            if a.std() == 0 or b.std() == 0:
                continue
            r = float(np.corrcoef(a, b)[0, 1])
            if abs(r) > MAR_CORRELATION:
                return True
    return False


# ---------------------------------------------------------------------------
# Imputation


def _mode(values):
    """Most frequent value; ties broken by first appearance."""
    counts, first = {}, {}
    for i, v in enumerate(values):
        counts[v] = counts.get(v, 0) + 1
        first.setdefault(v, i)
    return max(counts, key=lambda v: (counts[v], -first[v]))


def _fill_numeric(values, all_int):
    mean = float(np.mean(values))
    if all_int and mean == int(mean):
        return int(mean)
    return mean


def impute(table: Table, diagnosis: MissingnessDiagnosis,
           sweeps: int = 5) -> tuple[Table, RepairLog]:
    """Fill every missing cell.

    Under MCAR, numeric columns receive their mean and text columns their
    mode. Otherwise incomplete columns are revisited round-robin for a few
    sweeps: numeric targets are regressed on the other numeric columns by
    least squares, text targets take the mode of the nearest rows in the
    standardized numeric profile. Columns with no observed cells at all
    are dropped.
    """
    repair = RepairLog()
    cols = list(table.columns)

    kept = []
    for c in cols:
        if all(v is None for v in c.cells):
            repair.warn(f"column {c.name!r} is entirely missing; dropped")
        else:
            kept.append(c)
    cols = kept
    if not cols:
        return Table(()), repair

    if diagnosis.mechanism == MCAR:
        new_cols = [_impute_simple(c, repair) for c in cols]
        return Table(tuple(new_cols)), repair

    return _impute_round_robin(cols, repair, sweeps)


def _impute_simple(column: Column, repair: RepairLog) -> Column:
    obs = [v for v in column.cells if v is not None]
    if not any(v is None for v in column.cells):
        return column
    if all(is_number(v) for v in obs):
        fill = _fill_numeric(obs, all(isinstance(v, int) for v in obs))
    else:
        fill = _mode(obs)
    updates = {}
    for i, v in enumerate(column.cells):
        if v is None:
            updates[i] = fill
            repair.add(column.name, i, IMPUTED, None, fill)
    return column.replace(updates)


def _impute_round_robin(cols, repair: RepairLog, sweeps: int):
    numeric_idx = [j for j, c in enumerate(cols)
                   if all(is_number(v) for v in c.cells if v is not None)]
    numeric_set = set(numeric_idx)
    n = len(cols[0])

    # working state, initialized with means / modes
    work = []
    missing_rows = []
    for j, c in enumerate(cols):
        obs = [v for v in c.cells if v is not None]
        miss = [i for i, v in enumerate(c.cells) if v is None]
        missing_rows.append(miss)
        if j in numeric_set:
            fill = float(np.mean([float(v) for v in obs]))
            work.append(np.array([float(v) if v is not None else fill
                                  for v in c.cells]))
        else:
            fill = _mode(obs)
            work.append([v if v is not None else fill for v in c.cells])

    incomplete = [j for j in range(len(cols)) if missing_rows[j]]
    for _ in range(sweeps):
        for j in incomplete:
            if j in numeric_set:
                _regress_numeric(j, cols, work, numeric_idx, missing_rows[j])
            else:
                _nearest_mode(j, cols, work, numeric_idx, missing_rows[j])

    new_cols = []
    for j, c in enumerate(cols):
        if not missing_rows[j]:
            new_cols.append(c)
            continue
        updates = {}
        if j in numeric_set:
            obs = [v for v in c.cells if v is not None]
            all_int = all(isinstance(v, int) for v in obs)
            for i in missing_rows[j]:
                v = float(work[j][i])
                if all_int and v == int(v):
                    v = int(v)
                updates[i] = v
                repair.add(c.name, i, IMPUTED, None, v)
        else:
            for i in missing_rows[j]:
                updates[i] = work[j][i]
                repair.add(c.name, i, IMPUTED, None, work[j][i])
        new_cols.append(c.replace(updates))
    return Table(tuple(new_cols)), repair


def _regress_numeric(j, cols, work, numeric_idx, miss_rows):
    predictors = [k for k in numeric_idx if k != j]
    if not predictors:
        return
    n = len(work[j])
    X = np.column_stack([np.ones(n)] + [work[k] for k in predictors])
    obs_rows = [i for i in range(n) if i not in set(miss_rows)]
    beta, *_ = np.linalg.lstsq(X[obs_rows], work[j][obs_rows], rcond=None)
    pred = X[miss_rows] @ beta
    work[j][miss_rows] = pred


def _nearest_mode(j, cols, work, numeric_idx, miss_rows, k_neighbors: int = 5):
    n = len(work[j])
    obs_rows = [i for i in range(n) if i not in set(miss_rows)]
    if not numeric_idx:
        fill = _mode([work[j][i] for i in obs_rows])
        for i in miss_rows:
            work[j][i] = fill
        return
    P = np.column_stack([work[k] for k in numeric_idx])
    std = P.std(axis=0)
    std[std == 0] = 1.0
    P = (P - P.mean(axis=0)) / std
    obs_profile = P[obs_rows]
    for i in miss_rows:
        d = np.linalg.norm(obs_profile - P[i], axis=1)
        order = np.lexsort((obs_rows, d))[:k_neighbors]
        neighbors = [work[j][obs_rows[t]] for t in order]
        work[j][i] = _mode(neighbors)


# ---------------------------------------------------------------------------
# Typo correction


def levenshtein(a: str, b: str) -> int:
    """Minimal number of single-character edits turning a into b."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1,
                           cur[j - 1] + 1,
                           prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def correct_typos(column: Column, min_support: float = 10.0,
                  max_dist: int = 2) -> tuple[Column, RepairLog]:
    """Rewrite rare values to a dominant near-duplicate.

    A rare value moves to a frequent one only when the frequent value is at
    least ``min_support`` times more common, within ``max_dist`` edits, and
    is the unique such candidate at the minimal distance. Runs to a fixed
    point, so applying it twice changes nothing further.
    """
    repair = RepairLog()
    cells = list(column.cells)
    while True:
        counts, first = {}, {}
        for i, v in enumerate(cells):
            if isinstance(v, str):
                counts[v] = counts.get(v, 0) + 1
                first.setdefault(v, i)
        rewrites = {}
        for v in sorted(counts, key=lambda v: (counts[v], first[v])):
            candidates = []
            for w, cw in counts.items():
                if w == v or w in rewrites:
                    continue
                if cw < min_support * counts[v]:
                    continue
                d = levenshtein(v, w)
                if d <= max_dist:
                    candidates.append((d, w))
            if not candidates:
                continue
            dmin = min(d for d, _ in candidates)
            best = [w for d, w in candidates if d == dmin]
            if len(best) == 1:
                rewrites[v] = best[0]
        if not rewrites:
            break
        for i, v in enumerate(cells):
            if isinstance(v, str) and v in rewrites:
                repair.add(column.name, i, TYPO_FIXED, v, rewrites[v])
                cells[i] = rewrites[v]
    return Column(column.name, tuple(cells)), repair


# ---------------------------------------------------------------------------
# Type outlier repair


def repair_type_outliers(column: Column,
                         profile: ColumnProfile,
                         registry=None) -> tuple[Column, RepairLog]:
    """Coerce anomalous cells into the column's winning kind when lossless,
    otherwise blank them for re-imputation."""
    repair = RepairLog()
    if not profile.anomaly_rows:
        return column, repair
    if registry is None:
        registry = mk.build_registry()
    winner = profile.winner
    machine = registry.get(winner)
    updates = {}
    for i in sorted(profile.anomaly_rows):
        v = column.cells[i]
        if v is None:
            continue
        new = _coerce(v, winner, machine)
        updates[i] = new
        repair.add(column.name, i, OUTLIER_COERCED, v, new)
    return column.replace(updates), repair


def _coerce(value, winner, machine):
    if winner == mk.INTEGER:
        if isinstance(value, str):
            s = value.strip()
            try:
                return int(s)
            except ValueError:
                return None
        return None
    if winner == mk.FLOAT:
        if isinstance(value, str):
            try:
                f = float(value.strip())
                return f if math.isfinite(f) else None
            except ValueError:
                return None
        return None
    if is_number(value) and machine is not None:
        text = cell_text(value)
        if machine.accepts(text):
            return text
    return None
