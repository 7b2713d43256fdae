"""Column type inference from the machine registry.

Each non-missing cell is scored under a robust mixture: with probability
``1 - p_anomaly`` the value comes from the candidate machine, with
probability ``p_anomaly`` from a uniform noise model over the printable
alphabet. Column scores are summed per candidate and softmaxed into a
posterior. Rows where the noise component dominates under the winning
kind are flagged as anomalies.

Columns that are at least 95% numeric cells resolve directly between the
integer and float kinds; text columns rejected by every feature machine
fall through to "standard".
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .machines import (ANOMALY, CANDIDATE_ORDER, FLOAT, INTEGER, MISSING,
                       STANDARD, UNIFORM_ALPHABET_SIZE, Registry)
from .table import Column, cell_text, is_number

_LOG_U = -math.log(UNIFORM_ALPHABET_SIZE)

#: Share of numeric cells above which a column resolves to a base
#: numeric kind outright.
NUMERIC_MAJORITY = 0.95

#: Columns longer than this are scored on a seeded sample for the
#: posterior; the anomaly scan always covers every row.
SAMPLE_CAP = 10_000


class EmptyColumnError(ValueError):
    """Column has no observed (non-missing) cells."""


@dataclass(frozen=True)
class ColumnProfile:
    """Inference result for one column."""

    column_name: str
    posterior: dict
    winner: str
    anomaly_rows: frozenset
    missing_rows: frozenset

    def top(self, k: int = 3):
        return sorted(self.posterior.items(), key=lambda kv: -kv[1])[:k]


def _mixture_logscore(machine, value: str, log_keep: float, log_anom: float) -> float:
    lp = machine.log_prob(value)
    anom = log_anom + len(value) * _LOG_U
    if lp == float("-inf"):
        return anom
    return np.logaddexp(log_keep + lp, anom)


def infer_column(column: Column, registry: Registry, *,
                 p_anomaly: float = 0.01, seed: int = 0,
                 sample_cap: int = SAMPLE_CAP) -> ColumnProfile:
    """Infer the type posterior, winner and anomaly rows of a column."""
    missing_rows = frozenset(i for i, c in enumerate(column.cells) if c is None)
    observed = [(i, c) for i, c in enumerate(column.cells) if c is not None]
    if not observed:
        raise EmptyColumnError(column.name)

    numeric = sum(1 for _, c in observed if is_number(c))
    numeric_majority = numeric / len(observed) >= NUMERIC_MAJORITY
    if numeric_majority:
        candidates = [k for k in (INTEGER, FLOAT) if registry.get(k)]
        if not candidates:
            candidates = [STANDARD]
            numeric_majority = False
    else:
        candidates = list(registry.candidate_kinds())

    scored = observed
    if len(observed) > sample_cap:
        rng = np.random.default_rng(seed)
        idx = rng.choice(len(observed), size=sample_cap, replace=False)
        scored = [observed[i] for i in sorted(idx)]

    log_keep = math.log1p(-p_anomaly)
    log_anom = math.log(p_anomaly)

    scores = np.empty(len(candidates))
    for j, kind in enumerate(candidates):
        if kind == STANDARD:
            # accepts anything at the uniform per-character rate, so the
            # keep and noise components coincide
            scores[j] = sum(len(cell_text(c)) * _LOG_U for _, c in scored)
        else:
            machine = registry.get(kind)
            scores[j] = sum(
                _mixture_logscore(machine, cell_text(c), log_keep, log_anom)
                for _, c in scored)

    shifted = scores - scores.max()
    weights = np.exp(shifted)
    probs = weights / weights.sum()
    posterior = {k: float(p) for k, p in zip(candidates, probs)}

    best = max(range(len(candidates)), key=lambda j: (scores[j], -j))
    winner = candidates[best]

    anomaly_rows = _scan_anomalies(observed, winner, registry,
                                   numeric_majority=numeric_majority,
                                   log_keep=log_keep, log_anom=log_anom)
    return ColumnProfile(column_name=column.name,
                         posterior=posterior,
                         winner=winner,
                         anomaly_rows=frozenset(anomaly_rows),
                         missing_rows=missing_rows)


def _scan_anomalies(observed, winner, registry, *, numeric_majority,
                    log_keep, log_anom):
    if winner == STANDARD:
        return set()
    if numeric_majority:
        # type outliers in a numeric column are simply its text cells
        return {i for i, c in observed if not is_number(c)}
    machine = registry.get(winner)
    out = set()
    for i, c in observed:
        s = cell_text(c)
        lp = machine.log_prob(s)
        if log_anom + len(s) * _LOG_U > log_keep + lp:
            out.add(i)
    return out


def detect_outlier_rows(profile: ColumnProfile, column: Column) -> set:
    """Rows whose cells do not belong under the column's winning kind."""
    return set(profile.anomaly_rows)


def infer_table(table, registry, *, p_anomaly: float = 0.01, seed: int = 0):
    """Profile every column; returns a dict keyed by column name."""
    return {c.name: infer_column(c, registry, p_anomaly=p_anomaly, seed=seed)
            for c in table.columns}
