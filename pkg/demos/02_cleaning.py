"""Missingness diagnosis, imputation, typo repair, outlier repair."""

import numpy as np

from stringkit import (Column, Table, build_registry, correct_typos, impute,
                       infer_column, levenshtein, littles_test,
                       repair_type_outliers)

rng = np.random.default_rng(0)

# A table whose missingness depends on an observed value: column b is
# blanked whenever a is above its median, which the chi-square test
# should flag as not-completely-at-random.
a = rng.normal(size=300)
b = 0.8 * a + 0.6 * rng.normal(size=300)
median = np.median(a)
table = Table((
    Column("a", tuple(float(x) for x in a)),
    Column("b", tuple(None if a[i] > median else float(b[i])
                      for i in range(300))),
))
diagnosis = littles_test(table)
print(f"mechanism={diagnosis.mechanism}  statistic={diagnosis.statistic:.2f}"
      f"  dof={diagnosis.dof}  p={diagnosis.p_value:.2e}")

filled, log = impute(table, diagnosis)
print(f"imputed {len(log.entries)} cells; "
      f"b[0] was {table.column('b').cells[0]!r}, "
      f"now {filled.column('b').cells[0]:.3f}")

# Typo repair: a rare near-duplicate folds into the dominant spelling.
print("\nlevenshtein('agree', 'agre') =", levenshtein("agree", "agre"))
column = Column("state", tuple(["California"] * 99 + ["Califronia"]))
fixed, log = correct_typos(column)
print("typo fixes:", [(e.old, "->", e.new) for e in log.entries])

# Outlier repair: the stray number in an e-mail column is blanked, a
# numeric string in an integer column parses in place.
registry = build_registry()
column = Column("count", tuple(range(38)) + ("12", ">10"))
profile = infer_column(column, registry)
repaired, log = repair_type_outliers(column, profile, registry)
print("\ninteger-column repairs:",
      [(e.old, "->", e.new) for e in log.entries])
