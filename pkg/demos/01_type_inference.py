"""Recognizing string types in columns.

Thirteen probabilistic finite-state machines score every value in a
column; the per-column posterior decides whether it holds coordinates,
days, e-mails, filepaths, months, numerical strings, sentences, URLs,
zip codes, plain numbers, or just standard text.
"""

from stringkit import Column, build_registry, infer_column, value_logprob

registry = build_registry()
print("machines in the registry:", [m.kind for m in registry])

# Per-value scores: a specific machine assigns far more probability to
# its own strings than the uniform noise model does.
day = registry.get("day")
for value in ("Monday", "Mon", "Mo", "Mondey"):
    print(f"  log P({value!r} | day machine) = {value_logprob(day, value):.3f}")

columns = [
    Column("weekday", ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")),
    Column("contact", ("jane@tue.nl", "j.doe@mail.org", "bart@uni-bonn.de")),
    Column("position", ("N29.10.56 W90.00.00", "N30:00:00 W89.30.00")),
    Column("price_band", ("100 to 200", "200 to 400", ">500")),
    Column("note", ("red", "blue", "green", "mauve")),
    Column("reading", (12.5, 13.0, 11.75, 12.25)),
]

print("\ncolumn inference:")
for column in columns:
    profile = infer_column(column, registry)
    top = ", ".join(f"{k}={v:.3f}" for k, v in profile.top(2))
    print(f"  {column.name:>10}: winner={profile.winner:<10} ({top})")

# Anomaly detection: a numeric value hiding in an e-mail column.
cells = tuple(f"user{i}@mail.com" for i in range(20)) + (12345,)
profile = infer_column(Column("email", cells), registry)
print(f"\nanomaly rows in the e-mail column: {sorted(profile.anomaly_rows)}")
