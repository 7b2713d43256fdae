"""End-to-end orchestration: infer, clean, process, classify, encode.

Stage order is fixed: type inference over all columns, cleaning (outlier
repair, typo correction, missingness diagnosis, imputation), a bounded
re-inference of the columns cleaning touched, type-specific processing,
statistical-type prediction for the remaining standard columns, and
finally numeric encoding (skipped when the caller only wants the
processed table). A column that fails anywhere is downgraded to a plain
nominal column with a warning instead of aborting the run.
"""

from __future__ import annotations

import json
import logging
import os
import time
import zlib
from dataclasses import dataclass, field, asdict
from importlib import resources

import numpy as np

from . import cleaning, encoders, gbc, geo, machines, processing
from .corpus import stattype_corpus
from .embeddings import EmbeddingStore, load_embeddings
from .inference import ColumnProfile, infer_column
from .ordinality import KeywordConfig, extract_features
from .table import Column, Table, cell_text, is_number

log = logging.getLogger("stringkit")

#: Environment variable naming a directory searched for default data files.
DATA_DIR_ENV = "STRINGKIT_DATA_DIR"

REPORT_FORMAT_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    delimiter: str = ","
    missing_tokens: tuple = None
    disabled_machines: tuple = ()
    alpha: float = 0.05
    typo_min_support: float = 10.0
    typo_max_dist: int = 2
    p_anomaly: float = 0.01
    encoder_overrides: dict = field(default_factory=dict)
    gamma_poisson_dim: int = 10
    minhash_k: int = 64
    seed: int = 0
    encode: bool = True
    use_target_encoding: bool = False
    target_column: str | None = None
    embeddings_path: str | None = None
    geo_table_path: str | None = None
    lexicon_path: str | None = None
    ordinal_names_path: str | None = None
    nominal_names_path: str | None = None
    likert_keywords_path: str | None = None
    nouns_path: str | None = None
    stopwords_path: str | None = None
    model_path: str | None = None

    def __post_init__(self):
        if self.missing_tokens is None:
            from .table import DEFAULT_MISSING_TOKENS
            self.missing_tokens = tuple(DEFAULT_MISSING_TOKENS)
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must be in (0, 1): {self.alpha}")
        if self.typo_max_dist < 0:
            raise ConfigError("typo_max_dist must be nonnegative")
        if self.minhash_k < 1 or self.gamma_poisson_dim < 1:
            raise ConfigError("encoder dimensions must be positive")
        if len(self.delimiter) != 1:
            raise ConfigError("delimiter must be a single character")
        if self.use_target_encoding and not self.target_column:
            raise ConfigError("target encoding requires target_column")
        unknown = set(self.disabled_machines) - set(machines.REGISTRY_ORDER)
        if unknown:
            raise ConfigError(f"unknown machines to disable: {sorted(unknown)}")
        for path_field in ("embeddings_path", "geo_table_path", "lexicon_path",
                           "ordinal_names_path", "nominal_names_path",
                           "likert_keywords_path", "nouns_path",
                           "stopwords_path", "model_path"):
            p = getattr(self, path_field)
            if p is not None and not os.path.exists(p):
                raise ConfigError(f"{path_field} does not exist: {p}")

    @classmethod
    def from_json(cls, doc: dict) -> "PipelineConfig":
        known = {f.name for f in cls.__dataclass_fields__.values()}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        coerced = dict(doc)
        for key in ("missing_tokens", "disabled_machines"):
            if key in coerced and coerced[key] is not None:
                coerced[key] = tuple(coerced[key])
        try:
            return cls(**coerced)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_json(doc)


def _env_data_path(filename):
    base = os.environ.get(DATA_DIR_ENV)
    if base:
        candidate = os.path.join(base, filename)
        if os.path.exists(candidate):
            return candidate
    return None


def _column_seed(base_seed: int, name: str) -> int:
    return (base_seed * 1_000_003 + zlib.crc32(name.encode("utf-8"))) % 2**31


@dataclass
class ColumnReport:
    name: str
    winner: str = machines.STANDARD
    posterior: dict = field(default_factory=dict)
    n_missing: int = 0
    anomaly_rows: list = field(default_factory=list)
    stat_type: str | None = None
    stat_prob: float | None = None
    encoders_used: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    notes: list = field(default_factory=list)


@dataclass
class RunReport:
    columns: list = field(default_factory=list)
    missingness: dict = field(default_factory=dict)
    repair: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    seed: int = 0
    n_rows: int = 0
    n_columns: int = 0

    def column(self, name) -> ColumnReport:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        doc = asdict(self)
        doc["format_version"] = REPORT_FORMAT_VERSION
        return doc

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2, default=_json_default)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj)}")


# ---------------------------------------------------------------------------
# Default artifacts (lazy, cached per process)

_default_model_cache = None


def default_stat_model() -> gbc.GbcModel:
    """Classifier trained on the bundled synthetic corpus (deterministic)."""
    global _default_model_cache
    if _default_model_cache is None:
        corpus = stattype_corpus(seed=0)
        feats = [extract_features(lc.column, lc.name) for lc in corpus]
        labels = [lc.label for lc in corpus]
        _default_model_cache = gbc.train_gbc(feats, labels)
    return _default_model_cache


def _resolve_geo(config) -> geo.GeoTable | None:
    path = config.geo_table_path or _env_data_path("postal_codes.tsv")
    try:
        if path:
            return geo.load_geo_table(path)
        return geo.bundled_geo_table()
    except (OSError, geo.EmptyGeoTableError) as exc:
        log.warning("geo table unavailable: %s", exc)
        return None


def _resolve_lexicon(config) -> encoders.SentimentLexicon:
    path = config.lexicon_path or _env_data_path("sentiment_lexicon.tsv")
    if path:
        return encoders.load_lexicon(path)
    return encoders.bundled_lexicon()


def _resolve_embeddings(config) -> EmbeddingStore:
    path = config.embeddings_path or _env_data_path("embeddings.txt")
    if path:
        return load_embeddings(path, fallback_seed=config.seed)
    return EmbeddingStore(fallback_seed=config.seed)


def _resolve_keywords(config) -> KeywordConfig:
    return KeywordConfig.from_paths(config.ordinal_names_path,
                                    config.nominal_names_path,
                                    config.likert_keywords_path)


def _resolve_nouns(config) -> processing.NounFilter:
    nouns = config.nouns_path or _env_data_path("nouns.txt")
    stops = config.stopwords_path or _env_data_path("stopwords.txt")
    if nouns or stops:
        return processing.NounFilter.from_paths(nouns, stops)
    return processing.default_noun_filter()


def _resolve_model(config) -> gbc.GbcModel:
    if config.model_path:
        return gbc.load_model(config.model_path)
    return default_stat_model()


# ---------------------------------------------------------------------------
# Pipeline


_PROCESSORS = {
    machines.DAY: lambda col, ctx: processing.process_day(col),
    machines.EMAIL: lambda col, ctx: processing.process_email(col),
    machines.FILEPATH: lambda col, ctx: processing.process_filepath(col),
    machines.URL: lambda col, ctx: processing.process_url(col),
    machines.MONTH: lambda col, ctx: processing.process_month(col),
    machines.NUMERICAL: lambda col, ctx: processing.process_numerical(col),
    machines.SENTENCE: lambda col, ctx: processing.process_sentence(
        col, ctx["nouns"]),
    machines.COORDINATE: lambda col, ctx: processing.process_coordinate(
        col, ctx["geo"]),
    machines.ZIPCODE: lambda col, ctx: processing.process_zip(col, ctx["geo"]),
}


def _coerce_numeric_column(column: Column) -> Column:
    """Parse left-over numeric-looking text in a numeric-kind column."""
    updates = {}
    for i, c in enumerate(column.cells):
        if isinstance(c, str):
            parsed = cleaning._coerce(c, machines.FLOAT, None)
            updates[i] = parsed
    return column.replace(updates) if updates else column


def run_pipeline(table: Table, config: PipelineConfig | None = None):
    """Run the full workflow; returns (EncodedMatrix | Table, RunReport)."""
    config = config or PipelineConfig()
    report = RunReport(seed=config.seed, n_rows=table.n_rows,
                       n_columns=table.n_cols)
    report.columns = [ColumnReport(name=c.name) for c in table.columns]
    repair_all = cleaning.RepairLog()
    timings = {}

    registry = machines.build_registry(disabled=config.disabled_machines,
                                       missing_tokens=config.missing_tokens)

    # 1. inference
    t0 = time.perf_counter()
    profiles = {}
    for col in table.columns:
        cr = report.column(col.name)
        try:
            prof = infer_column(col, registry, p_anomaly=config.p_anomaly,
                                seed=config.seed)
        except Exception as exc:  # noqa: BLE001 - column-level isolation
            prof = ColumnProfile(col.name, {machines.STANDARD: 1.0},
                                 machines.STANDARD, frozenset(), frozenset())
            report.warnings.append(f"{col.name}: inference failed ({exc}), "
                                   "treated as standard")
        profiles[col.name] = prof
        cr.winner = prof.winner
        cr.posterior = {k: round(v, 6) for k, v in prof.posterior.items()}
        cr.n_missing = len(prof.missing_rows)
        cr.anomaly_rows = sorted(prof.anomaly_rows)
    timings["infer"] = time.perf_counter() - t0

    # 2. cleaning: outlier repair, typo fixes, missingness, imputation
    t0 = time.perf_counter()
    touched = set()
    for col in table.columns:
        fixed, rlog = cleaning.repair_type_outliers(col, profiles[col.name],
                                                    registry)
        if rlog.entries:
            touched.add(col.name)
            table = table.with_column(fixed)
            repair_all.extend(rlog)
    for col in table.columns:
        prof = profiles[col.name]
        if prof.winner != machines.STANDARD:
            continue
        obs = [v for v in col.cells if v is not None]
        if not obs or not all(isinstance(v, str) for v in obs):
            continue
        fixed, rlog = cleaning.correct_typos(col, config.typo_min_support,
                                             config.typo_max_dist)
        if rlog.entries:
            touched.add(col.name)
            table = table.with_column(fixed)
            repair_all.extend(rlog)

    diagnosis = cleaning.littles_test(table, alpha=config.alpha)
    report.missingness = asdict(diagnosis)
    table, impute_log = cleaning.impute(table, diagnosis)
    repair_all.extend(impute_log)
    touched.update(e.column for e in impute_log.entries)
    timings["clean"] = time.perf_counter() - t0

    # 3. bounded re-inference of changed columns
    t0 = time.perf_counter()
    for name in sorted(touched):
        try:
            col = table.column(name)
        except KeyError:
            continue  # dropped as all-missing
        try:
            prof = infer_column(col, registry, p_anomaly=config.p_anomaly,
                                seed=config.seed)
        except Exception:  # noqa: BLE001
            continue
        profiles[name] = prof
        cr = report.column(name)
        cr.winner = prof.winner
        cr.posterior = {k: round(v, 6) for k, v in prof.posterior.items()}
    timings["reinfer"] = time.perf_counter() - t0

    # 4. type-specific processing
    t0 = time.perf_counter()
    ctx = {"geo": _resolve_geo(config), "nouns": _resolve_nouns(config)}
    processed = {}  # column name -> ProcessedColumns
    for col in table.columns:
        cr = report.column(col.name)
        winner = profiles[col.name].winner
        try:
            if winner in _PROCESSORS:
                pc = _PROCESSORS[winner](col, ctx)
            elif winner in (machines.INTEGER, machines.FLOAT):
                pc = processing.ProcessedColumns(
                    [_coerce_numeric_column(col)], [processing.NUMERIC])
            else:
                pc = processing.passthrough(col, processing.NOMINAL)
        except Exception as exc:  # noqa: BLE001 - column-level isolation
            report.warnings.append(f"{col.name}: processing failed ({exc}), "
                                   "passed through as nominal")
            pc = processing.passthrough(col, processing.NOMINAL)
        cr.notes.extend(pc.notes)
        processed[col.name] = pc
    timings["process"] = time.perf_counter() - t0

    # 5. statistical type prediction for standard columns
    t0 = time.perf_counter()
    stat_model = None
    store = None
    keywords = None
    for col in table.columns:
        if profiles[col.name].winner != machines.STANDARD:
            continue
        cr = report.column(col.name)
        try:
            if stat_model is None:
                stat_model = _resolve_model(config)
                store = _resolve_embeddings(config)
                keywords = _resolve_keywords(config)
            feats = extract_features(table.column(col.name), col.name,
                                     store, keywords)
            label, prob = gbc.predict_stat_type(stat_model, feats)
        except Exception as exc:  # noqa: BLE001
            report.warnings.append(f"{col.name}: statistical-type prediction "
                                   f"failed ({exc}), treated as nominal")
            label, prob = gbc.NOMINAL, 0.5
        cr.stat_type, cr.stat_prob = label, prob
        pc = processed[col.name]
        pc.directives = [processing.ORDINAL if label == gbc.ORDINAL
                         else processing.NOMINAL] * len(pc.outputs)
    timings["stattype"] = time.perf_counter() - t0

    report.repair = repair_all.to_json()
    report.warnings.extend(repair_all.warnings)

    # 6. encoding (or the processed table)
    t0 = time.perf_counter()
    if not config.encode:
        out_cols = []
        for col in table.columns:
            pc = processed[col.name]
            report.column(col.name).outputs = [o.name for o in pc.outputs]
            out_cols.extend(pc.outputs)
        result = Table(tuple(out_cols))
        timings["encode"] = time.perf_counter() - t0
        report.timings = timings
        return result, report

    lexicon = _resolve_lexicon(config)
    parts = []
    for col in table.columns:
        cr = report.column(col.name)
        pc = processed[col.name]
        for out_col, directive in zip(pc.outputs, pc.directives):
            try:
                enc = _encode_column(out_col, directive, col.name, config,
                                     lexicon, table, cr)
            except Exception as exc:  # noqa: BLE001
                report.warnings.append(
                    f"{out_col.name}: encoding failed ({exc}), min-hash used")
                enc = encoders.minhash_encode(
                    _fill_column(out_col, "nominal", cr), k=config.minhash_k,
                    seed=_column_seed(config.seed, out_col.name))
            parts.append(enc)
            cr.outputs.extend(enc.output_names())
            cr.encoders_used.append(enc.column_meta[0].encoder)
    if parts:
        result = encoders.hstack_encoded(parts)
    else:
        result = encoders.EncodedMatrix(np.zeros((table.n_rows, 0)), [])
    timings["encode"] = time.perf_counter() - t0
    report.timings = timings
    return result, report


def _fill_column(column: Column, directive: str, cr: ColumnReport) -> Column:
    """Processing can blank cells; refill so encoders see complete data."""
    obs = [v for v in column.cells if v is not None]
    holes = sum(1 for v in column.cells if v is None)
    if holes == 0:
        return column
    if not obs:
        fill = 0.0 if directive == processing.NUMERIC else "unknown"
    elif directive == processing.NUMERIC:
        fill = float(np.mean([float(v) for v in obs]))
    else:
        fill = cleaning._mode(obs)
    cr.notes.append(f"{column.name}: {holes} cell(s) filled before encoding")
    return column.replace({i: fill for i, v in enumerate(column.cells)
                           if v is None})


def _encode_column(out_col: Column, directive: str, source: str,
                   config: PipelineConfig, lexicon, table: Table,
                   cr: ColumnReport):
    out_col = _fill_column(out_col, directive, cr)
    override = config.encoder_overrides.get(source)

    if directive == processing.NUMERIC and not override:
        values = np.array([[float(v)] for v in out_col.cells])
        return encoders.EncodedMatrix(
            values, [encoders.ColumnMeta(out_col.name, encoders.PASSTHROUGH, 0)])

    seed = _column_seed(config.seed, out_col.name)
    choice = override
    if choice is None:
        if directive == processing.ORDINAL:
            choice = encoders.ORDINAL_INTENSITY
        else:
            cardinality = len({cell_text(v) for v in out_col.cells})
            choice = encoders.select_nominal_encoder(cardinality)

    if choice == encoders.SIMILARITY:
        return encoders.similarity_encode(out_col)
    if choice == encoders.GAMMA_POISSON:
        return encoders.gamma_poisson_encode(out_col, d=config.gamma_poisson_dim,
                                             seed=seed)
    if choice == encoders.MINHASH:
        return encoders.minhash_encode(out_col, k=config.minhash_k, seed=seed)
    if choice == encoders.ORDINAL_INTENSITY:
        return encoders.ordinal_encode(out_col, lexicon)
    if choice == encoders.ORDINAL_BASELINE:
        return encoders.baseline_ordinal_encode(out_col)
    if choice == encoders.TARGET_MEAN:
        if not config.use_target_encoding or not config.target_column:
            raise ConfigError("target encoding requested but not configured")
        target_col = table.column(config.target_column)
        target = [float(v) if is_number(v) else 0.0 for v in target_col.cells]
        return encoders.target_encode(out_col, target)
    if choice == encoders.PASSTHROUGH:
        values = np.array([[float(v)] for v in out_col.cells])
        return encoders.EncodedMatrix(
            values, [encoders.ColumnMeta(out_col.name, encoders.PASSTHROUGH, 0)])
    raise ConfigError(f"unknown encoder override: {choice!r}")


def write_encoded_csv(matrix, path, delimiter: str = ",") -> None:
    """Write an encoded matrix with one header row of output names."""
    import csv
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(matrix.output_names())
        for row in matrix.values:
            writer.writerow([repr(float(v)) for v in row])
