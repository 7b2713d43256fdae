"""stringkit: automated handling of categorical string columns.

The library recognizes special string types (coordinates, days, e-mails,
filepaths, months, numerical strings, sentences, URLs, zip codes) with
probabilistic finite-state machines, repairs missing values, typos and
type outliers, applies type-specific processing, predicts whether the
remaining text columns are ordinal or nominal, and encodes everything
into a dense numeric matrix.
"""

__version__ = "0.1.0"

from .cleaning import (MissingnessDiagnosis, RepairLog, correct_typos, impute,
                       levenshtein, littles_test, repair_type_outliers)
from .embeddings import EmbeddingStore, embedding_dispersion, load_embeddings
from .encoders import (EncodedMatrix, SentimentLexicon, baseline_ordinal_encode,
                       gamma_poisson_encode, gamma_poisson_fit, minhash_encode,
                       ngram_set, ordinal_encode, select_nominal_encoder,
                       sentiment_intensity, similarity_encode,
                       spearman_rank_correlation)
from .gbc import (GbcModel, load_model, predict_stat_type, save_model,
                  train_gbc)
from .geo import (EcefPoint, GeoRecord, GeoTable, RemoteGeocoder,
                  latlon_to_ecef, load_geo_table, nearest_record, zip_lookup)
from .inference import ColumnProfile, detect_outlier_rows, infer_column, infer_table
from .machines import Machine, Registry, build_registry, value_logprob
from .ordinality import KeywordConfig, OrdinalityFeatures, extract_features
from .pipeline import PipelineConfig, RunReport, run_pipeline
from .processing import (ProcessedColumns, dms_to_decimal, process_coordinate,
                         process_day, process_email, process_filepath,
                         process_month, process_numerical, process_sentence,
                         process_url, process_zip, strip_common_affixes)
from .table import Cell, Column, Table, read_delimited, write_delimited

__all__ = [
    "Cell", "Column", "ColumnProfile", "EcefPoint", "EmbeddingStore",
    "EncodedMatrix", "GbcModel", "GeoRecord", "GeoTable", "KeywordConfig",
    "Machine", "MissingnessDiagnosis", "OrdinalityFeatures", "PipelineConfig",
    "ProcessedColumns", "Registry", "RemoteGeocoder", "RepairLog", "RunReport",
    "SentimentLexicon", "Table", "baseline_ordinal_encode", "build_registry",
    "correct_typos", "detect_outlier_rows", "dms_to_decimal",
    "embedding_dispersion", "extract_features", "gamma_poisson_encode",
    "gamma_poisson_fit", "impute", "infer_column", "infer_table",
    "latlon_to_ecef", "levenshtein", "littles_test", "load_embeddings",
    "load_geo_table", "load_model", "minhash_encode", "nearest_record",
    "ngram_set", "ordinal_encode", "predict_stat_type", "process_coordinate",
    "process_day", "process_email", "process_filepath", "process_month",
    "process_numerical", "process_sentence", "process_url", "process_zip",
    "read_delimited", "repair_type_outliers", "run_pipeline", "save_model",
    "select_nominal_encoder", "sentiment_intensity", "similarity_encode",
    "spearman_rank_correlation", "strip_common_affixes", "train_gbc",
    "value_logprob", "write_delimited", "zip_lookup",
]
