"""Command-line interface.

Subcommands:
  clean          run the full pipeline on a delimited file
  infer          column type profiles only
  train-stattype train the ordinal/nominal classifier from a labeled corpus
  eval-ordering  score lexicon vs lexicographic ordering on Likert scales

Exit codes: 0 success, 1 input error, 2 configuration/usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .cleaning import RepairLog
from .corpus import likert_suite, load_stattype_corpus_json, stattype_corpus
from .encoders import (baseline_ordinal_encode, bundled_lexicon, ordinal_encode,
                       ordering_of, spearman_rank_correlation)
from .gbc import predict_stat_type, save_model, train_gbc
from .inference import infer_table
from .machines import build_registry
from .ordinality import extract_features
from .pipeline import (ConfigError, PipelineConfig, RunReport, run_pipeline,
                       write_encoded_csv)
from .table import RaggedRowsError, Table, read_delimited, write_delimited


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="stringkit",
        description="Detect, clean and numerically encode categorical "
                    "string columns in tabular data.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_clean = sub.add_parser("clean", help="run the full pipeline")
    p_clean.add_argument("input")
    p_clean.add_argument("--out", required=True,
                         help="output CSV (encoded matrix, or processed "
                              "table with --no-encode)")
    p_clean.add_argument("--report", required=True, help="JSON run report")
    p_clean.add_argument("--config", help="JSON pipeline configuration")
    p_clean.add_argument("--no-encode", action="store_true",
                         help="emit the processed table instead of the matrix")
    p_clean.add_argument("--seed", type=int, help="override the config seed")
    p_clean.add_argument("--delimiter", help="input/output field delimiter")

    p_infer = sub.add_parser("infer", help="write column type profiles")
    p_infer.add_argument("input")
    p_infer.add_argument("--report", required=True)
    p_infer.add_argument("--config", help="JSON pipeline configuration")

    p_train = sub.add_parser("train-stattype",
                             help="train the ordinal/nominal classifier")
    p_train.add_argument("corpus",
                         help="labeled corpus JSON, or 'bundled' for the "
                              "built-in synthetic corpus")
    p_train.add_argument("--model", required=True, help="model JSON to write")
    p_train.add_argument("--seed", type=int, default=0)

    p_eval = sub.add_parser("eval-ordering",
                            help="compare ordinal orderings against ground truth")
    p_eval.add_argument("corpus",
                        help="scales JSON ([{name, values_in_order}, ...]), "
                             "or 'bundled' for the built-in suite")
    return parser


def _load_config(args) -> PipelineConfig:
    config = (PipelineConfig.from_file(args.config) if getattr(args, "config", None)
              else PipelineConfig())
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "delimiter", None):
        if len(args.delimiter) != 1:
            raise ConfigError("delimiter must be a single character")
        config.delimiter = args.delimiter
    if getattr(args, "no_encode", False):
        config.encode = False
    return config


def _cmd_clean(args) -> int:
    config = _load_config(args)
    table = read_delimited(args.input, delimiter=config.delimiter,
                           missing_tokens=config.missing_tokens)
    result, report = run_pipeline(table, config)
    if isinstance(result, Table):
        write_delimited(result, args.out, delimiter=config.delimiter)
    else:
        write_encoded_csv(result, args.out, delimiter=config.delimiter)
    report.write(args.report)
    return 0


def _cmd_infer(args) -> int:
    config = _load_config(args)
    table = read_delimited(args.input, delimiter=config.delimiter,
                           missing_tokens=config.missing_tokens)
    registry = build_registry(disabled=config.disabled_machines,
                              missing_tokens=config.missing_tokens)
    profiles = infer_table(table, registry, p_anomaly=config.p_anomaly,
                           seed=config.seed)
    doc = {
        "format_version": 1,
        "columns": [
            {"name": name,
             "winner": prof.winner,
             "posterior": {k: round(v, 6) for k, v in prof.posterior.items()},
             "anomaly_rows": sorted(prof.anomaly_rows),
             "missing_rows": sorted(prof.missing_rows)}
            for name, prof in profiles.items()
        ],
    }
    with open(args.report, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
    return 0


def _cmd_train(args) -> int:
    if args.corpus == "bundled":
        corpus = stattype_corpus(seed=args.seed)
    else:
        corpus = load_stattype_corpus_json(args.corpus)
    feats = [extract_features(lc.column, lc.name) for lc in corpus]
    labels = [lc.label for lc in corpus]
    model = train_gbc(feats, labels, seed=args.seed)
    save_model(model, args.model)
    correct = sum(predict_stat_type(model, f)[0] == lab
                  for f, lab in zip(feats, labels))
    print(f"trained on {len(corpus)} columns; "
          f"training accuracy {correct / len(corpus):.3f}; "
          f"model written to {args.model}")
    return 0


def _cmd_eval_ordering(args) -> int:
    if args.corpus == "bundled":
        suite = likert_suite()
    else:
        with open(args.corpus, encoding="utf-8") as fh:
            doc = json.load(fh)
        suite = [(s["name"], tuple(s["values_in_order"])) for s in doc]
    lexicon = bundled_lexicon()
    from .table import Column
    rows = []
    for name, truth in suite:
        col = Column(name, tuple(truth))
        rho_lex = spearman_rank_correlation(
            ordering_of(ordinal_encode(col, lexicon), col), list(truth))
        rho_base = spearman_rank_correlation(
            ordering_of(baseline_ordinal_encode(col), col), list(truth))
        rows.append((name, rho_lex, rho_base))
    width = max(len(r[0]) for r in rows)
    print(f"{'scale'.ljust(width)}  intensity  baseline")
    for name, lex, base in rows:
        print(f"{name.ljust(width)}  {lex:9.4f}  {base:8.4f}")
    mean_lex = sum(r[1] for r in rows) / len(rows)
    mean_base = sum(r[2] for r in rows) / len(rows)
    print(f"{'mean'.ljust(width)}  {mean_lex:9.4f}  {mean_base:8.4f}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.command == "clean":
            return _cmd_clean(args)
        if args.command == "infer":
            return _cmd_infer(args)
        if args.command == "train-stattype":
            return _cmd_train(args)
        if args.command == "eval-ordering":
            return _cmd_eval_ordering(args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RaggedRowsError, ValueError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    return 0


def entry_point():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
