"""Command line entry point: ``gesera <subcommand> [options]``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .corpus import FORMATS, SubsetSpec, load_corpus, sample_subset
from .index import IndexParams, build_index, load_index, save_index
from .scoring import EvalConfig, Evaluator, Kind, Variant, evaluate_dataset, load_summaries
from .text import PretaggedTagger, Strategy


def _default_threads() -> int:
    return os.cpu_count() or 1


def _add_run_flags(p):
    p.add_argument("--config", required=True, type=Path, help="experiment config file (key = value)")
    p.add_argument("--threads", type=int, default=_default_threads(),
                   help="worker threads for scoring (default: available CPUs)")
    p.add_argument("--seed", type=int, help="base sampling seed; overrides the config value")
    p.add_argument("--out", type=Path, help="output directory; overrides the config value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gesera", description="Summary evaluation by overlap of retrieved documents."
    )
    parser.add_argument("--version", action="version", version=f"gesera {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-index", help="index a corpus (or a seeded random subset of it)")
    p.add_argument("--corpus", required=True, type=Path, help="corpus file or directory")
    p.add_argument("--format", choices=FORMATS, default="jsonl", help="corpus format (default: jsonl)")
    p.add_argument("--size", type=int, help="index only SIZE randomly selected documents")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default: 0)")
    p.add_argument("--k1", type=float, default=1.2, help="BM25F k1 (default: 1.2)")
    p.add_argument("--b", type=float, default=0.75, help="BM25F b (default: 0.75)")
    p.add_argument("--title-boost", type=float, default=2.0, help="title field boost (default: 2.0)")
    p.add_argument("--body-boost", type=float, default=1.0, help="body field boost (default: 1.0)")
    p.add_argument("--out", required=True, type=Path, help="index file to write (.gz compresses)")

    p = sub.add_parser("score", help="score candidate summaries against references")
    p.add_argument("--index", required=True, type=Path, help="index file from build-index")
    p.add_argument("--candidates", required=True, type=Path, help="candidate summaries (JSON lines)")
    p.add_argument("--references", required=True, type=Path, help="reference summaries (JSON lines)")
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default="gesera",
                   help="query reformulation (default: gesera)")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="sera",
                   help="score variant (default: sera)")
    p.add_argument("--cutoff", type=int, default=10, help="retrieved list length (default: 10)")
    p.add_argument("--pretagged", action="store_true", help="summary texts are token/TAG pairs")
    p.add_argument("--out", type=Path, help="CSV file to write (default: stdout)")

    p = sub.add_parser("sweep", help="correlations over a grid of index sizes")
    _add_run_flags(p)

    p = sub.add_parser("annotators", help="correlations per annotator subset")
    _add_run_flags(p)

    p = sub.add_parser("pos-report", help="POS class percentages per corpus")
    p.add_argument("corpora", nargs="+", type=Path, help="corpus files or directories")
    p.add_argument("--format", choices=FORMATS, default="jsonl", help="corpus format (default: jsonl)")
    p.add_argument("--pretagged", action="store_true", help="document bodies are token/TAG pairs")
    p.add_argument("--out", type=Path, help="CSV file to write (default: stdout)")

    p = sub.add_parser("tac-table", help="metric-by-correlation table from TAC peers/models")
    p.add_argument("--index", required=True, type=Path, help="index file from build-index")
    p.add_argument("--peers", required=True, type=Path, help="directory of peer summaries")
    p.add_argument("--models", required=True, type=Path, help="directory of model summaries")
    p.add_argument("--manual", required=True, action="append", metavar="NAME=PATH:COLUMN",
                   help="manual score table and zero-based score column; repeatable")
    p.add_argument("--strategies", default="raw,np,kw,gesera", help="comma-separated strategies")
    p.add_argument("--cutoffs", default="5,10", help="comma-separated cutoffs")
    p.add_argument("--threads", type=int, default=_default_threads(), help="worker threads")
    p.add_argument("--out", type=Path, help="CSV file to write (default: stdout)")
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_build_index(args) -> int:
    collection = load_corpus(args.corpus, args.format)
    if args.size is not None:
        collection = sample_subset(collection, SubsetSpec(args.size, args.seed))
    params = IndexParams(args.k1, args.b, args.title_boost, args.body_boost)
    index = build_index(collection, params)
    save_index(index, args.out)
    print(f"indexed {index.doc_count} documents, {len(index.postings)} terms -> {args.out}",
          file=sys.stderr)
    return 0


def cmd_score(args) -> int:
    index = load_index(args.index)
    candidates = [r for r in load_summaries(args.candidates) if r.kind is Kind.CANDIDATE]
    references = [r for r in load_summaries(args.references) if r.kind is Kind.REFERENCE]
    evaluator = Evaluator(index, PretaggedTagger() if args.pretagged else None)
    config = EvalConfig(args.strategy, args.variant, args.cutoff)
    table = evaluate_dataset(candidates, references, [config], evaluator=evaluator)
    for topic, system, metric in table.degenerate:
        print(f"warning: {metric} ({topic}, {system}): empty query, retrieved nothing",
              file=sys.stderr)
    _emit(table.to_csv(), args.out)
    return 0


def _run_config(args):
    from .experiments import ExperimentConfig

    config = ExperimentConfig.from_file(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.out is not None:
        config.output = args.out
    return config


def cmd_sweep(args) -> int:
    from .experiments import run_sweep

    config = _run_config(args)
    result = run_sweep(config, threads=args.threads)
    errors = sum(1 for r in result.rows if r.error)
    print(f"{len(result)} rows ({errors} errors) -> {config.output}", file=sys.stderr)
    return 0


def cmd_annotators(args) -> int:
    from .experiments import run_annotator_study

    config = _run_config(args)
    result = run_annotator_study(config, threads=args.threads)
    print(f"{len(result)} rows -> {config.output}", file=sys.stderr)
    return 0


def cmd_pos_report(args) -> int:
    from .experiments import report_pos_distribution

    tagger = PretaggedTagger() if args.pretagged else None
    _emit(report_pos_distribution(args.corpora, args.format, tagger), args.out)
    return 0


def cmd_tac_table(args) -> int:
    from .tac import correlation_table, load_tac_manual, load_tac_summaries

    manual = {}
    for spec in args.manual:
        name, _, rest = spec.partition("=")
        path, _, column = rest.rpartition(":")
        if not name or not path or not column.isdigit():
            raise ValueError(f"--manual expects NAME=PATH:COLUMN, got {spec!r}")
        manual[name] = load_tac_manual(path, int(column), name)
    records = load_tac_summaries(args.peers, args.models)
    candidates = [r for r in records if r.kind is Kind.CANDIDATE]
    references = [r for r in records if r.kind is Kind.REFERENCE]
    evaluator = Evaluator(load_index(args.index))
    configs = [
        EvalConfig(s, v, int(c))
        for s in args.strategies.split(",")
        for v in Variant
        for c in args.cutoffs.split(",")
    ]
    table = evaluate_dataset(candidates, references, configs, threads=args.threads, evaluator=evaluator)
    _emit(correlation_table(table, manual, [c.metric for c in configs]), args.out)
    return 0


COMMANDS = {
    "build-index": cmd_build_index,
    "score": cmd_score,
    "sweep": cmd_sweep,
    "annotators": cmd_annotators,
    "pos-report": cmd_pos_report,
    "tac-table": cmd_tac_table,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"gesera {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
