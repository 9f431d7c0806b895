"""Experiment runner: index-size sweeps, annotator studies, POS reports.

Configs are flat ``key = value`` text files; list values are comma
separated and annotator subsets are separated by ``;``::

    corpus = wiki.jsonl
    sizes = 10000, 15000, 30000
    seed = 13
    queries = tac2008.jsonl
    manual.pyramid = pyramid.csv
    manual.responsiveness = resp.csv
    strategies = raw, np, kw, gesera
    variants = sera, sera-dis
    cutoffs = 5, 10
    annotators = A1; A1,A2,A3; A1,A2,A3,A4
    output = results/

A manual file can be tied to one annotator subset with
``manual.pyramid@A1+A2+A3 = path``; the annotator study prefers it over the
plain entry for that subset.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .correlation import aggregate_to_system, correlate, load_manual_scores
from .corpus import FORMATS, SubsetSpec, load_corpus, sample_subset
from .index import IndexParams, build_index
from .scoring import EvalConfig, Evaluator, ScoreTable, Variant, evaluate_dataset, load_summaries, split_records
from .text import REPORT_CLASSES, Strategy, pos_distribution

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid config:\n  " + "\n  ".join(self.errors))


def _split(value: str, sep: str = ",") -> list[str]:
    return [v.strip() for v in value.split(sep) if v.strip()]


@dataclass
class ExperimentConfig:
    corpus: Path
    queries: Path
    sizes: list[int]
    manual: dict[str, Path]
    seed: int = 0
    corpus_format: str = "jsonl"
    strategies: list[Strategy] = field(default_factory=lambda: list(Strategy))
    variants: list[Variant] = field(default_factory=lambda: list(Variant))
    cutoffs: list[int] = field(default_factory=lambda: [5, 10])
    annotator_subsets: list[frozenset[str]] = field(default_factory=list)
    subset_manual: dict[tuple[str, frozenset[str]], Path] = field(default_factory=dict)
    output: Path = Path("results")
    params: IndexParams = field(default_factory=IndexParams)
    threads: int = 1

    @classmethod
    def from_file(cls, path) -> ExperimentConfig:
        path = Path(path)
        return cls.from_text(path.read_text(encoding="utf-8"), base=path.parent)

    @classmethod
    def from_text(cls, text: str, base=Path(".")) -> ExperimentConfig:
        """Parse and validate a config; every problem is reported at once."""
        base = Path(base)
        errors = []
        raw: dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                errors.append(f"line {lineno}: expected key = value")
                continue
            raw[key.strip()] = value.strip()

        def path_of(value):
            p = Path(value)
            return p if p.is_absolute() else base / p

        def ints(key, default=None):
            if key not in raw:
                return default
            try:
                return [int(v) for v in _split(raw[key])]
            except ValueError:
                errors.append(f"{key}: expected comma-separated integers")
                return default

        def number(key, default, kind=float):
            try:
                return kind(raw[key]) if key in raw else default
            except ValueError:
                errors.append(f"{key}: expected a number, got {raw[key]!r}")
                return default

        known = {
            "corpus", "corpus_format", "queries", "sizes", "seed", "strategies", "variants",
            "cutoffs", "annotators", "output", "k1", "b", "title_boost", "body_boost", "threads",
        }
        for key in raw:
            if key not in known and not key.startswith("manual."):
                errors.append(f"unknown key {key!r}")

        for key in ("corpus", "queries", "sizes"):
            if key not in raw:
                errors.append(f"missing required key {key!r}")
        corpus = path_of(raw.get("corpus", ""))
        queries = path_of(raw.get("queries", ""))
        for key, p in (("corpus", corpus), ("queries", queries)):
            if key in raw and not p.exists():
                errors.append(f"{key}: path does not exist: {p}")

        fmt = raw.get("corpus_format", "jsonl")
        if fmt not in FORMATS:
            errors.append(f"corpus_format: expected one of {FORMATS}, got {fmt!r}")

        sizes = ints("sizes", [])
        if any(s <= 0 for s in sizes):
            errors.append("sizes: every size must be positive")
        cutoffs = ints("cutoffs", [5, 10])
        if not cutoffs or any(c <= 0 for c in cutoffs):
            errors.append("cutoffs: need at least one positive cutoff")

        strategies, variants = [], []
        for name in _split(raw.get("strategies", "raw, np, kw, gesera")):
            try:
                strategies.append(Strategy(name))
            except ValueError:
                errors.append(f"strategies: unknown strategy {name!r}")
        for name in _split(raw.get("variants", "sera, sera-dis")):
            try:
                variants.append(Variant(name))
            except ValueError:
                errors.append(f"variants: unknown variant {name!r}")

        manual: dict[str, Path] = {}
        subset_manual: dict[tuple[str, frozenset[str]], Path] = {}
        for key, value in raw.items():
            if not key.startswith("manual."):
                continue
            method, _, subset = key[len("manual."):].partition("@")
            p = path_of(value)
            if not p.exists():
                errors.append(f"{key}: path does not exist: {p}")
            if subset:
                subset_manual[(method, frozenset(_split(subset, "+")))] = p
            else:
                manual[method] = p
        if not manual and not subset_manual:
            errors.append("at least one manual.<method> score file is required")

        subsets = []
        if "annotators" in raw:
            for chunk in raw["annotators"].split(";"):
                ids = frozenset(_split(chunk))
                if not ids:
                    errors.append("annotators: empty annotator subset")
                else:
                    subsets.append(ids)

        params = None
        try:
            params = IndexParams(
                number("k1", 1.2), number("b", 0.75),
                number("title_boost", 2.0), number("body_boost", 1.0),
            )
        except ValueError as exc:
            errors.append(str(exc))

        if errors:
            raise ConfigError(errors)
        return cls(
            corpus=corpus,
            queries=queries,
            sizes=sizes,
            manual=manual,
            seed=number("seed", 0, int),
            corpus_format=fmt,
            strategies=strategies,
            variants=variants,
            cutoffs=cutoffs,
            annotator_subsets=subsets,
            subset_manual=subset_manual,
            output=path_of(raw.get("output", "results")),
            params=params,
            threads=number("threads", 1, int),
        )

    def eval_configs(self, index=None) -> list[EvalConfig]:
        return [
            EvalConfig(s, v, c, index)
            for s in self.strategies
            for v in self.variants
            for c in self.cutoffs
        ]

    def fingerprint(self) -> str:
        """Hash of every setting that affects results (thread count excluded)."""
        payload = {
            "corpus": str(self.corpus),
            "queries": str(self.queries),
            "sizes": self.sizes,
            "seed": self.seed,
            "format": self.corpus_format,
            "manual": {k: str(v) for k, v in sorted(self.manual.items())},
            "subset_manual": sorted(
                [k[0], sorted(k[1]), str(v)] for k, v in self.subset_manual.items()
            ),
            "strategies": [s.value for s in self.strategies],
            "variants": [v.value for v in self.variants],
            "cutoffs": self.cutoffs,
            "annotators": [sorted(s) for s in self.annotator_subsets],
            "params": vars(self.params),
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def size_seed(base_seed: int, size: int) -> int:
    """Per-size sampling seed; independent of which other sizes are in the grid."""
    digest = hashlib.sha256(f"{base_seed}:{size}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass(frozen=True)
class SweepRow:
    index_size: int
    metric: str
    manual_method: str
    pearson: float | None
    spearman: float | None
    kendall: float | None
    n_systems: int = 0
    annotators: str = "all"
    error: str = ""


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    HEADER = (
        "annotators", "index_size", "metric", "manual_method",
        "pearson", "spearman", "kendall", "n_systems", "error",
    )

    def __len__(self):
        return len(self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.HEADER)
        for r in self.rows:
            w.writerow((
                r.annotators, r.index_size, r.metric, r.manual_method,
                *("" if v is None else repr(v) for v in (r.pearson, r.spearman, r.kendall)),
                r.n_systems, r.error,
            ))
        return buf.getvalue()

    def to_long_csv(self) -> str:
        """One row per coefficient, ready for line plots over index size."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("annotators", "index_size", "metric", "manual_method", "coefficient", "value"))
        for r in self.rows:
            for name in ("pearson", "spearman", "kendall"):
                value = getattr(r, name)
                if value is not None:
                    w.writerow((r.annotators, r.index_size, r.metric, r.manual_method, name, repr(value)))
        return buf.getvalue()


def _file_sha256(path: Path) -> str:
    h = hashlib.sha256()
    if path.is_dir():
        for p in sorted(path.glob("*.txt")):
            h.update(p.name.encode())
            h.update(p.read_bytes())
    else:
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                h.update(chunk)
    return h.hexdigest()


def write_manifest(config: ExperimentConfig, out_dir: Path, kind: str) -> Path:
    manifest = {
        "tool": "gesera",
        "version": __version__,
        "run": kind,
        "config_sha256": config.fingerprint(),
        "seed": config.seed,
        "size_seeds": {str(s): size_seed(config.seed, s) for s in config.sizes},
        "checksums": {
            "corpus": _file_sha256(config.corpus),
            "queries": _file_sha256(config.queries),
            **{f"manual.{k}": _file_sha256(v) for k, v in sorted(config.manual.items())},
        },
    }
    path = out_dir / f"{kind}_manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _label(subset) -> str:
    return "all" if subset is None else "+".join(sorted(subset))


def _correlate_table(table: ScoreTable, metrics, manual_vectors, size, label) -> list[SweepRow]:
    rows = []
    for metric in metrics:
        try:
            auto = aggregate_to_system(table, metric)
        except ValueError as exc:
            auto, auto_err = None, str(exc)
        for method, vector in manual_vectors:
            if auto is None:
                rows.append(SweepRow(size, metric, method, None, None, None, 0, label, auto_err))
                continue
            try:
                r = correlate(auto, vector)
                rows.append(SweepRow(
                    size, metric, method, r.pearson, r.spearman, r.kendall_tau_b, r.n_systems, label
                ))
            except ValueError as exc:
                rows.append(SweepRow(size, metric, method, None, None, None, 0, label, str(exc)))
    return rows


def _load_inputs(config: ExperimentConfig):
    collection = load_corpus(config.corpus, config.corpus_format)
    too_big = [s for s in config.sizes if s > len(collection)]
    if too_big:
        raise ConfigError([f"sizes {too_big} exceed corpus size {len(collection)}"])
    candidates, references = split_records(load_summaries(config.queries))
    return collection, candidates, references


def _index_for(collection, config, size):
    subset = sample_subset(collection, SubsetSpec(size, size_seed(config.seed, size)))
    return build_index(subset, config.params)


def _manual_vectors(config, subset=None):
    vectors = []
    for method, path in sorted(config.manual.items()):
        override = config.subset_manual.get((method, subset)) if subset is not None else None
        vectors.append((method, load_manual_scores(override or path, method)))
    if subset is not None:
        for (method, s), path in sorted(config.subset_manual.items(), key=lambda kv: kv[0][0]):
            if s == subset and method not in config.manual:
                vectors.append((method, load_manual_scores(path, method)))
    return vectors


def _write_outputs(result: SweepResult, out_dir: Path, kind: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{kind}.csv").write_text(result.to_csv(), encoding="utf-8")
    (out_dir / f"{kind}_long.csv").write_text(result.to_long_csv(), encoding="utf-8")


def run_sweep(config: ExperimentConfig, threads: int | None = None, write: bool = True) -> SweepResult:
    """Correlations for every (index size, metric, manual method) in the grid.

    Failures inside a grid cell become rows with an ``error`` message.
    """
    threads = threads or config.threads
    collection, candidates, references = _load_inputs(config)
    manual = _manual_vectors(config)
    metrics = [c.metric for c in config.eval_configs()]
    result = SweepResult()
    for size in config.sizes:
        logger.info("index size %d", size)
        try:
            index = _index_for(collection, config, size)
            table = evaluate_dataset(
                candidates, references, config.eval_configs(index), threads=threads
            )
        except ValueError as exc:
            result.rows.extend(
                SweepRow(size, m, method, None, None, None, 0, "all", f"size {size}: {exc}")
                for m in metrics
                for method, _ in manual
            )
            continue
        if write:
            config.output.mkdir(parents=True, exist_ok=True)
            table.to_csv(config.output / f"scores_{size}.csv")
        result.rows.extend(_correlate_table(table, metrics, manual, size, "all"))
    if write:
        _write_outputs(result, config.output, "sweep")
        write_manifest(config, config.output, "sweep")
    return result


def run_annotator_study(
    config: ExperimentConfig, threads: int | None = None, write: bool = True
) -> SweepResult:
    """Repeat the evaluation with references restricted to each annotator subset."""
    threads = threads or config.threads
    if not config.annotator_subsets:
        raise ConfigError(["annotators: no annotator subsets configured"])
    collection, candidates, references = _load_inputs(config)
    known = {r.system_id for r in references}
    unknown = sorted(set().union(*config.annotator_subsets) - known)
    if unknown:
        raise ConfigError([f"annotators: unknown annotator ids {unknown}; known: {sorted(known)}"])
    metrics = [c.metric for c in config.eval_configs()]
    result = SweepResult()
    for size in config.sizes:
        index = _index_for(collection, config, size)
        evaluator = Evaluator(index)
        for subset in config.annotator_subsets:
            label = _label(subset)
            manual = _manual_vectors(config, subset)
            try:
                table = evaluate_dataset(
                    candidates, references, config.eval_configs(index),
                    annotators=subset, threads=threads, evaluator=evaluator,
                )
            except ValueError as exc:
                result.rows.extend(
                    SweepRow(size, m, method, None, None, None, 0, label, str(exc))
                    for m in metrics
                    for method, _ in manual
                )
                continue
            result.rows.extend(_correlate_table(table, metrics, manual, size, label))
    if write:
        _write_outputs(result, config.output, "annotators")
        write_manifest(config, config.output, "annotators")
    return result


def report_pos_distribution(corpus_paths, corpus_format: str = "jsonl", tagger=None) -> str:
    """CSV of POS class percentages, one row per (corpus, class).

    A corpus that fails to load or is empty gets a single error row.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("corpus", "tag_class", "percentage", "error"))
    for path in corpus_paths:
        name = os.fspath(path)
        try:
            dist = pos_distribution(load_corpus(path, corpus_format), tagger)
        except (ValueError, OSError) as exc:
            w.writerow((name, "", "", str(exc) or type(exc).__name__))
            continue
        for cls in REPORT_CLASSES:
            w.writerow((name, cls, repr(dist.percentages[cls]), ""))
    return buf.getvalue()
