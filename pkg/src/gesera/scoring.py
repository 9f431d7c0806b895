"""Retrieval-overlap scores and the summary evaluation pipeline.

``sera`` is the rank-blind overlap between the documents retrieved for a
candidate and for each reference, averaged over references. ``sera_dis``
credits each shared document by ``1 / log(|j - k| + 2)`` where ``j`` and
``k`` are its ranks in the two lists, normalized by the best achievable sum
``cutoff / log 2`` per reference.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .index import InvertedIndex, RankedList, retrieve
from .text import Strategy, default_tagger, reformulate

logger = logging.getLogger(__name__)


class Variant(str, enum.Enum):
    SERA = "sera"
    SERA_DIS = "sera-dis"


class Kind(str, enum.Enum):
    CANDIDATE = "candidate"
    REFERENCE = "reference"


class EvaluationError(ValueError):
    pass


def _check_references(references):
    if len(references) == 0:
        raise EvaluationError("at least one reference list is required")


def sera(candidate: RankedList, references: Sequence[RankedList]) -> float:
    """Mean over references of ``|C & G_i| / |C|``; 0.0 when ``C`` is empty."""
    _check_references(references)
    if len(candidate) == 0:
        return 0.0
    cand = set(candidate.ids)
    total = sum(len(cand.intersection(ref.ids)) / len(cand) for ref in references)
    return total / len(references)


def sera_dis(candidate: RankedList, references: Sequence[RankedList], log_base: float = math.e) -> float:
    """Rank-displacement discounted overlap, in [0, 1].

    ``log_base`` only exists to show the score does not depend on it; the
    same base is used for the discount and the normalizer.
    """
    _check_references(references)
    if len(candidate) == 0:
        return 0.0
    log = math.log if log_base == math.e else (lambda x: math.log(x, log_base))
    d_max = candidate.cutoff / log(2)
    total = 0.0
    for ref in references:
        rank = {doc: k for k, doc in enumerate(ref.ids)}
        for j, doc in enumerate(candidate.ids):
            k = rank.get(doc)
            if k is not None:
                total += 1.0 / log(abs(j - k) + 2)
    return total / (len(references) * d_max)


SCORERS = {Variant.SERA: sera, Variant.SERA_DIS: sera_dis}

_STRATEGY_LABEL = {
    Strategy.RAW: "",
    Strategy.NOUN_PHRASE: "-NP",
    Strategy.KEYWORD: "-KW",
    Strategy.GESERA_POS: "",
}


def metric_name(strategy, variant, cutoff: int) -> str:
    """Conventional method name, e.g. ``SERA-DIS-NP-10`` or ``GeSERA-5``."""
    strategy, variant = Strategy(strategy), Variant(variant)
    base = "GeSERA" if strategy is Strategy.GESERA_POS else "SERA"
    dis = "-DIS" if variant is Variant.SERA_DIS else ""
    return f"{base}{dis}{_STRATEGY_LABEL[strategy]}-{cutoff}"


@dataclass(frozen=True)
class SummaryRecord:
    topic_id: str
    system_id: str
    kind: Kind
    text: str

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))


@dataclass(frozen=True)
class EvalConfig:
    strategy: Strategy
    variant: Variant
    cutoff: int
    index: InvertedIndex | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.cutoff <= 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff}")

    @property
    def metric(self) -> str:
        return metric_name(self.strategy, self.variant, self.cutoff)


@dataclass(frozen=True)
class Evaluation:
    score: float
    degenerate: bool = False


class Evaluator:
    """Reformulate, retrieve and compare against one index.

    Retrieved lists are cached per (text, strategy) at the largest cutoff
    requested so far; shorter cutoffs are prefixes of longer ones.
    """

    def __init__(self, index: InvertedIndex, tagger=None, stopwords=None):
        self.index = index
        self.tagger = tagger or default_tagger()
        if stopwords is None:
            stopwords = getattr(self.tagger, "stopwords", None)
        self.stopwords = stopwords
        self._cache: dict[tuple[str, Strategy], RankedList] = {}

    def query(self, text: str, strategy):
        return reformulate(self.tagger.tag_text(text), strategy, self.stopwords)

    def ranked(self, text: str, strategy, cutoff: int) -> RankedList:
        key = (text, Strategy(strategy))
        hit = self._cache.get(key)
        if hit is None or hit.cutoff < cutoff:
            hit = retrieve(self.index, self.query(text, strategy), cutoff)
            self._cache[key] = hit
        return hit.truncate(cutoff) if hit.cutoff > cutoff else hit

    def evaluate(self, candidate: SummaryRecord, references, config: EvalConfig) -> Evaluation:
        if not references:
            raise EvaluationError(
                f"no references for topic {candidate.topic_id!r} (system {candidate.system_id!r})"
            )
        for ref in references:
            if ref.kind is not Kind.REFERENCE:
                raise EvaluationError(f"record {ref.system_id!r} is not a reference")
            if ref.topic_id != candidate.topic_id:
                raise EvaluationError(
                    f"reference topic {ref.topic_id!r} does not match candidate topic "
                    f"{candidate.topic_id!r}"
                )
        cand = self.ranked(candidate.text, config.strategy, config.cutoff)
        refs = [self.ranked(r.text, config.strategy, config.cutoff) for r in references]
        score = SCORERS[config.variant](cand, refs)
        return Evaluation(score, degenerate=len(cand) == 0)


def evaluate_summary(
    candidate: SummaryRecord,
    references: Sequence[SummaryRecord],
    config: EvalConfig,
    evaluator: Evaluator | None = None,
) -> Evaluation:
    """Score one candidate summary against its references."""
    if evaluator is None:
        if config.index is None:
            raise EvaluationError("config has no index")
        evaluator = Evaluator(config.index)
    return evaluator.evaluate(candidate, references, config)


@dataclass(frozen=True)
class ScoreRow:
    topic_id: str
    system_id: str
    metric: str
    score: float


@dataclass
class ScoreTable:
    rows: list[ScoreRow] = field(default_factory=list)
    degenerate: list[tuple[str, str, str]] = field(default_factory=list)

    HEADER = ("topic_id", "system_id", "metric", "score")

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def metrics(self) -> list[str]:
        return list(dict.fromkeys(r.metric for r in self.rows))

    def filter(self, metric: str) -> list[ScoreRow]:
        return [r for r in self.rows if r.metric == metric]

    def sorted(self) -> ScoreTable:
        key = lambda r: (r.metric, r.topic_id, r.system_id)  # noqa: E731
        return ScoreTable(sorted(self.rows, key=key), sorted(self.degenerate))

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.HEADER)
        for r in self.rows:
            writer.writerow((r.topic_id, r.system_id, r.metric, repr(r.score)))
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text

    @classmethod
    def from_csv(cls, path) -> ScoreTable:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            missing = set(cls.HEADER) - set(reader.fieldnames or ())
            if missing:
                raise EvaluationError(f"{path}: missing columns {sorted(missing)}")
            rows = [
                ScoreRow(r["topic_id"], r["system_id"], r["metric"], float(r["score"]))
                for r in reader
            ]
        return cls(rows)


def group_references(references: Iterable[SummaryRecord], annotators=None) -> dict[str, list]:
    """References by topic, optionally restricted to an annotator subset."""
    by_topic: dict[str, list[SummaryRecord]] = {}
    for ref in references:
        if ref.kind is not Kind.REFERENCE:
            raise EvaluationError(f"record ({ref.topic_id}, {ref.system_id}) is not a reference")
        if annotators is not None and ref.system_id not in annotators:
            continue
        by_topic.setdefault(ref.topic_id, []).append(ref)
    for refs in by_topic.values():
        refs.sort(key=lambda r: r.system_id)
    return by_topic


def evaluate_dataset(
    candidates: Sequence[SummaryRecord],
    references: Sequence[SummaryRecord],
    configs: Sequence[EvalConfig],
    annotators=None,
    threads: int = 1,
    evaluator: Evaluator | None = None,
) -> ScoreTable:
    """Score every (candidate, config) pair.

    ``annotators`` restricts references to the given reference system ids.
    Rows come out sorted by (metric, topic, system) whatever the thread count.
    """
    by_topic = group_references(references, annotators)
    missing = sorted({c.topic_id for c in candidates} - by_topic.keys())
    if missing:
        raise EvaluationError(f"topics without references: {', '.join(missing)}")
    evaluators: dict[int, Evaluator] = {}
    if evaluator is not None:
        evaluators[id(evaluator.index)] = evaluator

    def evaluator_for(cfg):
        if cfg.index is None:
            if evaluator is None:
                raise EvaluationError(f"config {cfg.metric} has no index")
            return evaluator
        ev = evaluators.get(id(cfg.index))
        if ev is None:
            ev = evaluators[id(cfg.index)] = Evaluator(cfg.index)
        return ev

    pairs = [(ev, cfg) for cfg in configs for ev in [evaluator_for(cfg)]]

    def run(cand):
        out = []
        for ev, cfg in pairs:
            result = ev.evaluate(cand, by_topic[cand.topic_id], cfg)
            out.append((cfg.metric, result))
        return cand, out

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, candidates))
    else:
        results = [run(c) for c in candidates]

    table = ScoreTable()
    for cand, out in results:
        for metric, result in out:
            table.rows.append(ScoreRow(cand.topic_id, cand.system_id, metric, result.score))
            if result.degenerate:
                table.degenerate.append((cand.topic_id, cand.system_id, metric))
    if table.degenerate:
        logger.warning("%d degenerate (empty) candidate queries", len(table.degenerate))
    logger.info("scored %d candidates x %d configs", len(candidates), len(configs))
    return table.sorted()


def load_summaries(path) -> list[SummaryRecord]:
    """Read a JSON-lines summary dataset (topic_id, system_id, kind, text)."""
    records = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                rec = SummaryRecord(
                    str(obj["topic_id"]), str(obj["system_id"]), obj["kind"], str(obj["text"])
                )
            except json.JSONDecodeError as exc:
                raise EvaluationError(f"{path} line {lineno}: malformed JSON ({exc.msg})") from None
            except KeyError as exc:
                raise EvaluationError(f"{path} line {lineno}: missing field {exc.args[0]}") from None
            except ValueError as exc:
                raise EvaluationError(f"{path} line {lineno}: {exc}") from None
            key = (rec.topic_id, rec.system_id, rec.kind)
            if key in seen:
                raise EvaluationError(f"{path} line {lineno}: duplicate record {key}")
            seen.add(key)
            records.append(rec)
    return records


def write_summaries(records: Iterable[SummaryRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            obj = {"topic_id": r.topic_id, "system_id": r.system_id, "kind": r.kind.value, "text": r.text}
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def split_records(records):
    """Split a mixed dataset into (candidates, references)."""
    cands = [r for r in records if r.kind is Kind.CANDIDATE]
    refs = [r for r in records if r.kind is Kind.REFERENCE]
    return cands, refs

