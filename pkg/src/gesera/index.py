"""Inverted index with BM25F field-weighted ranking.

The index covers two fields, ``title`` and ``body``. Scoring follows the
simple BM25F variant: per-field term frequencies are length-normalized,
weighted by the field boost and summed into one pseudo-frequency, which is
then saturated once::

    tf~(w, d)  = sum_f boost_f * tf(w, f, d) / (1 - b + b * len_f(d) / avglen_f)
    score(q, d) = sum_{w in q} idf(w) * tf~ / (k1 + tf~)
    idf(w)      = ln(1 + (N - df + 0.5) / (df + 0.5))
"""

from __future__ import annotations

import gzip
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .text import Query, tokenize

FIELDS = ("title", "body")
FORMAT_NAME = "gesera-index"
FORMAT_VERSION = 1


class IndexFormatError(ValueError):
    pass


@dataclass(frozen=True)
class IndexParams:
    k1: float = 1.2
    b: float = 0.75
    title_boost: float = 2.0
    body_boost: float = 1.0

    def __post_init__(self):
        if not self.k1 > 0:
            raise ValueError(f"k1 must be positive, got {self.k1}")
        if not 0 <= self.b <= 1:
            raise ValueError(f"b must lie in [0, 1], got {self.b}")
        if self.title_boost < 0 or not self.body_boost > 0:
            raise ValueError("title boost must be >= 0 and body boost > 0")

    @property
    def field_boosts(self) -> dict[str, float]:
        return {"title": self.title_boost, "body": self.body_boost}


@dataclass(frozen=True)
class RankedList:
    """Retrieved documents, best first. ``degenerate`` marks an empty query."""

    entries: tuple[tuple[str, float], ...]
    cutoff: int
    degenerate: bool = False

    def __post_init__(self):
        if self.cutoff <= 0:
            raise ValueError("cutoff must be positive")
        if len(self.entries) > self.cutoff:
            raise ValueError("more entries than the cutoff allows")
        ids = self.ids
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate doc ids in ranked list")

    @classmethod
    def from_ids(cls, ids, cutoff=None):
        """Build a list from bare ids (scores descend by rank); handy for tests."""
        ids = list(ids)
        n = len(ids)
        return cls(tuple((d, float(n - i)) for i, d in enumerate(ids)), cutoff or max(n, 1))

    @property
    def ids(self) -> list[str]:
        return [d for d, _ in self.entries]

    @property
    def scores(self) -> list[float]:
        return [s for _, s in self.entries]

    def truncate(self, k: int) -> RankedList:
        return RankedList(self.entries[:k], k, self.degenerate)

    def __len__(self):
        return len(self.entries)


class InvertedIndex:
    """Build-once inverted index. Treat instances as read-only.

    Documents are stored in ascending id order; ``postings[term]`` is a pair
    ``(positions, tf)`` where ``positions`` are sorted document positions and
    ``tf`` has one column per field.
    """

    def __init__(self, doc_ids, field_lengths, postings, params: IndexParams, source_label=""):
        self.doc_ids: tuple[str, ...] = tuple(doc_ids)
        self.field_lengths = np.asarray(field_lengths, dtype=np.int64).reshape(-1, len(FIELDS))
        self.postings: dict[str, tuple[np.ndarray, np.ndarray]] = postings
        self.params = params
        self.source_label = source_label
        self._pos = {d: i for i, d in enumerate(self.doc_ids)}
        self.avg_lengths = self.field_lengths.mean(axis=0) if self.doc_count else np.zeros(2)
        avg = np.where(self.avg_lengths > 0, self.avg_lengths, 1.0)
        norm = 1 - params.b + params.b * self.field_lengths / avg
        # a field that is empty everywhere never carries a tf, so its norm is moot
        self._norm = np.where(self.avg_lengths > 0, norm, 1.0)
        self._boosts = np.array([params.title_boost, params.body_boost])

    @property
    def doc_count(self) -> int:
        return len(self.doc_ids)

    @property
    def doc_lengths(self) -> dict[str, dict[str, int]]:
        return {
            d: dict(zip(FIELDS, map(int, row))) for d, row in zip(self.doc_ids, self.field_lengths)
        }

    def position(self, doc_id: str) -> int:
        try:
            return self._pos[doc_id]
        except KeyError:
            raise KeyError(f"unknown document id {doc_id!r}") from None

    def df(self, word: str) -> int:
        posting = self.postings.get(word)
        return 0 if posting is None else len(posting[0])

    def idf(self, word: str) -> float:
        df = self.df(word)
        n = self.doc_count
        return max(0.0, math.log(1 + (n - df + 0.5) / (df + 0.5)))

    def term_frequencies(self, word: str, doc_id: str) -> dict[str, int]:
        pos = self.position(doc_id)
        posting = self.postings.get(word)
        if posting is not None:
            i = int(np.searchsorted(posting[0], pos))
            if i < len(posting[0]) and posting[0][i] == pos:
                return dict(zip(FIELDS, map(int, posting[1][i])))
        return dict.fromkeys(FIELDS, 0)

    def stats(self) -> dict:
        return {
            "doc_count": self.doc_count,
            "vocabulary": len(self.postings),
            "avg_lengths": dict(zip(FIELDS, map(float, self.avg_lengths))),
            "postings": sum(len(p[0]) for p in self.postings.values()),
        }


def build_index(collection, params: IndexParams | None = None) -> InvertedIndex:
    """Index the title and body of every document.

    Stopwords are indexed like any other word; query-side reformulation is
    what keeps them out of scoring.
    """
    params = params or IndexParams()
    docs = sorted(collection, key=lambda d: d.id)
    if not docs:
        raise ValueError("cannot build an index over an empty collection")
    lengths = np.zeros((len(docs), len(FIELDS)), dtype=np.int64)
    acc: dict[str, list[tuple[int, int, int]]] = {}
    for pos, doc in enumerate(docs):
        title, body = Counter(tokenize(doc.title)), Counter(tokenize(doc.body))
        lengths[pos] = (sum(title.values()), sum(body.values()))
        for word in title.keys() | body.keys():
            acc.setdefault(word, []).append((pos, title[word], body[word]))
    postings = {}
    for word in sorted(acc):
        rows = np.array(acc[word], dtype=np.int64)
        postings[word] = (rows[:, 0].copy(), rows[:, 1:].copy())
    label = getattr(collection, "source_label", "")
    return InvertedIndex([d.id for d in docs], lengths, postings, params, label)


def _words(query) -> list[str]:
    if isinstance(query, Query):
        return query.words()
    return list(dict.fromkeys(w for term in query for w in term.split()))


def bm25f_score(index: InvertedIndex, query, doc_id: str) -> float:
    """BM25F score of one document; phrase terms count as bags of words."""
    pos = index.position(doc_id)
    k1 = index.params.k1
    score = 0.0
    for word in _words(query):
        posting = index.postings.get(word)
        if posting is None:
            continue
        i = int(np.searchsorted(posting[0], pos))
        if i == len(posting[0]) or posting[0][i] != pos:
            continue
        pseudo = float((posting[1][i] * index._boosts / index._norm[pos]).sum())
        score += index.idf(word) * pseudo / (k1 + pseudo)
    return score


def score_all(index: InvertedIndex, query) -> np.ndarray:
    """BM25F scores of every document, in index (ascending id) order."""
    scores = np.zeros(index.doc_count)
    k1 = index.params.k1
    for word in _words(query):
        posting = index.postings.get(word)
        if posting is None:
            continue
        positions, tf = posting
        pseudo = (tf * index._boosts / index._norm[positions]).sum(axis=1)
        scores[positions] += index.idf(word) * pseudo / (k1 + pseudo)
    return scores


def retrieve(index: InvertedIndex, query, k: int) -> RankedList:
    """Top-``k`` documents by BM25F score, ties broken by ascending doc id.

    Documents scoring zero are never returned. An empty query gives an empty
    list with ``degenerate=True``.
    """
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    if not _words(query):
        return RankedList((), k, degenerate=True)
    scores = score_all(index, query)
    matched = np.flatnonzero(scores > 0)
    # positions follow id order, so the secondary key is the id tie-break
    order = matched[np.lexsort((matched, -scores[matched]))][:k]
    return RankedList(tuple((index.doc_ids[i], float(scores[i])) for i in order), k)


def _open(path, mode):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode + "t", encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def save_index(index: InvertedIndex, path) -> None:
    """Write a line-delimited JSON index file (gzip when the name ends in .gz)."""
    with _open(path, "w") as fh:
        header = {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "params": asdict(index.params),
            "doc_count": index.doc_count,
            "vocabulary": len(index.postings),
            "source": index.source_label,
        }
        fh.write(json.dumps(header) + "\n")
        for doc_id, row in zip(index.doc_ids, index.field_lengths):
            fh.write(json.dumps([doc_id, *map(int, row)]) + "\n")
        for word, (positions, tf) in index.postings.items():
            fh.write(json.dumps([word, positions.tolist(), tf.tolist()]) + "\n")


def load_index(path) -> InvertedIndex:
    with _open(path, "r") as fh:
        try:
            header = json.loads(fh.readline())
        except json.JSONDecodeError:
            raise IndexFormatError(f"{path}: not an index file") from None
        if not isinstance(header, dict) or header.get("format") != FORMAT_NAME:
            raise IndexFormatError(f"{path}: not an index file")
        if header.get("version") != FORMAT_VERSION:
            raise IndexFormatError(
                f"{path}: index format version {header.get('version')}, "
                f"this build reads version {FORMAT_VERSION}"
            )
        n = header["doc_count"]
        ids, lengths = [], []
        for _ in range(n):
            doc_id, *row = json.loads(fh.readline())
            ids.append(doc_id)
            lengths.append(row)
        postings = {}
        for line in fh:
            word, positions, tf = json.loads(line)
            postings[word] = (
                np.array(positions, dtype=np.int64),
                np.array(tf, dtype=np.int64).reshape(-1, len(FIELDS)),
            )
    if len(postings) != header["vocabulary"]:
        raise IndexFormatError(f"{path}: truncated index file")
    return InvertedIndex(ids, lengths, postings, IndexParams(**header["params"]), header["source"])
