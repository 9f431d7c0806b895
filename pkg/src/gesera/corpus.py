"""Document collections used as retrieval indexes, and seeded subsetting."""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

logger = logging.getLogger(__name__)

FORMATS = ("jsonl", "dir_of_text")


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class Document:
    id: str
    body: str
    title: str = ""

    def __post_init__(self):
        if not self.id:
            raise CorpusError("document id must be non-empty")
        if not self.body.strip():
            raise CorpusError(f"document {self.id!r}: body is empty")


class DocumentCollection(Sequence[Document]):
    """Immutable, ordered collection of documents with unique ids."""

    def __init__(self, documents, source_label: str = ""):
        docs = tuple(documents)
        seen = set()
        for doc in docs:
            if doc.id in seen:
                raise CorpusError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
        self._documents = docs
        self.source_label = source_label

    @property
    def documents(self) -> tuple[Document, ...]:
        return self._documents

    def __len__(self):
        return len(self._documents)

    def __getitem__(self, i):
        return self._documents[i]

    def __iter__(self) -> Iterator[Document]:
        return iter(self._documents)

    def __eq__(self, other):
        if not isinstance(other, DocumentCollection):
            return NotImplemented
        return self._documents == other._documents

    def __repr__(self):
        return f"DocumentCollection({len(self)} docs, source={self.source_label!r})"

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self._documents]


@dataclass(frozen=True)
class SubsetSpec:
    size: int
    seed: int = 0

    def __post_init__(self):
        if self.size <= 0:
            raise CorpusError(f"subset size must be positive, got {self.size}")


def _load_jsonl(path: Path) -> list[Document]:
    docs = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: malformed JSON ({exc.msg})") from None
            if not isinstance(record, dict):
                raise CorpusError(f"line {lineno}: expected an object")
            for field in ("id", "body"):
                if field not in record:
                    raise CorpusError(f"line {lineno}: missing field {field}")
            doc_id = str(record["id"])
            if doc_id in seen:
                raise CorpusError(f"line {lineno}: duplicate id {doc_id!r}")
            seen.add(doc_id)
            try:
                docs.append(Document(doc_id, str(record["body"]), str(record.get("title") or "")))
            except CorpusError as exc:
                raise CorpusError(f"line {lineno}: {exc}") from None
    return docs


def _load_dir(path: Path) -> list[Document]:
    docs = []
    for fname in sorted(path.glob("*.txt")):
        text = fname.read_text(encoding="utf-8")
        lines = text.split("\n")
        # title only when the first line is followed by a blank line
        if len(lines) >= 3 and lines[0].strip() and not lines[1].strip():
            title, body = lines[0].strip(), "\n".join(lines[2:])
        else:
            title, body = "", text
        try:
            docs.append(Document(fname.stem, body.strip(), title))
        except CorpusError as exc:
            raise CorpusError(f"{fname.name}: {exc}") from None
    return docs


def load_corpus(path, format: str = "jsonl") -> DocumentCollection:
    """Load documents from a JSON-lines file or a directory of ``*.txt`` files.

    Documents keep file order (directory entries are sorted by filename).
    An empty source yields an empty collection and a warning.
    """
    path = Path(path)
    if format not in FORMATS:
        raise CorpusError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    if not path.exists():
        raise FileNotFoundError(path)
    docs = _load_jsonl(path) if format == "jsonl" else _load_dir(path)
    if not docs:
        warnings.warn(f"corpus {path} contains no documents", stacklevel=2)
    logger.info("loaded %d documents from %s", len(docs), path)
    return DocumentCollection(docs, source_label=str(path))


def write_corpus(collection, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in collection:
            record = {"id": doc.id, "title": doc.title, "body": doc.body}
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def sample_subset(collection: DocumentCollection, spec: SubsetSpec) -> DocumentCollection:
    """Draw ``spec.size`` documents uniformly without replacement.

    The draw is a permutation from numpy's PCG64 generator seeded with
    ``spec.seed``, truncated to ``spec.size``; the result is therefore a pure
    function of the collection order, the seed and the size.
    """
    n = len(collection)
    if spec.size > n:
        raise CorpusError(f"subset size {spec.size} exceeds collection size {n}")
    rng = np.random.Generator(np.random.PCG64(spec.seed % 2**64))
    picks = rng.permutation(n)[: spec.size]
    label = f"{collection.source_label}[size={spec.size},seed={spec.seed}]"
    return DocumentCollection((collection[int(i)] for i in picks), source_label=label)
