"""Synthetic benchmarks with a known system quality ordering.

Documents, references and candidate summaries are drawn from topic-specific
vocabularies. Each candidate system has a quality ``q``: it writes a clean
topical summary and then replaces every content word with probability
``1 - q`` by a noise word, either out-of-vocabulary or taken from a single
distractor topic, so low-quality summaries drift towards the wrong documents.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import Document, DocumentCollection
from .scoring import Kind, SummaryRecord
from .text import Tag, default_tagger

_CONSONANTS = list("bcdfghjklmnprstvz")
_VOWELS = list("aeiou")
FUNCTION_WORDS = ("the", "of", "and", "a", "in", "to", "is", "was", "for", "on", "with", "that", "by", "as")
PREPOSITIONS = ("between", "under", "near", "across", "within", "against")


class WordFactory:
    """Unique pronounceable nonsense words with a controlled heuristic tag."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.used: set[str] = set()
        self.tagger = default_tagger()

    def _stem(self) -> str:
        n = int(self.rng.integers(2, 4))
        return "".join(self.rng.choice(_CONSONANTS) + self.rng.choice(_VOWELS) for _ in range(n))

    def make(self, tag: Tag = Tag.NOUN) -> str:
        suffix = {Tag.NOUN: "", Tag.VERB: "ed", Tag.ADJECTIVE: "ous", Tag.OTHER: "ly"}[tag]
        while True:
            word = self._stem() + suffix
            if word not in self.used and self.tagger.tag_word(word) is tag:
                self.used.add(word)
                return word

    def batch(self, n: int, tag: Tag = Tag.NOUN) -> list[str]:
        return [self.make(tag) for _ in range(n)]


@dataclass
class SyntheticBenchmark:
    collection: DocumentCollection
    candidates: list[SummaryRecord]
    references: list[SummaryRecord]
    quality: dict[str, float]
    annotators: list[str] = field(default_factory=list)

    @property
    def records(self) -> list[SummaryRecord]:
        return self.candidates + self.references


def make_benchmark(
    seed: int = 0,
    n_topics: int = 30,
    n_systems: int = 10,
    n_docs: int = 2000,
    n_annotators: int = 4,
    noise_annotators=(),
    doc_length: int = 80,
    summary_length: int = 40,
) -> SyntheticBenchmark:
    """Generate an index corpus plus a summary dataset with graded systems.

    System ``S01`` has the highest quality and ``S<n>`` the lowest; quality
    values are evenly spaced in [0.05, 0.95]. Annotators listed in
    ``noise_annotators`` summarize a randomly chosen unrelated topic instead of the real one.
    """
    rng = np.random.default_rng(seed)
    words = WordFactory(rng)
    topic_vocab = [
        words.batch(30) + words.batch(8, Tag.VERB) + words.batch(8, Tag.ADJECTIVE)
        for _ in range(n_topics)
    ]
    general = words.batch(200) + words.batch(60, Tag.VERB) + words.batch(40, Tag.ADJECTIVE)
    general += words.batch(30, Tag.OTHER) + list(PREPOSITIONS)
    oov = words.batch(400)

    def draw(n, focus, vocab, p_topic, p_general):
        out = []
        kinds = rng.random(n)
        for u in kinds:
            if u < p_topic:
                out.append(vocab[rng.choice(len(vocab), p=focus)])
            elif u < p_topic + p_general:
                out.append(general[rng.integers(len(general))])
            else:
                out.append(FUNCTION_WORDS[rng.integers(len(FUNCTION_WORDS))])
        return out

    docs = []
    for i in range(n_docs):
        t = i % n_topics
        vocab = topic_vocab[t]
        focus = rng.dirichlet(np.full(len(vocab), 0.3))
        body = draw(doc_length, focus, vocab, 0.45, 0.30)
        title = [vocab[j] for j in rng.choice(len(vocab), size=3, p=focus)]
        docs.append(Document(f"doc{i:05d}", " ".join(body), " ".join(title)))
    collection = DocumentCollection(docs, source_label=f"synthetic(seed={seed})")

    annotators = [f"A{i + 1}" for i in range(n_annotators)]
    systems = [f"S{i + 1:02d}" for i in range(n_systems)]
    quality = dict(zip(systems, np.linspace(0.95, 0.05, n_systems).tolist()))
    candidates, references = [], []
    for t in range(n_topics):
        topic_id = f"T{t + 1:03d}"
        vocab = topic_vocab[t]
        focus = rng.dirichlet(np.full(len(vocab), 0.5))
        for a in annotators:
            if a in noise_annotators:
                other = topic_vocab[(t + 1 + rng.integers(n_topics - 1)) % n_topics]
                other_focus = rng.dirichlet(np.full(len(other), 0.5))
                text = draw(summary_length, other_focus, other, 0.7, 0.1)
            else:
                text = draw(summary_length, focus, vocab, 0.7, 0.1)
            references.append(SummaryRecord(topic_id, a, Kind.REFERENCE, " ".join(text)))
        for s in systems:
            q = quality[s]
            clean = draw(summary_length, focus, vocab, 0.7, 0.1)
            distractor = topic_vocab[(t + 1 + rng.integers(n_topics - 1)) % n_topics]
            text = []
            for w in clean:
                if w not in FUNCTION_WORDS and w not in PREPOSITIONS and rng.random() > q:
                    pool = oov if rng.random() < 0.3 else distractor
                    w = pool[rng.integers(len(pool))]
                text.append(w)
            candidates.append(SummaryRecord(topic_id, s, Kind.CANDIDATE, " ".join(text)))
    return SyntheticBenchmark(collection, candidates, references, quality, annotators)
