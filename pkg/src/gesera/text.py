"""Tokenization, POS tagging and query reformulation.

Four reformulation strategies turn a tagged summary into a retrieval query.
All of them only *filter* the summary's tokens; none invent words.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence


class Tag(str, enum.Enum):
    NOUN = "Noun"
    VERB = "Verb"
    ADJECTIVE = "Adjective"
    PREPOSITION = "Preposition"
    NUMBER = "Number"
    STOPWORD = "Stopword"
    OTHER = "Other"


class Strategy(str, enum.Enum):
    RAW = "raw"
    NOUN_PHRASE = "np"
    KEYWORD = "kw"
    GESERA_POS = "gesera"


class TagError(ValueError):
    pass


# Penn Treebank and Universal Dependencies labels -> coarse classes.
TAG_MAP: dict[str, Tag] = {
    **{t: Tag.NOUN for t in ("NN", "NNS", "NNP", "NNPS", "NOUN", "PROPN")},
    **{t: Tag.VERB for t in ("VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "VERB")},
    **{t: Tag.ADJECTIVE for t in ("JJ", "JJR", "JJS", "ADJ")},
    **{t: Tag.PREPOSITION for t in ("IN", "TO", "ADP")},
    **{t: Tag.NUMBER for t in ("CD", "NUM")},
    **{t: Tag.STOPWORD for t in (
        "DT", "PDT", "PRP", "PRP$", "WDT", "WP", "WP$", "CC", "MD", "EX",
        "DET", "PRON", "CCONJ", "SCONJ", "CONJ", "AUX",
    )},
    **{t: Tag.OTHER for t in (
        "RB", "RBR", "RBS", "WRB", "RP", "UH", "FW", "LS", "SYM", "POS",
        ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "#", "$", "(", ")",
        "ADV", "PART", "INTJ", "PUNCT", "X",
    )},
    **{t.value: t for t in Tag},
}

# Fig.-1 style reporting classes; everything else folds into Others.
REPORT_CLASSES = ("Noun", "Verb", "Adjective", "Preposition", "Others")

_TOKEN_RE = re.compile(r"[^\W_]+(?:['\-][^\W_]+)*")
_NUMBER_RE = re.compile(r"\d+(?:[.,:/'\-]\d+)*")
_HAS_LETTER_RE = re.compile(r"[^\W\d_]")

# (suffix, tag), checked in order; applied only to words longer than suffix + 2
SUFFIX_RULES: tuple[tuple[str, Tag], ...] = (
    ("ly", Tag.OTHER),
    ("ing", Tag.VERB),
    ("ed", Tag.VERB),
    ("ous", Tag.ADJECTIVE),
    ("ful", Tag.ADJECTIVE),
    ("ive", Tag.ADJECTIVE),
    ("able", Tag.ADJECTIVE),
    ("ible", Tag.ADJECTIVE),
    ("less", Tag.ADJECTIVE),
)


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens; internal hyphens and apostrophes are kept.

    >>> tokenize("state-of-the-art, 2009!")
    ['state-of-the-art', '2009']
    """
    return _TOKEN_RE.findall(text.lower())


def is_number(token: str) -> bool:
    return _NUMBER_RE.fullmatch(token) is not None


def parse_tag(label: str) -> Tag:
    try:
        return TAG_MAP[label]
    except KeyError:
        raise TagError(f"unknown tag label {label!r}") from None


def read_stopwords(path=None) -> frozenset[str]:
    """Read a stopword file (one word per line, ``#`` comments)."""
    if path is None:
        text = resources.files("gesera.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return frozenset(words)


def read_lexicon(path=None) -> dict[str, Tag]:
    """Read a ``word<TAB>TAG`` lexicon; TAG may be a coarse class or a treebank label."""
    if path is None:
        text = resources.files("gesera.data").joinpath("lexicon.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    lexicon = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            word, label = line.split("\t")
        except ValueError:
            raise TagError(f"lexicon line {lineno}: expected word<TAB>TAG") from None
        lexicon[word.strip().lower()] = parse_tag(label.strip())
    return lexicon


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    tag: Tag

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")


class HeuristicTagger:
    """Deterministic lexicon + suffix tagger.

    Precedence: number pattern, lexicon, stopword list, suffix rules,
    then Noun for anything containing a letter and Other for the rest.
    """

    def __init__(self, lexicon=None, stopwords=None):
        self.lexicon = read_lexicon() if lexicon is None else dict(lexicon)
        self.stopwords = read_stopwords() if stopwords is None else frozenset(stopwords)

    def tag_word(self, word: str) -> Tag:
        if is_number(word):
            return Tag.NUMBER
        tag = self.lexicon.get(word)
        if tag is not None:
            return tag
        if word in self.stopwords:
            return Tag.STOPWORD
        for suffix, tag in SUFFIX_RULES:
            if len(word) > len(suffix) + 2 and word.endswith(suffix):
                return tag
        return Tag.NOUN if _HAS_LETTER_RE.search(word) else Tag.OTHER

    def tag(self, tokens: Iterable[str]) -> list[TaggedToken]:
        return [TaggedToken(t, self.tag_word(t)) for t in tokens]

    def tag_text(self, text: str) -> list[TaggedToken]:
        return self.tag(tokenize(text))


class PretaggedTagger:
    """Passthrough for ``token/TAG`` input produced by an external tagger."""

    stopwords: frozenset[str]

    def __init__(self, stopwords=None):
        self.stopwords = read_stopwords() if stopwords is None else frozenset(stopwords)

    def tag(self, tokens: Iterable[str]) -> list[TaggedToken]:
        out = []
        for item in tokens:
            word, sep, label = item.rpartition("/")
            if not sep or not word:
                raise TagError(f"expected token/TAG, got {item!r}")
            tag = parse_tag(label)
            # the surface goes through the normal tokenizer so queries match the index
            out.extend(TaggedToken(w, tag) for w in tokenize(word))
        return out

    def tag_text(self, text: str) -> list[TaggedToken]:
        return self.tag(text.split())


_default_tagger: HeuristicTagger | None = None


def default_tagger() -> HeuristicTagger:
    global _default_tagger
    if _default_tagger is None:
        _default_tagger = HeuristicTagger()
    return _default_tagger


def pos_tag(tokens: Sequence[str], tagger=None) -> list[TaggedToken]:
    """Tag tokens with the built-in heuristic tagger (or ``tagger`` if given)."""
    return (tagger or default_tagger()).tag(tokens)


@dataclass(frozen=True)
class Query:
    terms: tuple[str, ...]
    strategy: Strategy

    def __post_init__(self):
        if any(not t.strip() for t in self.terms):
            raise ValueError("query terms must be non-empty")

    def words(self) -> list[str]:
        """Unique constituent words in first-occurrence order."""
        return list(dict.fromkeys(w for term in self.terms for w in term.split()))

    def __bool__(self):
        return bool(self.terms)


def _is_content(tok: TaggedToken, stopwords) -> bool:
    if tok.tag in (Tag.STOPWORD, Tag.NUMBER):
        return False
    return stopwords is None or tok.surface not in stopwords


def reformulate_raw(tokens: Sequence[TaggedToken], stopwords=None) -> Query:
    """Drop stopwords and numbers, keep everything else in order.

    A token counts as a stopword when it is tagged Stopword or, if
    ``stopwords`` is given, when its surface is in that list.
    """
    return Query(tuple(t.surface for t in tokens if _is_content(t, stopwords)), Strategy.RAW)


def reformulate_np(tokens: Sequence[TaggedToken]) -> Query:
    """Keep maximal ``(Adjective|Noun)* Noun`` chunks, one phrase term per chunk."""
    terms = []
    run: list[TaggedToken] = []
    for tok in list(tokens) + [None]:
        if tok is not None and tok.tag in (Tag.ADJECTIVE, Tag.NOUN):
            run.append(tok)
            continue
        # a run of Adj/Noun yields one chunk: everything up to its last noun
        last_noun = max((i for i, t in enumerate(run) if t.tag is Tag.NOUN), default=-1)
        if last_noun >= 0:
            terms.append(" ".join(t.surface for t in run[: last_noun + 1]))
        run = []
    return Query(tuple(terms), Strategy.NOUN_PHRASE)


def reformulate_kw(tokens: Sequence[TaggedToken], stopwords=None) -> Query:
    """Unigrams, bigrams and trigrams of content words.

    N-grams never span a removed token. Duplicates are dropped, keeping the
    first occurrence when ordered by n, then by position.
    """
    segments: list[list[str]] = [[]]
    for tok in tokens:
        if _is_content(tok, stopwords):
            segments[-1].append(tok.surface)
        elif segments[-1]:
            segments.append([])
    terms: dict[str, None] = {}
    for n in (1, 2, 3):
        for seg in segments:
            for i in range(len(seg) - n + 1):
                terms.setdefault(" ".join(seg[i : i + n]))
    return Query(tuple(terms), Strategy.KEYWORD)


_GESERA_TAGS = (Tag.NOUN, Tag.VERB, Tag.ADJECTIVE)


def reformulate_gesera(tokens: Sequence[TaggedToken]) -> Query:
    """Keep nouns, verbs and adjectives in order."""
    return Query(tuple(t.surface for t in tokens if t.tag in _GESERA_TAGS), Strategy.GESERA_POS)


def reformulate(tokens: Sequence[TaggedToken], strategy, stopwords=None) -> Query:
    strategy = Strategy(strategy)
    if strategy is Strategy.RAW:
        return reformulate_raw(tokens, stopwords)
    if strategy is Strategy.NOUN_PHRASE:
        return reformulate_np(tokens)
    if strategy is Strategy.KEYWORD:
        return reformulate_kw(tokens, stopwords)
    return reformulate_gesera(tokens)


@dataclass(frozen=True)
class PosDistribution:
    percentages: dict[str, float]
    total_tokens: int

    def __getitem__(self, cls):
        return self.percentages[cls]


def report_class(tag: Tag) -> str:
    return tag.value if tag.value in REPORT_CLASSES else "Others"


def count_report_classes(tagged: Iterable[TaggedToken]) -> Counter:
    return Counter(report_class(t.tag) for t in tagged)


def pos_distribution(collection, tagger=None) -> PosDistribution:
    """Percentage of body tokens in each reporting class over a collection."""
    if len(collection) == 0:
        raise ValueError("cannot compute a POS distribution over an empty collection")
    tagger = tagger or default_tagger()
    counts: Counter = Counter()
    for doc in collection:
        counts.update(count_report_classes(tagger.tag_text(doc.body)))
    total = sum(counts.values())
    if total == 0:
        raise ValueError("collection contains no tokens")
    pct = {c: 100.0 * counts[c] / total for c in REPORT_CLASSES}
    return PosDistribution(pct, total)
