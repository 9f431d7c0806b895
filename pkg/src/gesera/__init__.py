"""GeSERA: summary evaluation by overlap of retrieved documents."""

from .corpus import Document, DocumentCollection, SubsetSpec, load_corpus, sample_subset, write_corpus
from .correlation import (
    CorrelationResult,
    SystemScoreVector,
    aggregate_to_system,
    correlate,
    kendall_tau_b,
    pearson,
    spearman,
)
from .index import IndexParams, InvertedIndex, RankedList, bm25f_score, build_index, retrieve
from .scoring import (
    EvalConfig,
    Evaluator,
    ScoreTable,
    SummaryRecord,
    Variant,
    evaluate_dataset,
    evaluate_summary,
    sera,
    sera_dis,
)
from .text import (
    Query,
    Strategy,
    Tag,
    TaggedToken,
    pos_distribution,
    pos_tag,
    reformulate_gesera,
    reformulate_kw,
    reformulate_np,
    reformulate_raw,
    tokenize,
)

__version__ = "0.1.0"
