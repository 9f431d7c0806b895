"""
Correlation as a function of index size
=======================================

A sweep samples index subsets of several sizes, scores every system on
each one and writes one CSV row per (size, metric, manual method).
"""

import csv
import tempfile
from pathlib import Path

from gesera.corpus import write_corpus
from gesera.correlation import SystemScoreVector, write_manual_scores
from gesera.experiments import ExperimentConfig, run_sweep
from gesera.scoring import write_summaries
from gesera.synthetic import make_benchmark

work = Path(tempfile.mkdtemp())
bm = make_benchmark(seed=2, n_topics=8, n_systems=6, n_docs=800)
write_corpus(bm.collection, work / "corpus.jsonl")
write_summaries(bm.records, work / "queries.jsonl")
write_manual_scores(SystemScoreVector(bm.quality), work / "quality.csv")

(work / "run.cfg").write_text(
    "corpus = corpus.jsonl\n"
    "queries = queries.jsonl\n"
    "manual.quality = quality.csv\n"
    "sizes = 100, 400, 800\n"
    "strategies = raw, gesera\n"
    "cutoffs = 10\n"
    "seed = 5\n"
    "output = out\n"
)
result = run_sweep(ExperimentConfig.from_file(work / "run.cfg"))

for row in csv.DictReader((work / "out" / "sweep.csv").open()):
    print(row["index_size"], row["metric"], row["pearson"][:6])
