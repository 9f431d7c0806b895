"""
A synthetic benchmark with known system quality
===============================================

Systems are built by corrupting topical summaries at different rates, so
the right ranking of systems is known in advance.
"""

import numpy as np

from gesera import EvalConfig, Evaluator, SystemScoreVector, aggregate_to_system, build_index, correlate
from gesera import evaluate_dataset
from gesera.synthetic import make_benchmark

bm = make_benchmark(seed=1, n_topics=10, n_systems=6, n_docs=600)
print(len(bm.collection), "documents,", len(bm.candidates), "candidate summaries")
print("quality:", {s: round(q, 2) for s, q in bm.quality.items()})

evaluator = Evaluator(build_index(bm.collection))
configs = [EvalConfig("gesera", v, 10) for v in ("sera", "sera-dis")]
table = evaluate_dataset(bm.candidates, bm.references, configs, evaluator=evaluator)

truth = SystemScoreVector(bm.quality)
for metric in table.metrics:
    system_scores = aggregate_to_system(table, metric)
    result = correlate(system_scores, truth)
    print(metric, np.round(result.as_tuple(), 3))
