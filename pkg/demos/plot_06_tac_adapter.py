"""
Working with TAC-style data
===========================

TAC ships one file per summary (``D0801-A.M.100.A.1`` for peer 1,
``D0801-A.M.100.A.C`` for annotator C) and whitespace tables of manual
scores. With real data the same steps run through the CLI::

    gesera build-index --corpus aquaint2.jsonl --size 10000 --out aq.idx.gz
    gesera tac-table --index aq.idx.gz --peers peers/ --models models/ \\
        --manual pyramid=manual.peer:2 --manual responsiveness=manual.peer:4

Here a small synthetic set stands in for the licensed data.
"""

import tempfile
from pathlib import Path

from gesera import EvalConfig, Evaluator, build_index, evaluate_dataset
from gesera.scoring import Kind
from gesera.synthetic import make_benchmark
from gesera.tac import correlation_table, load_tac_manual, load_tac_summaries

root = Path(tempfile.mkdtemp())
bm = make_benchmark(seed=3, n_topics=5, n_systems=5, n_docs=400)
(root / "peers").mkdir()
(root / "models").mkdir()
peer_no = {s: str(i + 1) for i, s in enumerate(sorted(bm.quality))}
for c in bm.candidates:
    (root / "peers" / f"{c.topic_id}-A.M.100.A.{peer_no[c.system_id]}").write_text(c.text)
for r, letter in zip(bm.references, "ABCD" * len(bm.references)):
    (root / "models" / f"{r.topic_id}-A.M.100.A.{letter}").write_text(r.text)
(root / "manual.peer").write_text("".join(
    f"{c.topic_id}-A {peer_no[c.system_id]} {bm.quality[c.system_id]:.3f}\n" for c in bm.candidates
))

records = load_tac_summaries(root / "peers", root / "models")
cands = [r for r in records if r.kind is Kind.CANDIDATE]
refs = [r for r in records if r.kind is Kind.REFERENCE]
configs = [EvalConfig(s, "sera", 10) for s in ("raw", "np", "kw", "gesera")]
table = evaluate_dataset(cands, refs, configs, evaluator=Evaluator(build_index(bm.collection)))
print(correlation_table(table, {"pyramid": load_tac_manual(root / "manual.peer", 2)}))
