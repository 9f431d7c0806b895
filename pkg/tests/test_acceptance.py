"""Acceptance suite: one recorded pass/fail line per criterion.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary lists each
criterion with PASS or FAIL and a short measurement.
"""

import csv
import math
import time

import numpy as np
import pytest

from gesera.cli import main
from gesera.corpus import Document, DocumentCollection, write_corpus
from gesera.correlation import (
    SystemScoreVector,
    aggregate_to_system,
    correlate,
    kendall_tau_b,
    pearson,
    spearman,
)
from gesera.experiments import ExperimentConfig, run_annotator_study
from gesera.index import IndexParams, RankedList, build_index, retrieve
from gesera.scoring import EvalConfig, Evaluator, evaluate_dataset, sera, sera_dis
from gesera.synthetic import make_benchmark
from gesera.text import (
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
)
from datasets import write_benchmark
from oracles import (
    exhaustive_bm25f,
    fractional_ranks,
    kendall_pairs,
    ngrams_brute,
    np_chunks_regex,
    pearson_exact,
    random_corpus,
    sera_brute,
    sera_dis_brute,
    top_k,
)
from test_tac import write_tac_layout

pytestmark = pytest.mark.acceptance


def test_c1_tac_adapter(tmp_path, criterion):
    with criterion("C1 TAC adapter regenerates the metric-by-correlation table") as c:
        bm = make_benchmark(7, n_topics=6, n_systems=6, n_docs=300)
        peers, models, manual = write_tac_layout(tmp_path, bm)
        write_corpus(bm.collection, tmp_path / "corpus.jsonl")
        idx = tmp_path / "index.gz"
        assert main(["build-index", "--corpus", str(tmp_path / "corpus.jsonl"), "--out", str(idx)]) == 0
        out = tmp_path / "correlations.csv"
        assert main([
            "tac-table", "--index", str(idx), "--peers", str(peers), "--models", str(models),
            "--manual", f"pyramid={manual}:2", "--manual", f"responsiveness={manual}:4",
            "--out", str(out),
        ]) == 0
        rows = list(csv.DictReader(out.open()))
        metrics = [r["metric"] for r in rows]
        # 4 strategies x 2 variants x 2 cutoffs
        assert len(metrics) == len(set(metrics)) == 16
        for name in ("SERA-5", "SERA-NP-10", "SERA-KW-5", "SERA-DIS-10", "GeSERA-10", "GeSERA-DIS-5"):
            assert name in metrics
        assert len(rows[0]) == 1 + 2 * 3
        c.detail = f"{len(rows)} metric rows x {len(rows[0]) - 1} correlation columns"


def _random_list(rng, length, n_ids, cutoff):
    ids = [f"d{i}" for i in rng.choice(n_ids, size=length, replace=False)]
    return RankedList.from_ids(ids, cutoff)


def test_c2_scoring_oracles(criterion):
    with criterion("C2 sera / sera_dis match brute force (>=1000 instances, 1e-12, <10 s)") as c:
        start = time.perf_counter()
        rng = np.random.default_rng(2)
        n, worst = 2000, 0.0
        for _ in range(n):
            n_ids = int(rng.integers(1, 21))
            cutoff = int(rng.integers(1, 11))
            m = int(rng.integers(1, 5))
            cand = _random_list(rng, int(rng.integers(0, min(cutoff, n_ids) + 1)), n_ids, cutoff)
            refs = [_random_list(rng, int(rng.integers(0, min(cutoff, n_ids) + 1)), n_ids, cutoff)
                    for _ in range(m)]
            c_ids, r_ids = list(cand.ids), [list(r.ids) for r in refs]
            worst = max(worst, abs(sera(cand, refs) - sera_brute(c_ids, r_ids)))
            worst = max(worst, abs(sera_dis(cand, refs) - sera_dis_brute(c_ids, r_ids, cutoff)))
        assert worst <= 1e-12
        lst = RankedList.from_ids
        assert sera(lst(["d1", "d2", "d3"]), [lst(["d2", "d3", "d4"])]) == pytest.approx(2 / 3, abs=1e-12)
        assert sera_dis(lst(["a", "b"], 2), [lst(["b", "a"], 2)]) == pytest.approx(
            math.log(2) / math.log(3), abs=1e-12)
        assert abs(math.log(2) / math.log(3) - 0.63093) < 5e-6
        elapsed = time.perf_counter() - start
        assert elapsed < 10
        c.detail = f"{n} instances, max |diff| {worst:.1e}, {elapsed:.1f} s"


def test_c3_retrieval_oracle(criterion):
    with criterion("C3 retrieve(k) equals exhaustive BM25F (>=200 corpora, 1e-9, exact order, <60 s)") as c:
        start = time.perf_counter()
        rng = np.random.default_rng(3)
        n, worst, checked = 200, 0.0, 0
        for _ in range(n):
            n_docs = int(rng.integers(1, 201))
            vocab_size = int(rng.integers(5, 501))
            docs, vocab = random_corpus(rng, n_docs, vocab_size)
            params = IndexParams(
                k1=float(rng.uniform(0.1, 3)), b=float(rng.uniform(0, 1)),
                title_boost=float(rng.uniform(0, 4)), body_boost=float(rng.uniform(0.1, 3)),
            )
            idx = build_index(DocumentCollection(Document(i, body, title) for i, title, body in docs), params)
            for _ in range(3):
                words = [vocab[j] for j in rng.integers(vocab_size, size=int(rng.integers(1, 8)))]
                k = int(rng.integers(1, 21))
                got = retrieve(idx, Query(tuple(words), Strategy.RAW), k)
                scores = exhaustive_bm25f(docs, words, params.k1, params.b,
                                          params.title_boost, params.body_boost)
                want = top_k(scores, k)
                assert list(got.ids) == [d for d, _ in want]
                if want:
                    worst = max(worst, max(abs(a - s) for a, (_, s) in zip(got.scores, want)))
                checked += 1
        assert worst <= 1e-9
        elapsed = time.perf_counter() - start
        assert elapsed < 60
        c.detail = f"{n} corpora, {checked} queries, max |diff| {worst:.1e}, {elapsed:.1f} s"


def test_c4_sera_dis_bounds(criterion):
    with criterion("C4 sera_dis in [0,1], =1 on identical lists, base invariance (>=1e5 pairs)") as c:
        rng = np.random.default_rng(4)
        n, lo, hi, worst_base = 100_000, 1.0, 0.0, 0.0
        ids = np.array([f"d{i}" for i in range(30)])
        for trial in range(n):
            cutoff = int(rng.integers(1, 11))
            a = RankedList.from_ids(ids[rng.choice(30, size=int(rng.integers(0, cutoff + 1)), replace=False)], cutoff)
            b = RankedList.from_ids(ids[rng.choice(30, size=int(rng.integers(0, cutoff + 1)), replace=False)], cutoff)
            s = sera_dis(a, [b])
            lo, hi = min(lo, s), max(hi, s)
            full = RankedList.from_ids(ids[rng.choice(30, size=cutoff, replace=False)], cutoff)
            assert sera_dis(full, [full]) == pytest.approx(1.0, abs=1e-12)
            if trial % 10 == 0:
                e = sera_dis(a, [b, full])
                for base in (2, 10):
                    worst_base = max(worst_base, abs(sera_dis(a, [b, full], log_base=base) - e))
        assert 0.0 <= lo and hi <= 1.0
        assert worst_base <= 1e-12
        c.detail = f"{n} pairs, range [{lo:.3f}, {hi:.3f}], base diff {worst_base:.1e}"


def _tied_vector(rng, n):
    kind = rng.integers(3)
    if kind == 0:
        return rng.integers(0, max(2, n // 3), size=n).astype(float)
    if kind == 1:
        return np.round(rng.normal(size=n), 1)
    return rng.normal(size=n)


def test_c5_correlation_oracles(criterion):
    with criterion("C5 correlations match oracles (>=1000 vectors, ties, 1e-12), monotone, transforms") as c:
        rng = np.random.default_rng(5)
        n_vec, worst, done = 1200, 0.0, 0
        while done < n_vec:
            n = int(rng.integers(2, 51))
            x, y = _tied_vector(rng, n), _tied_vector(rng, n)
            if len(set(x)) < 2 or len(set(y)) < 2:
                continue
            worst = max(
                worst,
                abs(pearson(x, y) - pearson_exact(x, y)),
                abs(spearman(x, y) - pearson_exact(fractional_ranks(list(x)), fractional_ranks(list(y)))),
                abs(kendall_tau_b(x, y) - kendall_pairs(x.tolist(), y.tolist())),
            )
            # strictly increasing transforms leave rank statistics unchanged
            fx = np.exp(x / 4) + x ** 3
            assert abs(spearman(fx, y) - spearman(x, y)) <= 1e-12
            assert abs(kendall_tau_b(fx, y) - kendall_tau_b(x, y)) <= 1e-12
            # monotone relations give exactly +/-1
            u = rng.permutation(n).astype(float)
            for func in (spearman, kendall_tau_b):
                assert func(u, u ** 3 + 2) == 1.0
                assert func(u, -np.exp(u / 7)) == -1.0
            assert abs(pearson(u, 3 * u - 1) - 1.0) <= 1e-12
            done += 1
        assert worst <= 1e-12
        c.detail = f"{n_vec} vector pairs, max |diff| {worst:.1e}"


def test_c6_synthetic_end_to_end(tmp_path, criterion):
    with criterion("C6 synthetic benchmark: Pearson >= 0.9 every variant; noise-annotator direction; <5 min") as c:
        start = time.perf_counter()
        bm = make_benchmark(0, n_topics=30, n_systems=10, n_docs=2000)
        evaluator = Evaluator(build_index(bm.collection))
        configs = [EvalConfig(s, v, k) for s in Strategy for v in ("sera", "sera-dis") for k in (5, 10)]
        table = evaluate_dataset(bm.candidates, bm.references, configs, evaluator=evaluator, threads=4)
        truth = SystemScoreVector(bm.quality)
        pearsons = {m: correlate(aggregate_to_system(table, m), truth).pearson for m in table.metrics}
        weakest = min(pearsons, key=pearsons.get)
        assert len(pearsons) == 16
        assert pearsons[weakest] >= 0.9, f"{weakest}: {pearsons[weakest]:.3f}"

        gains = {}
        for seed in range(20):
            seed_dir = tmp_path / f"s{seed}"
            seed_dir.mkdir()
            _, cfg = write_benchmark(
                seed_dir, seed=seed, noise_annotators=("A3",),
                extra_config="sizes = 2000\nstrategies = gesera\nannotators = A1,A2,A3,A4; A1,A2,A4\nthreads = 4\n",
            )
            result = run_annotator_study(ExperimentConfig.from_file(cfg), write=False)
            by = {(r.metric, r.annotators): r for r in result.rows}
            assert not any(r.error for r in result.rows)
            for metric in {r.metric for r in result.rows}:
                full, dropped = by[metric, "A1+A2+A3+A4"], by[metric, "A1+A2+A4"]
                for coef in ("pearson", "spearman", "kendall"):
                    gains.setdefault((metric, coef), []).append(getattr(dropped, coef) - getattr(full, coef))
        mean_gain = {key: float(np.mean(v)) for key, v in gains.items()}
        worst_key = min(mean_gain, key=mean_gain.get)
        elapsed = time.perf_counter() - start
        c.detail = (
            f"min Pearson {pearsons[weakest]:.3f} ({weakest}); leave-A3-out mean gain over 20 seeds "
            f"min {mean_gain[worst_key]:+.1e} ({worst_key[0]} {worst_key[1]}), "
            f"overall {np.mean(list(mean_gain.values())):+.1e}; {elapsed:.0f} s"
        )
        assert elapsed < 300
        assert mean_gain[worst_key] >= 0, c.detail


def test_c7_determinism_across_threads(tmp_path, criterion):
    with criterion("C7 sweep CSVs byte-identical across runs and --threads") as c:
        _, cfg = write_benchmark(
            tmp_path, seed=9, n_topics=8, n_systems=6, n_docs=400,
            extra_config="sizes = 100, 250, 400\nseed = 17\n",
        )
        outputs = []
        for run, threads in enumerate(("1", "8", "1")):
            out = tmp_path / f"run{run}"
            assert main(["sweep", "--config", str(cfg), "--threads", threads, "--out", str(out)]) == 0
            outputs.append({p.name: p.read_bytes() for p in sorted(out.glob("*.csv"))})
        assert {"sweep.csv", "sweep_long.csv", "scores_100.csv"} <= set(outputs[0])
        assert outputs[0] == outputs[1] == outputs[2]
        c.detail = f"{len(outputs[0])} CSV files identical over 3 runs (threads 1, 8, 1)"


_WORDS = ["dog", "cat", "big", "red", "ran", "the", "of", "in", "7", "quickly", "green", "ideas", "and"]


def _sub_multiset(terms, tokens):
    pool = [t.surface for t in tokens]
    for w in (w for term in terms for w in term.split()):
        if w not in pool:
            return False
        pool.remove(w)
    return True


def test_c8_reformulation_contracts(criterion):
    with criterion("C8 reformulation contracts on >=1000 random token sequences") as c:
        rng = np.random.default_rng(8)
        tags = list(Tag)
        n = 1500
        for _ in range(n):
            length = int(rng.integers(0, 30))
            tokens = [TaggedToken(_WORDS[rng.integers(len(_WORDS))], tags[rng.integers(len(tags))])
                      for _ in range(length)]
            raw, nps = reformulate_raw(tokens), reformulate_np(tokens)
            kw, ges = reformulate_kw(tokens), reformulate_gesera(tokens)
            for q in (raw, nps, ges):
                assert _sub_multiset(q.terms, tokens)
            # keyword n-grams overlap, so only the word set is bounded
            assert {w for term in kw.terms for w in term.split()} <= {t.surface for t in tokens}
            assert list(raw.terms) == [t.surface for t in tokens if t.tag not in (Tag.STOPWORD, Tag.NUMBER)]
            assert list(ges.terms) == [t.surface for t in tokens if t.tag in (Tag.NOUN, Tag.VERB, Tag.ADJECTIVE)]
            assert list(nps.terms) == np_chunks_regex(tokens)
            segments, seg = [], []
            for t in tokens:
                if t.tag in (Tag.STOPWORD, Tag.NUMBER):
                    segments.append(seg)
                    seg = []
                else:
                    seg.append(t.surface)
            segments.append(seg)
            assert set(kw.terms) == ngrams_brute(segments)
            assert len(kw.terms) == len(set(kw.terms))
            assert len(pos_tag([t.surface for t in tokens])) == len(tokens)
        bodies = [" ".join(_WORDS[j] for j in rng.integers(len(_WORDS), size=int(rng.integers(1, 20))))
                  for _ in range(n)]
        docs = DocumentCollection(Document(f"d{i}", b) for i, b in enumerate(bodies))
        dist = pos_distribution(docs)
        assert all(v >= 0 for v in dist.percentages.values())
        assert abs(sum(dist.percentages.values()) - 100) <= 1e-9
        for i in range(0, n, 15):
            one = pos_distribution(DocumentCollection([docs[i]]))
            assert abs(sum(one.percentages.values()) - 100) <= 1e-9
        c.detail = f"{n} token sequences, {len(range(0, n, 15)) + 1} POS distributions"
