"""Independent brute-force reference implementations used by the tests.

Nothing here calls into the code paths it checks; only the tokenizer is
shared, since both sides must agree on what a word is.
"""

import math
import re
from fractions import Fraction

from gesera.text import tokenize


def exhaustive_bm25f(docs, words, k1, b, title_boost, body_boost):
    """Score every (id, title, body) doc by direct counting; return {id: score}."""
    fields = []
    for doc_id, title, body in docs:
        fields.append((doc_id, tokenize(title), tokenize(body)))
    n = len(fields)
    avg_t = sum(len(t) for _, t, _ in fields) / n
    avg_b = sum(len(bd) for _, _, bd in fields) / n
    unique = []
    for w in words:
        if w not in unique:
            unique.append(w)
    scores = {}
    for doc_id, t, bd in fields:
        total = 0.0
        for w in unique:
            df = sum(1 for _, tt, bb in fields if w in tt or w in bb)
            if df == 0:
                continue
            tf_t, tf_b = t.count(w), bd.count(w)
            if tf_t == 0 and tf_b == 0:
                continue
            norm_t = (1 - b + b * len(t) / avg_t) if avg_t > 0 else 1.0
            norm_b = (1 - b + b * len(bd) / avg_b) if avg_b > 0 else 1.0
            pseudo = title_boost * tf_t / norm_t + body_boost * tf_b / norm_b
            idf = max(0.0, math.log(1 + (n - df + 0.5) / (df + 0.5)))
            total += idf * pseudo / (k1 + pseudo)
        scores[doc_id] = total
    return scores


def top_k(scores, k):
    ranked = sorted(((s, d) for d, s in scores.items() if s > 0), key=lambda p: (-p[0], p[1]))
    return [(d, s) for s, d in ranked[:k]]


def sera_brute(cand, refs):
    if not cand:
        return 0.0
    total = 0.0
    for ref in refs:
        shared = 0
        for d in cand:
            if d in ref:
                shared += 1
        total += shared / len(cand)
    return total / len(refs)


def sera_dis_brute(cand, refs, cutoff, log=math.log):
    if not cand:
        return 0.0
    total = 0.0
    for ref in refs:
        for j in range(1, len(cand) + 1):
            for k in range(1, len(ref) + 1):
                if cand[j - 1] == ref[k - 1]:
                    total += 1 / log(abs(j - k) + 2)
    return total / (len(refs) * cutoff / log(2))


def ngrams_brute(segments):
    out = set()
    for seg in segments:
        for i in range(len(seg)):
            for j in range(i + 1, min(i + 3, len(seg)) + 1):
                out.add(" ".join(seg[i:j]))
    return out


def np_chunks_regex(tagged):
    """Chunks via a regex over one letter per token: A(dj), N(oun), x(other)."""
    code = "".join({"Adjective": "A", "Noun": "N"}.get(t.tag.value, "x") for t in tagged)
    return [" ".join(t.surface for t in tagged[m.start() : m.end()]) for m in re.finditer(r"[AN]*N", code)]


def pearson_exact(x, y):
    """Closed form with exact rational sums; only the final sqrt is floating."""
    fx = [Fraction(v) for v in x]
    fy = [Fraction(v) for v in y]
    n = len(fx)
    mx, my = sum(fx) / n, sum(fy) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(fx, fy))
    sxx = sum((a - mx) ** 2 for a in fx)
    syy = sum((b - my) ** 2 for b in fy)
    return float(sxy) / math.sqrt(float(sxx * syy))


def fractional_ranks(x):
    """rank_i = #(x_j < x_i) + (#(x_j == x_i) + 1) / 2, by counting."""
    return [
        sum(1 for b in x if b < a) + (sum(1 for b in x if b == a) + 1) / 2 for a in x
    ]


def kendall_pairs(x, y):
    n = len(x)
    c = d = tx = ty = 0
    for i in range(n):
        for j in range(i + 1, n):
            a = (x[i] > x[j]) - (x[i] < x[j])
            b = (y[i] > y[j]) - (y[i] < y[j])
            if a == 0:
                tx += 1
            if b == 0:
                ty += 1
            if a * b > 0:
                c += 1
            elif a * b < 0:
                d += 1
    n0 = n * (n - 1) // 2
    return (c - d) / math.sqrt((n0 - tx) * (n0 - ty))


def random_corpus(rng, n_docs, vocab_size, max_len=30):
    """Random (id, title, body) triples over words w0..w{vocab_size-1}.

    Word frequencies are Zipf-like so that document frequencies vary.
    """
    vocab = [f"w{i}" for i in range(vocab_size)]
    weights = [1 / (i + 1) for i in range(vocab_size)]
    total = sum(weights)
    probs = [w / total for w in weights]
    docs = []
    for i in range(n_docs):
        n_body = int(rng.integers(1, max_len + 1))
        n_title = int(rng.integers(0, 4))
        body = " ".join(vocab[j] for j in rng.choice(vocab_size, size=n_body, p=probs))
        title = " ".join(vocab[j] for j in rng.choice(vocab_size, size=n_title, p=probs))
        docs.append((f"doc{int(rng.integers(10**6)):06d}_{i}", title, body))
    return docs, vocab
