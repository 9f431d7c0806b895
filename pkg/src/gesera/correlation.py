"""System-level aggregation and Pearson / Spearman / Kendall tau-b."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np


class CorrelationError(ValueError):
    pass


@dataclass(frozen=True)
class SystemScoreVector:
    entries: dict[str, float]
    metric_name: str = ""

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, system_id):
        return self.entries[system_id]

    @property
    def systems(self) -> list[str]:
        return sorted(self.entries)


@dataclass(frozen=True)
class CorrelationResult:
    pearson: float
    spearman: float
    kendall_tau_b: float
    n_systems: int

    def as_tuple(self):
        return (self.pearson, self.spearman, self.kendall_tau_b)


def aggregate_to_system(table, metric: str) -> SystemScoreVector:
    """Average each system's topic scores for ``metric``.

    Warns when systems were not scored on the same topics.
    """
    rows = [r for r in table if r.metric == metric]
    if not rows:
        raise CorrelationError(f"metric {metric!r} not present in score table")
    per_system: dict[str, dict[str, float]] = {}
    for r in rows:
        per_system.setdefault(r.system_id, {})[r.topic_id] = r.score
    topics = set().union(*(s.keys() for s in per_system.values()))
    missing = sorted(
        (t, s) for s, scores in per_system.items() for t in topics - scores.keys()
    )
    if missing:
        listing = ", ".join(f"({t}, {s})" for t, s in missing[:20])
        more = "" if len(missing) <= 20 else f" and {len(missing) - 20} more"
        warnings.warn(f"{metric}: missing (topic, system) pairs: {listing}{more}", stacklevel=2)
    means = {s: math.fsum(v.values()) / len(v) for s, v in sorted(per_system.items())}
    return SystemScoreVector(means, metric)


def load_manual_scores(path, name: str = "") -> SystemScoreVector:
    """Read a ``system_id,score`` CSV of manual evaluation scores."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or not {"system_id", "score"} <= set(reader.fieldnames):
            raise CorrelationError(f"{path}: expected header system_id,score")
        entries = {}
        for lineno, row in enumerate(reader, start=2):
            try:
                entries[row["system_id"]] = float(row["score"])
            except (TypeError, ValueError):
                raise CorrelationError(f"{path} line {lineno}: bad score {row['score']!r}") from None
    return SystemScoreVector(entries, name or str(path))


def write_manual_scores(vector: SystemScoreVector, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("system_id", "score"))
        for s in vector.systems:
            writer.writerow((s, repr(vector.entries[s])))


def _pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise CorrelationError("inputs must be 1-d vectors of equal length")
    if len(x) < 2:
        raise CorrelationError("need at least two observations")
    return x, y


def pearson(x, y) -> float:
    x, y = _pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise CorrelationError("zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def rankdata(x) -> np.ndarray:
    """1-based ranks; tied values share the mean of their positions."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x))
    sx = x[order]
    i = 0
    n = len(x)
    while i < n:
        j = i
        while j + 1 < n and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Pearson correlation of fractional ranks."""
    x, y = _pair(x, y)
    return pearson(rankdata(x), rankdata(y))


def kendall_tau_b(x, y) -> float:
    """Tau-b by pair enumeration: ``(C - D) / sqrt((n0 - n1)(n0 - n2))``."""
    x, y = _pair(x, y)
    n = len(x)
    concordant = discordant = ties_x = ties_y = 0
    # one row of the pair matrix at a time keeps memory linear
    for i in range(n - 1):
        sx = np.sign(x[i + 1 :] - x[i])
        sy = np.sign(y[i + 1 :] - y[i])
        prod = sx * sy
        concordant += int((prod > 0).sum())
        discordant += int((prod < 0).sum())
        ties_x += int((sx == 0).sum())
        ties_y += int((sy == 0).sum())
    n0 = n * (n - 1) // 2
    if ties_x == n0 or ties_y == n0:
        raise CorrelationError("all pairs tied")
    tau = (concordant - discordant) / math.sqrt((n0 - ties_x) * (n0 - ties_y))
    return min(1.0, max(-1.0, tau))


def correlate(auto: SystemScoreVector, manual: SystemScoreVector) -> CorrelationResult:
    """Correlate two system vectors over their shared system ids."""
    shared = sorted(auto.entries.keys() & manual.entries.keys())
    if len(shared) < 2:
        raise CorrelationError(
            f"need >= 2 shared systems; automatic has {sorted(auto.entries)}, "
            f"manual has {sorted(manual.entries)}"
        )
    x = [auto.entries[s] for s in shared]
    y = [manual.entries[s] for s in shared]
    return CorrelationResult(pearson(x, y), spearman(x, y), kendall_tau_b(x, y), len(shared))
