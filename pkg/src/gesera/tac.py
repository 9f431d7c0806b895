"""Adapters for TAC-style summarization data.

TAC distributes peer (system) and model (human) summaries as one file per
summary, named ``<topic>.M.100.<docset>.<id>`` such as ``D0801-A.M.100.A.1``
(peer 1) or ``D0801-A.M.100.A.C`` (annotator C). Manual scores come as
whitespace-separated tables whose first two fields are topic and peer id.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from .correlation import SystemScoreVector, aggregate_to_system, correlate
from .scoring import Kind, ScoreTable, SummaryRecord


def parse_summary_name(name: str) -> tuple[str, str]:
    """``D0801-A.M.100.A.1`` -> ``("D0801-A", "1")``."""
    parts = name.split(".")
    if len(parts) < 2:
        raise ValueError(f"unrecognized summary file name {name!r}")
    return parts[0], parts[-1]


def _read_dir(directory, kind: Kind) -> list[SummaryRecord]:
    records = []
    for path in sorted(Path(directory).iterdir()):
        if not path.is_file() or path.name.startswith("."):
            continue
        topic, system = parse_summary_name(path.name)
        text = path.read_text(encoding="utf-8", errors="replace")
        records.append(SummaryRecord(topic, system, kind, " ".join(text.split())))
    return records


def load_tac_summaries(peers_dir, models_dir) -> list[SummaryRecord]:
    """Peer summaries become candidates; model summaries become references
    whose ``system_id`` is the annotator letter."""
    return _read_dir(peers_dir, Kind.CANDIDATE) + _read_dir(models_dir, Kind.REFERENCE)


def load_tac_manual(path, column: int, name: str = "", skip_systems=()) -> SystemScoreVector:
    """Average one score column of a TAC manual score table per system.

    ``column`` is the zero-based field index in each whitespace-split line
    (fields 0 and 1 are topic and system id).
    """
    per_system: dict[str, list[float]] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        fields = line.split()
        if len(fields) <= column or line.lstrip().startswith("#"):
            continue
        try:
            value = float(fields[column])
        except ValueError:
            continue  # header lines
        system = fields[1]
        if system not in skip_systems:
            per_system.setdefault(system, []).append(value)
    means = {s: math.fsum(v) / len(v) for s, v in sorted(per_system.items())}
    return SystemScoreVector(means, name or f"{Path(path).name}[{column}]")


def correlation_table(table: ScoreTable, manual: dict[str, SystemScoreVector], metrics=None) -> str:
    """Metric-by-correlation CSV: one row per metric, Pearson/Spearman/Kendall per manual method."""
    metrics = metrics or table.metrics
    methods = list(manual)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric"] + [f"{m}_{c}" for m in methods for c in ("pearson", "spearman", "kendall")])
    for metric in metrics:
        auto = aggregate_to_system(table, metric)
        row = [metric]
        for m in methods:
            r = correlate(auto, manual[m])
            row += [f"{r.pearson:.3f}", f"{r.spearman:.3f}", f"{r.kendall_tau_b:.3f}"]
        w.writerow(row)
    return buf.getvalue()
