"""Ranking metrics with explicit tie handling, plus per-type reports.

Detectors with binary scores mass everything onto two values, so tie
behavior is load-bearing here: AUC gives half credit to tied pairs
(Mann-Whitney), while average precision and recall@k rank ties by original
index (stable descending sort), which makes both deterministic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .events import AnomalyType

__all__ = [
    "ScoredSet",
    "TypeReportRow",
    "auc",
    "average_precision",
    "recall_at_k",
    "per_type_report",
    "format_report",
    "write_report_csv",
]


@dataclass
class ScoredSet:
    """Parallel (score, anomalous-flag, anomaly-type) sequences."""

    scores: np.ndarray
    labels: np.ndarray
    types: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        self.scores = np.asarray(self.scores, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if len(self.scores) != len(self.labels):
            raise ValueError("scores and labels must have equal length")
        if not np.isin(self.labels, (0, 1)).all():
            raise ValueError("labels must be binary (0 benign, 1 anomalous)")
        if not np.isfinite(self.scores).all():
            raise ValueError("scores must be finite")
        if self.types is not None:
            self.types = np.asarray(self.types, dtype=np.int64)
            if len(self.types) != len(self.scores):
                raise ValueError("types must align with scores")

    def __len__(self) -> int:
        return len(self.scores)

    @classmethod
    def from_labels(cls, scores, type_codes) -> "ScoredSet":
        """Build from anomaly-type codes, deriving the binary flag."""
        type_codes = np.asarray(type_codes, dtype=np.int64)
        return cls(scores, (type_codes != int(AnomalyType.BENIGN)).astype(np.int64), type_codes)


def _descending_order(scores: np.ndarray) -> np.ndarray:
    # stable sort on negated scores: ties keep original index order
    return np.argsort(-scores, kind="stable")


def auc(scored: ScoredSet) -> float:
    """Probability a random anomaly outscores a random benign point, ties
    counted half (Mann-Whitney U / (P*N))."""
    scores, labels = scored.scores, scored.labels
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError(
            f"AUC needs both classes, got {n_pos} positives / {n_neg} negatives"
        )
    order = np.argsort(scores, kind="stable")
    sorted_scores = scores[order]
    new_group = np.empty(len(scores), dtype=bool)
    new_group[0] = True
    new_group[1:] = sorted_scores[1:] != sorted_scores[:-1]
    group_id = np.cumsum(new_group) - 1
    counts = np.bincount(group_id)
    ends = np.cumsum(counts)
    avg_rank_per_group = ends - (counts - 1) / 2.0  # mean of ranks 1..n in group
    ranks = np.empty(len(scores), dtype=np.float64)
    ranks[order] = avg_rank_per_group[group_id]
    rank_sum = float(ranks[labels == 1].sum())
    u_stat = rank_sum - n_pos * (n_pos + 1) / 2.0
    return u_stat / (n_pos * n_neg)


def average_precision(scored: ScoredSet) -> float:
    """Mean of precision@rank over the positives' ranks (stable ordering)."""
    n_pos = int(scored.labels.sum())
    if n_pos == 0:
        raise ValueError("average precision needs at least one positive")
    order = _descending_order(scored.scores)
    hits = scored.labels[order] == 1
    cum_hits = np.cumsum(hits)
    ranks = np.arange(1, len(hits) + 1)
    return float((cum_hits[hits] / ranks[hits]).mean())


def recall_at_k(scored: ScoredSet, k: Optional[int] = None) -> float:
    """Fraction of positives ranked in the top k; k defaults to the
    positive count."""
    n = len(scored)
    n_pos = int(scored.labels.sum())
    if n_pos == 0:
        raise ValueError("recall@k needs at least one positive")
    if k is None:
        k = n_pos
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    order = _descending_order(scored.scores)
    top = scored.labels[order[:k]]
    return float(top.sum() / n_pos)


@dataclass
class TypeReportRow:
    anomaly_type: AnomalyType
    auc_mean: float
    auc_std: float
    ap_mean: float
    ap_std: float
    recall_mean: float
    recall_std: float
    runs: int


def _mean_std(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    if len(arr) < 2:
        return float(arr.mean()), 0.0
    return float(arr.mean()), float(arr.std(ddof=1))


def per_type_report(
    runs: Union[ScoredSet, Sequence[ScoredSet]], k: Optional[int] = None
) -> list[TypeReportRow]:
    """Per-anomaly-type metrics, one-vs-benign, aggregated over runs.

    For each anomaly type present, metrics are computed over that type's
    points pooled with the benign points of the same run (other types are
    left out so one type cannot mask another). With several runs (e.g.
    repeated injection seeds) rows carry mean and sample std.
    """
    if isinstance(runs, ScoredSet):
        runs = [runs]
    runs = list(runs)
    if not runs:
        raise ValueError("need at least one scored set")
    for s in runs:
        if s.types is None:
            raise ValueError("per-type report needs typed scored sets")
    present: set[int] = set()
    for s in runs:
        present.update(np.unique(s.types[s.labels == 1]).tolist())
    rows: list[TypeReportRow] = []
    for code in sorted(present):
        anomaly_type = AnomalyType(code)
        aucs: list[float] = []
        aps: list[float] = []
        recalls: list[float] = []
        for s in runs:
            mask = (s.labels == 0) | ((s.labels == 1) & (s.types == code))
            subset = ScoredSet(s.scores[mask], s.labels[mask], s.types[mask])
            if not subset.labels.sum():
                warnings.warn(
                    f"run has no {anomaly_type.short_name} anomalies; skipped",
                    stacklevel=2,
                )
                continue
            aucs.append(auc(subset))
            aps.append(average_precision(subset))
            recalls.append(recall_at_k(subset, k))
        if not aucs:
            warnings.warn(
                f"no run contains {anomaly_type.short_name} anomalies; type skipped",
                stacklevel=2,
            )
            continue
        auc_m, auc_s = _mean_std(aucs)
        ap_m, ap_s = _mean_std(aps)
        rec_m, rec_s = _mean_std(recalls)
        rows.append(
            TypeReportRow(anomaly_type, auc_m, auc_s, ap_m, ap_s, rec_m, rec_s, len(aucs))
        )
    return rows


_REPORT_COLUMNS = (
    "type",
    "auc_mean",
    "auc_std",
    "ap_mean",
    "ap_std",
    "recall_mean",
    "recall_std",
)


def format_report(rows: Sequence[TypeReportRow]) -> str:
    """Fixed-width text table of a per-type report."""
    header = f"{'type':<6} {'auc':>15} {'ap':>15} {'recall@k':>15} {'runs':>5}"
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row.anomaly_type.short_name:<6} "
            f"{row.auc_mean:7.4f} ±{row.auc_std:6.4f} "
            f"{row.ap_mean:7.4f} ±{row.ap_std:6.4f} "
            f"{row.recall_mean:7.4f} ±{row.recall_std:6.4f} "
            f"{row.runs:>5d}"
        )
    return "\n".join(lines)


def write_report_csv(rows: Sequence[TypeReportRow], path) -> None:
    with open(path, "w", newline="") as handle:
        handle.write(",".join(_REPORT_COLUMNS) + "\n")
        for row in rows:
            handle.write(
                ",".join(
                    [
                        row.anomaly_type.short_name,
                        repr(row.auc_mean),
                        repr(row.auc_std),
                        repr(row.ap_mean),
                        repr(row.ap_std),
                        repr(row.recall_mean),
                        repr(row.recall_std),
                    ]
                )
                + "\n"
            )
