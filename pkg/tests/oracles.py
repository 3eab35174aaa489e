"""Independent brute-force reference implementations used as test oracles.

These deliberately avoid the library's vectorized code paths: metrics are
computed by explicit pair counting and list re-ranking, neighbor lookups by
filtering every event. Slow but obviously correct.
"""

from __future__ import annotations

import numpy as np


def auc_pairwise(scores, labels) -> float:
    """Mann-Whitney AUC by counting all positive/negative pairs."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    wins = (pos[:, None] > neg[None, :]).sum()
    ties = (pos[:, None] == neg[None, :]).sum()
    return float((wins + 0.5 * ties) / (len(pos) * len(neg)))


def _ranked_indices(scores) -> list[int]:
    # descending score, ties by original index
    return sorted(range(len(scores)), key=lambda i: (-scores[i], i))


def average_precision_rerank(scores, labels) -> float:
    """AP by walking the explicit ranking and averaging precision at hits."""
    order = _ranked_indices(scores)
    labels = np.asarray(labels)
    hits = 0
    precisions = []
    for rank, idx in enumerate(order, start=1):
        if labels[idx] == 1:
            hits += 1
            precisions.append(hits / rank)
    return float(sum(precisions) / len(precisions))


def recall_topk_rerank(scores, labels, k) -> float:
    order = _ranked_indices(scores)
    labels = np.asarray(labels)
    total = int((labels == 1).sum())
    top_hits = sum(1 for idx in order[:k] if labels[idx] == 1)
    return float(top_hits / total)


def neighbors_brute(log, node, t) -> list[tuple[int, float, int]]:
    """All (neighbor, timestamp, event_index) of node strictly before t,
    by filtering every event of the log."""
    out = []
    for i in range(len(log)):
        u = int(log.sources[i])
        v = int(log.destinations[i])
        ts = float(log.timestamps[i])
        if ts >= t:
            continue
        if u == node:
            out.append((v, ts, i))
        elif v == node:
            out.append((u, ts, i))
    return out
