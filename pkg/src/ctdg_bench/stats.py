"""Dataset-consistency diagnostics.

All statistics describe the three consistency dimensions on a log's static
projection (distinct unordered node pairs): degree distribution and joint
degree matrix for structure, per-pair message spread for context, and
per-pair inter-event-time spread for time. Standard deviations are
population (ddof=0) so two-sample pairs are deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .events import EventLog

__all__ = [
    "StatsReport",
    "degree_distribution",
    "joint_degree_matrix",
    "message_std_per_edge",
    "inter_event_time_std",
    "compute_stats",
    "summarize",
    "write_stats_report",
]


def _pair_ids(log: EventLog) -> np.ndarray:
    u = np.minimum(log.sources, log.destinations)
    v = np.maximum(log.sources, log.destinations)
    return u * log.node_count + v


def _static_pairs(log: EventLog) -> np.ndarray:
    """Distinct unordered node pairs, shape (k, 2)."""
    ids = np.unique(_pair_ids(log))
    return np.column_stack([ids // log.node_count, ids % log.node_count])


def _degrees(log: EventLog) -> dict[int, int]:
    pairs = _static_pairs(log)
    nodes, counts = np.unique(pairs.ravel(), return_counts=True)
    return dict(zip(nodes.tolist(), counts.tolist()))


def degree_distribution(log: EventLog) -> dict[int, int]:
    """Histogram degree -> node count on the static projection.

    Nodes touching no edge do not appear.
    """
    degree_of = _degrees(log)
    hist: dict[int, int] = {}
    for d in degree_of.values():
        hist[d] = hist.get(d, 0) + 1
    return hist


def joint_degree_matrix(log: EventLog) -> np.ndarray:
    """Relative frequency of static edges between degree-i and degree-j nodes.

    Entry (i, j) is indexed by degree directly; off-diagonal mass is split
    evenly between (i, j) and (j, i) so the matrix is symmetric and sums
    to 1.
    """
    pairs = _static_pairs(log)
    if not len(pairs):
        raise ValueError("joint degree matrix needs at least one edge")
    degree_of = _degrees(log)
    deg_u = np.fromiter((degree_of[int(u)] for u in pairs[:, 0]), np.int64, len(pairs))
    deg_v = np.fromiter((degree_of[int(v)] for v in pairs[:, 1]), np.int64, len(pairs))
    size = int(max(deg_u.max(), deg_v.max())) + 1
    matrix = np.zeros((size, size), dtype=np.float64)
    share = 1.0 / len(pairs)
    for i, j in zip(deg_u, deg_v):
        if i == j:
            matrix[i, j] += share
        else:
            matrix[i, j] += share / 2.0
            matrix[j, i] += share / 2.0
    return matrix


def _pair_slices(log: EventLog):
    """Yield (pair_order_slice,) chronological event indices per pair."""
    ids = _pair_ids(log)
    order = np.argsort(ids, kind="stable")  # stable keeps per-pair chronology
    sorted_ids = ids[order]
    boundaries = np.flatnonzero(np.diff(sorted_ids)) + 1
    starts = np.concatenate([[0], boundaries])
    stops = np.concatenate([boundaries, [len(ids)]])
    for a, b in zip(starts, stops):
        yield order[a:b]


def message_std_per_edge(log: EventLog) -> np.ndarray:
    """Per-pair message spread: population std per dimension across the
    pair's occurrences, averaged over dimensions. Pairs with fewer than two
    occurrences are excluded."""
    if log.message_dim == 0:
        raise ValueError("message spread undefined for non-attributed graphs")
    out = []
    for idx in _pair_slices(log):
        if len(idx) < 2:
            continue
        out.append(float(log.messages[idx].std(axis=0).mean()))
    return np.asarray(out, dtype=np.float64)


def inter_event_time_std(log: EventLog) -> np.ndarray:
    """Per-pair population std of consecutive occurrence gaps; pairs with
    fewer than three occurrences (fewer than two gaps) are excluded."""
    out = []
    for idx in _pair_slices(log):
        if len(idx) < 3:
            continue
        gaps = np.diff(log.timestamps[idx])
        out.append(float(gaps.std()))
    return np.asarray(out, dtype=np.float64)


@dataclass
class StatsReport:
    degree_histogram: dict[int, int]
    joint_degree_matrix: np.ndarray
    message_std: np.ndarray
    inter_event_std: np.ndarray


def compute_stats(log: EventLog) -> StatsReport:
    """All diagnostics in one pass; message spread is empty for D=0 logs."""
    if log.message_dim > 0:
        msg_std = message_std_per_edge(log)
    else:
        msg_std = np.empty(0, dtype=np.float64)
    return StatsReport(
        degree_histogram=degree_distribution(log),
        joint_degree_matrix=joint_degree_matrix(log),
        message_std=msg_std,
        inter_event_std=inter_event_time_std(log),
    )


def _series_summary(values: np.ndarray) -> dict:
    if not len(values):
        return {"count": 0}
    qs = np.quantile(values, [0.25, 0.5, 0.75])
    return {
        "count": int(len(values)),
        "min": float(values.min()),
        "q25": float(qs[0]),
        "median": float(qs[1]),
        "q75": float(qs[2]),
        "max": float(values.max()),
        "mean": float(values.mean()),
    }


def summarize(report: StatsReport) -> dict:
    degrees = np.fromiter(
        (d for d, c in report.degree_histogram.items() for _ in range(c)),
        np.float64,
    )
    return {
        "degree": _series_summary(degrees),
        "message_std": _series_summary(report.message_std),
        "inter_event_std": _series_summary(report.inter_event_std),
        "joint_degree_matrix_size": int(report.joint_degree_matrix.shape[0]),
    }


def write_stats_report(report: StatsReport, out_dir) -> None:
    """One CSV per statistic plus a JSON summary, under ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "degree_histogram.csv", "w", newline="") as handle:
        handle.write("degree,count\n")
        for degree in sorted(report.degree_histogram):
            handle.write(f"{degree},{report.degree_histogram[degree]}\n")
    with open(out / "joint_degree_matrix.csv", "w", newline="") as handle:
        handle.write("degree_i,degree_j,frequency\n")
        matrix = report.joint_degree_matrix
        for i, j in zip(*np.nonzero(matrix)):
            handle.write(f"{i},{j},{matrix[i, j]!r}\n")
    with open(out / "message_std.csv", "w", newline="") as handle:
        handle.write("message_std\n")
        for value in report.message_std:
            handle.write(f"{value!r}\n")
    with open(out / "inter_event_std.csv", "w", newline="") as handle:
        handle.write("inter_event_std\n")
        for value in report.inter_event_std:
            handle.write(f"{value!r}\n")
    with open(out / "summary.json", "w", newline="") as handle:
        json.dump(summarize(report), handle, indent=2, sort_keys=True)
        handle.write("\n")
