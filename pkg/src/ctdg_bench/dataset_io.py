"""Bit-exact CSV interchange for event logs and score files.

Dataset files carry the header ``src,dst,ts,label,f0,...,f{D-1}`` with one
row per event, sorted by timestamp. Floats are serialized with Python's
shortest round-trip representation, so write -> read reproduces the arrays
bit for bit and identical inputs yield byte-identical files.
"""

from __future__ import annotations

import warnings
from typing import Optional

import numpy as np

from .events import AnomalyType, EventLog
from .metrics import ScoredSet

__all__ = ["write_csv", "read_csv", "write_scores_csv", "read_scores_csv"]

_BASE_COLUMNS = ("src", "dst", "ts", "label")
_LABEL_CODES = frozenset(int(t) for t in AnomalyType)


def _header(message_dim: int) -> str:
    return ",".join(list(_BASE_COLUMNS) + [f"f{i}" for i in range(message_dim)])


def write_csv(log: EventLog, path) -> None:
    """Write a log in the dataset interchange format."""
    dim = log.message_dim
    with open(path, "w", newline="") as handle:
        handle.write(_header(dim) + "\n")
        for i in range(len(log)):
            fields = [
                str(int(log.sources[i])),
                str(int(log.destinations[i])),
                repr(float(log.timestamps[i])),
                str(int(log.labels[i])),
            ]
            if dim:
                row = log.messages[i]
                fields.extend(repr(float(row[j])) for j in range(dim))
            handle.write(",".join(fields) + "\n")


def _parse_header(line: str, path) -> int:
    columns = line.rstrip("\n").split(",")
    if tuple(columns[:4]) != _BASE_COLUMNS:
        raise ValueError(
            f"{path}: header must start with {','.join(_BASE_COLUMNS)}, got {line.rstrip()!r}"
        )
    features = columns[4:]
    for i, name in enumerate(features):
        if name != f"f{i}":
            raise ValueError(f"{path}: feature columns must be f0..f{{D-1}}, got {name!r}")
    return len(features)


def read_csv(path, node_count: Optional[int] = None) -> EventLog:
    """Parse a dataset file into a validated, chronologically sorted log.

    The format carries no node count; by default it is inferred as
    ``max id + 1`` (pass ``node_count`` to keep trailing isolated nodes).
    Unsorted rows are accepted with a warning and sorted stably; malformed
    rows raise with their line number.
    """
    sources: list[int] = []
    destinations: list[int] = []
    timestamps: list[float] = []
    labels: list[int] = []
    messages: list[list[float]] = []
    with open(path, "r", newline="") as handle:
        header = handle.readline()
        if not header:
            raise ValueError(f"{path}: empty file, expected a header row")
        dim = _parse_header(header, path)
        width = 4 + dim
        for lineno, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != width:
                raise ValueError(
                    f"{path}: line {lineno}: expected {width} columns, got {len(parts)}"
                )
            try:
                src = int(parts[0])
                dst = int(parts[1])
                ts = float(parts[2])
                label = int(parts[3])
                message = [float(x) for x in parts[4:]]
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            if src < 0 or dst < 0:
                raise ValueError(f"{path}: line {lineno}: negative node id")
            if ts < 0:
                raise ValueError(f"{path}: line {lineno}: negative timestamp")
            if label not in _LABEL_CODES:
                raise ValueError(
                    f"{path}: line {lineno}: label {label} outside 0..5"
                )
            sources.append(src)
            destinations.append(dst)
            timestamps.append(ts)
            labels.append(label)
            messages.append(message)

    n = len(sources)
    src_arr = np.asarray(sources, dtype=np.int64)
    dst_arr = np.asarray(destinations, dtype=np.int64)
    ts_arr = np.asarray(timestamps, dtype=np.float64)
    label_arr = np.asarray(labels, dtype=np.int64)
    msg_arr = (
        np.asarray(messages, dtype=np.float64)
        if n and dim
        else np.empty((n, dim), dtype=np.float64)
    )
    if node_count is None:
        node_count = int(max(src_arr.max(), dst_arr.max())) + 1 if n else 0
    if n and np.any(np.diff(ts_arr) < 0):
        warnings.warn(f"{path}: rows not sorted by timestamp; sorting", stacklevel=2)
        order = np.argsort(ts_arr, kind="stable")
        src_arr, dst_arr, ts_arr = src_arr[order], dst_arr[order], ts_arr[order]
        label_arr, msg_arr = label_arr[order], msg_arr[order]
    return EventLog(src_arr, dst_arr, ts_arr, msg_arr, label_arr, node_count)


def write_scores_csv(scored: ScoredSet, path) -> None:
    """Write per-event detector output as ``score,label,type`` rows."""
    types = scored.types
    if types is None:
        raise ValueError("score files need anomaly types")
    with open(path, "w", newline="") as handle:
        handle.write("score,label,type\n")
        for i in range(len(scored)):
            handle.write(
                f"{float(scored.scores[i])!r},{int(scored.labels[i])},{int(types[i])}\n"
            )


def read_scores_csv(path) -> ScoredSet:
    scores: list[float] = []
    labels: list[int] = []
    types: list[int] = []
    with open(path, "r", newline="") as handle:
        header = handle.readline().rstrip("\n")
        if header != "score,label,type":
            raise ValueError(f"{path}: expected header 'score,label,type', got {header!r}")
        for lineno, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 3 columns")
            try:
                scores.append(float(parts[0]))
                labels.append(int(parts[1]))
                types.append(int(parts[2]))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            if types[-1] not in _LABEL_CODES:
                raise ValueError(f"{path}: line {lineno}: type {types[-1]} outside 0..5")
    return ScoredSet(
        np.asarray(scores, dtype=np.float64),
        np.asarray(labels, dtype=np.int64),
        np.asarray(types, dtype=np.int64),
    )
