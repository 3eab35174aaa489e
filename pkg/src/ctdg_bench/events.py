"""Event-log data model for continuous-time dynamic graphs.

The central object is the :class:`EventLog`: a chronologically sorted
sequence of timestamped, attributed interactions, stored columnar as numpy
arrays and immutable after construction. Individual events are exposed as
:class:`LabeledEdge` records. The module also provides the per-node
chronological neighbor index and the two split strategies used by the
benchmark (fraction-based and label-driven).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "AnomalyType",
    "ANOMALOUS_TYPES",
    "TemporalEdge",
    "LabeledEdge",
    "EventLog",
    "NeighborIndex",
    "SplitSpec",
    "build_log",
    "chronological_split",
    "organic_split",
]


class AnomalyType(IntEnum):
    """Edge anomaly categories; ``BENIGN`` marks unperturbed events."""

    BENIGN = 0
    TEMPORAL = 1
    CONTEXTUAL = 2
    TEMPORAL_CONTEXTUAL = 3
    STRUCTURAL_CONTEXTUAL = 4
    TEMPORAL_STRUCTURAL_CONTEXTUAL = 5

    @property
    def short_name(self) -> str:
        return _SHORT_NAMES[self]

    @classmethod
    def from_short_name(cls, name: str) -> "AnomalyType":
        key = name.strip().lower()
        if key not in _FROM_SHORT:
            raise ValueError(
                f"unknown anomaly type {name!r}; expected one of {sorted(_FROM_SHORT)}"
            )
        return _FROM_SHORT[key]


_SHORT_NAMES = {
    AnomalyType.BENIGN: "benign",
    AnomalyType.TEMPORAL: "t",
    AnomalyType.CONTEXTUAL: "c",
    AnomalyType.TEMPORAL_CONTEXTUAL: "tc",
    AnomalyType.STRUCTURAL_CONTEXTUAL: "sc",
    AnomalyType.TEMPORAL_STRUCTURAL_CONTEXTUAL: "tsc",
}
_FROM_SHORT = {v: k for k, v in _SHORT_NAMES.items()}

ANOMALOUS_TYPES = tuple(t for t in AnomalyType if t is not AnomalyType.BENIGN)


@dataclass(eq=False)
class TemporalEdge:
    """A single interaction: (source, destination, timestamp, message)."""

    source: int
    destination: int
    timestamp: float
    message: np.ndarray

    def __post_init__(self) -> None:
        self.source = int(self.source)
        self.destination = int(self.destination)
        self.timestamp = float(self.timestamp)
        self.message = np.asarray(self.message, dtype=np.float64).reshape(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalEdge):
            return NotImplemented
        return (
            self.source == other.source
            and self.destination == other.destination
            and self.timestamp == other.timestamp
            and np.array_equal(self.message, other.message)
        )


@dataclass
class LabeledEdge:
    edge: TemporalEdge
    label: AnomalyType = AnomalyType.BENIGN


class EventLog:
    """Chronologically sorted, immutable log of labeled temporal edges.

    Events are stored columnar: ``sources``, ``destinations``, ``timestamps``,
    ``labels`` are 1-d arrays of equal length and ``messages`` is an
    ``(n, message_dim)`` array. Indexing with an integer yields a
    :class:`LabeledEdge`; slicing yields a new :class:`EventLog`.
    """

    __slots__ = ("sources", "destinations", "timestamps", "messages", "labels", "node_count")

    def __init__(
        self,
        sources: np.ndarray,
        destinations: np.ndarray,
        timestamps: np.ndarray,
        messages: np.ndarray,
        labels: np.ndarray,
        node_count: int,
    ) -> None:
        sources = np.ascontiguousarray(sources, dtype=np.int64)
        destinations = np.ascontiguousarray(destinations, dtype=np.int64)
        timestamps = np.ascontiguousarray(timestamps, dtype=np.float64)
        messages = np.ascontiguousarray(messages, dtype=np.float64)
        labels = np.ascontiguousarray(labels, dtype=np.int64)
        n = len(timestamps)
        if messages.ndim != 2:
            raise ValueError(f"messages must be 2-d, got shape {messages.shape}")
        if not (len(sources) == len(destinations) == len(labels) == len(messages) == n):
            raise ValueError("event columns have mismatched lengths")
        node_count = int(node_count)
        if node_count < 0:
            raise ValueError("node_count must be non-negative")
        if n:
            if np.any(np.diff(timestamps) < 0):
                idx = int(np.argmax(np.diff(timestamps) < 0)) + 1
                raise ValueError(f"timestamps not non-decreasing at event {idx}")
            _check_events(sources, destinations, timestamps, messages.shape[1], node_count)
            bad = ~np.isin(labels, [int(t) for t in AnomalyType])
            if bad.any():
                raise ValueError(f"invalid label code at event {int(np.argmax(bad))}")
        for arr in (sources, destinations, timestamps, messages, labels):
            arr.flags.writeable = False
        self.sources = sources
        self.destinations = destinations
        self.timestamps = timestamps
        self.messages = messages
        self.labels = labels
        self.node_count = node_count

    @property
    def message_dim(self) -> int:
        return self.messages.shape[1]

    def __len__(self) -> int:
        return len(self.timestamps)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return EventLog(
                self.sources[index],
                self.destinations[index],
                self.timestamps[index],
                self.messages[index],
                self.labels[index],
                self.node_count,
            )
        i = int(index)
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(f"event index {index} out of range")
        edge = TemporalEdge(
            int(self.sources[i]),
            int(self.destinations[i]),
            float(self.timestamps[i]),
            self.messages[i].copy(),
        )
        return LabeledEdge(edge, AnomalyType(int(self.labels[i])))

    def __iter__(self) -> Iterator[LabeledEdge]:
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventLog):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.message_dim == other.message_dim
            and np.array_equal(self.sources, other.sources)
            and np.array_equal(self.destinations, other.destinations)
            and np.array_equal(self.timestamps, other.timestamps)
            and np.array_equal(self.messages, other.messages)
            and np.array_equal(self.labels, other.labels)
        )

    def __repr__(self) -> str:
        return (
            f"EventLog(n_events={len(self)}, node_count={self.node_count}, "
            f"message_dim={self.message_dim}, n_anomalous={int(self.anomaly_mask().sum())})"
        )

    def anomaly_mask(self) -> np.ndarray:
        return self.labels != int(AnomalyType.BENIGN)

    def time_range(self) -> tuple[float, float]:
        if not len(self):
            raise ValueError("empty log has no time range")
        return float(self.timestamps[0]), float(self.timestamps[-1])

    @classmethod
    def empty(cls, node_count: int, message_dim: int) -> "EventLog":
        return cls(
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.float64),
            np.empty((0, message_dim), dtype=np.float64),
            np.empty(0, dtype=np.int64),
            node_count,
        )


def _check_events(sources, destinations, timestamps, message_dim, node_count):
    bad = timestamps < 0
    if bad.any():
        raise ValueError(f"negative timestamp at event {int(np.argmax(bad))}")
    bad = (sources < 0) | (sources >= node_count) | (destinations < 0) | (destinations >= node_count)
    if bad.any():
        raise ValueError(
            f"node id out of range [0, {node_count}) at event {int(np.argmax(bad))}"
        )


def build_log(
    events: Iterable[LabeledEdge],
    node_count: int,
    message_dim: int,
) -> EventLog:
    """Validate and chronologically sort events into an :class:`EventLog`.

    Ties at equal timestamps preserve input order (stable sort). Raises
    ``ValueError`` naming the offending input position for negative
    timestamps, out-of-range node ids, or message-dimension mismatches.
    """
    events = list(events)
    n = len(events)
    sources = np.empty(n, dtype=np.int64)
    destinations = np.empty(n, dtype=np.int64)
    timestamps = np.empty(n, dtype=np.float64)
    messages = np.empty((n, message_dim), dtype=np.float64)
    labels = np.empty(n, dtype=np.int64)
    for i, item in enumerate(events):
        edge = item.edge
        if edge.timestamp < 0:
            raise ValueError(f"event {i}: negative timestamp {edge.timestamp}")
        if not (0 <= edge.source < node_count and 0 <= edge.destination < node_count):
            raise ValueError(
                f"event {i}: node id out of range [0, {node_count}): "
                f"({edge.source}, {edge.destination})"
            )
        if edge.message.shape != (message_dim,):
            raise ValueError(
                f"event {i}: message dimension {edge.message.shape[0]} != {message_dim}"
            )
        sources[i] = edge.source
        destinations[i] = edge.destination
        timestamps[i] = edge.timestamp
        messages[i] = edge.message
        labels[i] = int(item.label)
    order = np.argsort(timestamps, kind="stable")
    return EventLog(
        sources[order], destinations[order], timestamps[order],
        messages[order], labels[order], node_count,
    )


class NeighborIndex:
    """Per-node chronological history of interaction partners.

    Both endpoints see each event: for (u, v, t) the index records v in u's
    history and u in v's. Entries carry the event's index into the source
    log so the message can be recovered.
    """

    def __init__(self, log: EventLog) -> None:
        by_node: dict[int, tuple[list, list, list]] = {}
        for i in range(len(log)):
            u = int(log.sources[i])
            v = int(log.destinations[i])
            t = float(log.timestamps[i])
            endpoints = ((u, v),) if u == v else ((u, v), (v, u))
            for node, nbr in endpoints:
                entry = by_node.get(node)
                if entry is None:
                    entry = ([], [], [])
                    by_node[node] = entry
                entry[0].append(t)
                entry[1].append(nbr)
                entry[2].append(i)
        # log is chronological, so per-node appends arrive already sorted
        self._by_node = {
            node: (
                np.asarray(ts, dtype=np.float64),
                np.asarray(nbrs, dtype=np.int64),
                np.asarray(idxs, dtype=np.int64),
            )
            for node, (ts, nbrs, idxs) in by_node.items()
        }

    def neighbors_before(self, node: int, t: float) -> list[tuple[int, float, int]]:
        """All (neighbor, timestamp, event_index) of ``node`` strictly before ``t``."""
        entry = self._by_node.get(int(node))
        if entry is None:
            return []
        ts, nbrs, idxs = entry
        k = int(np.searchsorted(ts, t, side="left"))
        return [(int(nbrs[i]), float(ts[i]), int(idxs[i])) for i in range(k)]


@dataclass
class SplitSpec:
    """Chronological split fractions; must be positive and sum to 1."""

    train_fraction: float = 0.70
    val_fraction: float = 0.15
    test_fraction: float = 0.15

    def __post_init__(self) -> None:
        fracs = (self.train_fraction, self.val_fraction, self.test_fraction)
        if any(f <= 0 for f in fracs):
            raise ValueError(f"split fractions must be positive, got {fracs}")
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise ValueError(f"split fractions must sum to 1, got {sum(fracs)}")


def chronological_split(
    log: EventLog, spec: SplitSpec | None = None
) -> tuple[EventLog, EventLog, EventLog]:
    """Contiguous prefix/middle/suffix partition by event index.

    Boundaries are floor(n * train_fraction) and
    floor(n * (train_fraction + val_fraction)); the pieces concatenate back
    to the input log.
    """
    spec = spec or SplitSpec()
    n = len(log)
    # tiny offset absorbs float representation noise in n * fraction
    i = math.floor(n * spec.train_fraction + 1e-9)
    j = math.floor(n * (spec.train_fraction + spec.val_fraction) + 1e-9)
    return log[:i], log[i:j], log[j:]


def organic_split(log: EventLog) -> tuple[EventLog, EventLog, EventLog]:
    """Label-driven split for logs with organic anomalies.

    Training takes every event strictly before the first anomalous event's
    timestamp. The remainder is cut so that validation receives the first
    ceil(A/2) anomalies and test the rest; the boundary sits immediately
    before the (ceil(A/2)+1)-th anomalous event.
    """
    anom_idx = np.flatnonzero(log.anomaly_mask())
    if len(anom_idx) < 2:
        raise ValueError(
            "organic split needs at least two anomalous events; "
            "use chronological_split for benign or single-anomaly logs"
        )
    first_t = float(log.timestamps[anom_idx[0]])
    train_end = int(np.searchsorted(log.timestamps, first_t, side="left"))
    rest_anoms = anom_idx[anom_idx >= train_end] - train_end
    val_quota = math.ceil(len(rest_anoms) / 2)
    boundary = train_end + int(rest_anoms[val_quota])
    return log[:train_end], log[train_end:boundary], log[boundary:]
