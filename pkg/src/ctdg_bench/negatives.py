"""Training-time negative edge samplers.

Consumers pair each observed (positive) edge of a batch with one perturbed
(negative) edge. The plain sampler re-wires destinations only; the mixed
sampler draws uniformly among destination, timestamp, and message
perturbations so negatives cover all three abnormality dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .events import EventLog, TemporalEdge

__all__ = ["PerturbationKind", "Batch", "sample_negative_random", "sample_negative_mixed"]


class PerturbationKind(str, Enum):
    DESTINATION = "destination"
    TIMESTAMP = "timestamp"
    MESSAGE = "message"


@dataclass
class Batch:
    """An ordered block of positive edges plus sampling context.

    ``time_range`` is the training split's (t_lo, t_hi): timestamp negatives
    must stay plausible under training-time knowledge.
    """

    sources: np.ndarray
    destinations: np.ndarray
    timestamps: np.ndarray
    messages: np.ndarray
    node_count: int
    time_range: tuple[float, float]

    def __post_init__(self) -> None:
        self.sources = np.asarray(self.sources, dtype=np.int64)
        self.destinations = np.asarray(self.destinations, dtype=np.int64)
        self.timestamps = np.asarray(self.timestamps, dtype=np.float64)
        self.messages = np.asarray(self.messages, dtype=np.float64)
        if not len(self.sources):
            raise ValueError("batch must be non-empty")
        if self.node_count < 2:
            raise ValueError("need node_count >= 2 for negative sampling")

    @classmethod
    def from_log(cls, log: EventLog, time_range: Optional[tuple[float, float]] = None) -> "Batch":
        return cls(
            log.sources,
            log.destinations,
            log.timestamps,
            log.messages,
            log.node_count,
            time_range if time_range is not None else log.time_range(),
        )

    @property
    def message_dim(self) -> int:
        return self.messages.shape[1]

    def __len__(self) -> int:
        return len(self.sources)

    def edge(self, i: int) -> TemporalEdge:
        return TemporalEdge(
            int(self.sources[i]),
            int(self.destinations[i]),
            float(self.timestamps[i]),
            self.messages[i].copy(),
        )


def _draw_destination(
    batch: Batch, i: int, rng: np.random.Generator, strict: bool
) -> int:
    z = int(rng.integers(0, batch.node_count))
    if strict:
        while z == int(batch.destinations[i]):
            z = int(rng.integers(0, batch.node_count))
    return z


def sample_negative_random(
    batch: Batch, rng: np.random.Generator, strict: bool = False
) -> list[TemporalEdge]:
    """One negative per positive: same source/timestamp/message, destination
    re-drawn uniformly over all nodes.

    With ``strict`` the draw is repeated until it differs from the
    positive's destination; the default allows collisions (plain uniform).
    """
    out = []
    for i in range(len(batch)):
        z = _draw_destination(batch, i, rng, strict)
        out.append(
            TemporalEdge(
                int(batch.sources[i]), z, float(batch.timestamps[i]), batch.messages[i].copy()
            )
        )
    return out


def sample_negative_mixed(
    batch: Batch, rng: np.random.Generator, strict: bool = False
) -> list[tuple[TemporalEdge, PerturbationKind]]:
    """One negative per positive via a uniformly chosen perturbation.

    Kinds are destination, timestamp, or message; message perturbation draws
    uniformly among the other messages of the batch and is excluded entirely
    on non-attributed graphs. A size-1 batch cannot lend a foreign message,
    so a message pick falls back to a destination perturbation. Returns the
    applied kind alongside each negative.
    """
    n = len(batch)
    kinds = [PerturbationKind.DESTINATION, PerturbationKind.TIMESTAMP]
    if batch.message_dim > 0:
        kinds.append(PerturbationKind.MESSAGE)
    t_lo, t_hi = batch.time_range
    out: list[tuple[TemporalEdge, PerturbationKind]] = []
    for i in range(n):
        kind = kinds[int(rng.integers(0, len(kinds)))]
        if kind is PerturbationKind.MESSAGE and n == 1:
            kind = PerturbationKind.DESTINATION
        source = int(batch.sources[i])
        destination = int(batch.destinations[i])
        timestamp = float(batch.timestamps[i])
        message = batch.messages[i].copy()
        if kind is PerturbationKind.DESTINATION:
            destination = _draw_destination(batch, i, rng, strict)
        elif kind is PerturbationKind.TIMESTAMP:
            timestamp = float(rng.uniform(t_lo, t_hi))
        else:
            j = int(rng.integers(0, n - 1))
            if j >= i:
                j += 1
            message = batch.messages[j].copy()
        out.append((TemporalEdge(source, destination, timestamp, message), kind))
    return out
