"""Synthesis and injection of typed edge anomalies into a benign split.

Randomness stands in for abnormality: re-drawing a timestamp, message, or
destination of a sampled reference edge produces a temporal, contextual, or
structural deviation respectively. The five supported types combine these
perturbations:

* temporal (t): new uniform timestamp within the split's time span;
* contextual (c): message swapped for the least-similar of K candidate
  messages drawn from the split (cosine similarity);
* temporal-contextual (tc): both of the above on the same reference;
* structural-contextual (sc): destination replaced by that of a temporally
  close event, plus the contextual message swap;
* temporal-structural-contextual (tsc): fully random edge.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .events import AnomalyType, EventLog, LabeledEdge, TemporalEdge

__all__ = [
    "InjectionConfig",
    "InjectionResult",
    "reference_weights",
    "sample_reference",
    "perturb_timestamp",
    "perturb_message",
    "perturb_destination",
    "random_edge",
    "synthesize_anomalies",
    "inject",
    "inject_detailed",
]


@dataclass
class InjectionConfig:
    """Parameters of one injection run.

    ``rate`` is the anomaly count as a fraction of the split size (ceil);
    ``candidate_count`` is the pool size K of the contextual swap;
    ``window_size`` is the temporal window W of the structural swap.
    ``pick_most_similar`` flips the contextual swap to the highest-cosine
    candidate (the default picks the most distant one).
    """

    anomaly_type: AnomalyType
    rate: float = 0.05
    candidate_count: int = 10
    window_size: int = 20
    seed: int = 0
    pick_most_similar: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.anomaly_type, str):
            self.anomaly_type = AnomalyType.from_short_name(self.anomaly_type)
        self.anomaly_type = AnomalyType(self.anomaly_type)
        if self.anomaly_type is AnomalyType.BENIGN:
            raise ValueError("anomaly_type must be one of the anomalous categories")
        if not 0.0 < self.rate < 1.0:
            raise ValueError(f"rate must lie in (0, 1), got {self.rate}")
        if self.candidate_count < 1:
            raise ValueError("candidate_count must be >= 1")
        if self.window_size < 1:
            raise ValueError("window_size must be >= 1")

    def to_dict(self) -> dict:
        data = asdict(self)
        data["anomaly_type"] = self.anomaly_type.short_name
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "InjectionConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown injection config fields: {sorted(extra)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "InjectionConfig":
        return cls.from_dict(json.loads(text))


def reference_weights(split: EventLog) -> np.ndarray:
    """Per-event selection probabilities for reference sampling.

    A node pair with o occurrences in the split is picked with probability
    proportional to o**-0.5, uniformly within its occurrences; per event
    that is o**-1.5 before normalization.
    """
    if not len(split):
        raise ValueError("cannot sample references from an empty split")
    pair_ids = split.sources * split.node_count + split.destinations
    _, inverse, counts = np.unique(pair_ids, return_inverse=True, return_counts=True)
    weights = counts[inverse].astype(np.float64) ** -1.5
    return weights / weights.sum()


def sample_reference(split: EventLog, rng: np.random.Generator) -> LabeledEdge:
    """Draw one benign reference event (occurrence-discounted pair weights)."""
    return split[_sample_reference_index(split, reference_weights(split), rng)]


def _sample_reference_index(
    split: EventLog, weights: np.ndarray, rng: np.random.Generator
) -> int:
    return int(rng.choice(len(split), p=weights))


def perturb_timestamp(
    edge: TemporalEdge, time_range: tuple[float, float], rng: np.random.Generator
) -> LabeledEdge:
    """Copy of ``edge`` with a uniform timestamp in ``time_range``."""
    t_lo, t_hi = float(time_range[0]), float(time_range[1])
    if not t_lo < t_hi:
        raise ValueError(f"degenerate time range ({t_lo}, {t_hi})")
    perturbed = TemporalEdge(
        edge.source, edge.destination, float(rng.uniform(t_lo, t_hi)), edge.message
    )
    return LabeledEdge(perturbed, AnomalyType.TEMPORAL)


def _cosine_similarities(message: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    dots = candidates @ message
    norms = np.linalg.norm(candidates, axis=1) * np.linalg.norm(message)
    out = np.zeros(len(candidates), dtype=np.float64)
    nz = norms > 0
    out[nz] = dots[nz] / norms[nz]
    return out


def perturb_message(
    edge: TemporalEdge,
    pool: np.ndarray,
    candidate_count: int,
    rng: np.random.Generator,
    pick_most_similar: bool = False,
) -> LabeledEdge:
    """Copy of ``edge`` with its message swapped for a pool candidate.

    Draws ``candidate_count`` distinct messages from ``pool`` and keeps the
    one with minimal cosine similarity to the original (maximal distance);
    exact ties resolve to the lowest candidate index.
    """
    pool = np.asarray(pool, dtype=np.float64)
    if pool.ndim != 2 or pool.shape[1] == 0:
        raise ValueError("contextual anomalies unavailable: graph has no edge messages")
    if len(pool) < candidate_count:
        raise ValueError(
            f"message pool has {len(pool)} entries, need >= {candidate_count}"
        )
    idx = rng.choice(len(pool), size=candidate_count, replace=False)
    similarities = _cosine_similarities(edge.message, pool[idx])
    pick = int(np.argmax(similarities) if pick_most_similar else np.argmin(similarities))
    perturbed = TemporalEdge(
        edge.source, edge.destination, edge.timestamp, pool[idx[pick]].copy()
    )
    return LabeledEdge(perturbed, AnomalyType.CONTEXTUAL)


def perturb_destination(
    edge: TemporalEdge,
    split: EventLog,
    window_size: int,
    candidate_count: int,
    rng: np.random.Generator,
    exclude_index: Optional[int] = None,
    pick_most_similar: bool = False,
) -> LabeledEdge:
    """Copy of ``edge`` re-wired to a temporally close event's destination.

    The candidate window holds the ``window_size`` events nearest in time
    (ties by event index, the reference itself excluded); admissible
    candidates must not reproduce the original destination or create a
    self-loop. An empty admissible set doubles the window, up to the split
    size. The message is additionally swapped as for contextual anomalies
    (skipped on non-attributed graphs, where messages are empty).
    """
    n = len(split)
    deltas = np.abs(split.timestamps - edge.timestamp)
    if exclude_index is not None:
        deltas = deltas.copy()
        deltas[exclude_index] = np.inf
    order = np.argsort(deltas, kind="stable")
    available = n - (1 if exclude_index is not None else 0)
    if available <= 0:
        raise ValueError("no candidate events available for destination swap")
    width = min(window_size, available)
    while True:
        window = order[:width]
        dests = split.destinations[window]
        admissible = window[(dests != edge.destination) & (dests != edge.source)]
        if len(admissible):
            break
        if width >= available:
            raise ValueError(
                "no admissible destination among the split's events "
                f"(window widened to {width})"
            )
        width = min(2 * width, available)
    pick = int(admissible[rng.integers(0, len(admissible))])
    new_destination = int(split.destinations[pick])
    if split.message_dim > 0:
        message = perturb_message(
            edge, split.messages, candidate_count, rng, pick_most_similar
        ).edge.message
    else:
        message = edge.message
    perturbed = TemporalEdge(edge.source, new_destination, edge.timestamp, message)
    return LabeledEdge(perturbed, AnomalyType.STRUCTURAL_CONTEXTUAL)


def random_edge(
    node_count: int,
    time_range: tuple[float, float],
    message_pool: np.ndarray,
    rng: np.random.Generator,
) -> LabeledEdge:
    """Fully random edge: uniform ordered node pair, timestamp, and message.

    On non-attributed graphs the message is the empty vector.
    """
    if node_count < 2:
        raise ValueError("need at least two nodes to draw a random edge")
    source = int(rng.integers(0, node_count))
    destination = int(rng.integers(0, node_count - 1))
    if destination >= source:
        destination += 1
    timestamp = float(rng.uniform(float(time_range[0]), float(time_range[1])))
    message_pool = np.asarray(message_pool, dtype=np.float64)
    if message_pool.ndim == 2 and message_pool.shape[1] > 0 and len(message_pool):
        message = message_pool[int(rng.integers(0, len(message_pool)))].copy()
    else:
        dim = message_pool.shape[1] if message_pool.ndim == 2 else 0
        message = np.zeros(dim, dtype=np.float64)
    return LabeledEdge(TemporalEdge(source, destination, timestamp, message), AnomalyType.TEMPORAL_STRUCTURAL_CONTEXTUAL)


def _anomaly_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def synthesize_anomalies(
    split: EventLog, config: InjectionConfig, count: Optional[int] = None
) -> tuple[list[LabeledEdge], list[Optional[int]]]:
    """Create ceil(rate * n) anomalies of the configured type.

    Returns the anomalies plus, per anomaly, the index of its reference
    event in the split (None for the fully random type). References are
    sampled with replacement; each anomaly draws from its own seed-derived
    RNG stream.
    """
    if not len(split):
        raise ValueError("cannot inject into an empty split")
    if split.anomaly_mask().any():
        raise ValueError("injection target must be all-benign")
    kind = config.anomaly_type
    needs_messages = kind in (AnomalyType.CONTEXTUAL, AnomalyType.TEMPORAL_CONTEXTUAL)
    if needs_messages and split.message_dim == 0:
        raise ValueError(
            "contextual anomalies unavailable: graph has no edge messages"
        )
    if count is None:
        count = math.ceil(config.rate * len(split))
    time_range = (float(split.timestamps[0]), float(split.timestamps[-1]))
    weights = reference_weights(split)
    anomalies: list[LabeledEdge] = []
    references: list[Optional[int]] = []
    for i in range(count):
        rng = _anomaly_rng(config.seed, i)
        if kind is AnomalyType.TEMPORAL_STRUCTURAL_CONTEXTUAL:
            anomalies.append(random_edge(split.node_count, time_range, split.messages, rng))
            references.append(None)
            continue
        ref_index = _sample_reference_index(split, weights, rng)
        ref = split[ref_index].edge
        if kind is AnomalyType.TEMPORAL:
            item = perturb_timestamp(ref, time_range, rng)
        elif kind is AnomalyType.CONTEXTUAL:
            item = perturb_message(
                ref, split.messages, config.candidate_count, rng, config.pick_most_similar
            )
        elif kind is AnomalyType.TEMPORAL_CONTEXTUAL:
            shifted = perturb_timestamp(ref, time_range, rng).edge
            swapped = perturb_message(
                shifted, split.messages, config.candidate_count, rng, config.pick_most_similar
            )
            item = LabeledEdge(swapped.edge, AnomalyType.TEMPORAL_CONTEXTUAL)
        elif kind is AnomalyType.STRUCTURAL_CONTEXTUAL:
            item = perturb_destination(
                ref,
                split,
                config.window_size,
                config.candidate_count,
                rng,
                exclude_index=ref_index,
                pick_most_similar=config.pick_most_similar,
            )
        else:  # pragma: no cover - exhaustive over anomalous types
            raise ValueError(f"unsupported anomaly type {kind}")
        anomalies.append(item)
        references.append(ref_index)
    return anomalies, references


@dataclass
class InjectionResult:
    log: EventLog
    anomalies: list[LabeledEdge]
    reference_indices: list[Optional[int]]


def inject_detailed(split: EventLog, config: InjectionConfig) -> InjectionResult:
    """Inject anomalies and keep their reference linkage for auditing."""
    anomalies, references = synthesize_anomalies(split, config)
    k = len(anomalies)
    n = len(split)
    sources = np.concatenate(
        [split.sources, np.fromiter((a.edge.source for a in anomalies), np.int64, k)]
    )
    destinations = np.concatenate(
        [split.destinations, np.fromiter((a.edge.destination for a in anomalies), np.int64, k)]
    )
    timestamps = np.concatenate(
        [split.timestamps, np.fromiter((a.edge.timestamp for a in anomalies), np.float64, k)]
    )
    if k:
        anom_messages = np.vstack([a.edge.message for a in anomalies])
    else:
        anom_messages = np.empty((0, split.message_dim), dtype=np.float64)
    messages = np.vstack([split.messages, anom_messages])
    labels = np.concatenate(
        [split.labels, np.fromiter((int(a.label) for a in anomalies), np.int64, k)]
    )
    # stable sort keeps originals ahead of same-timestamp anomalies
    order = np.argsort(timestamps, kind="stable")
    log = EventLog(
        sources[order], destinations[order], timestamps[order],
        messages[order], labels[order], split.node_count,
    )
    return InjectionResult(log, anomalies, references)


def inject(split: EventLog, config: InjectionConfig) -> EventLog:
    """Benign split -> split plus ceil(rate*n) typed anomalies, re-sorted."""
    return inject_detailed(split, config).log
