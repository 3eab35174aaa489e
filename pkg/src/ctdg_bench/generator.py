"""Synthetic continuous-time dynamic graph generator.

The generated graphs carry three controllable consistencies:

* structure: a community-partitioned static backbone sampled from a
  stochastic block model with a tunable intra/inter edge-count ratio;
* context: nodes get uniform classes, and every ordered class pair owns a
  block-orthogonal expected message that event messages scatter around;
* time: each static edge is active in one lognormal-length window, with
  its occurrences evenly spaced inside the window plus Gaussian jitter.

Everything is a pure function of the config, including its seed: each
static edge draws from its own counter-derived RNG stream, so regenerating
with the same config is byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .events import AnomalyType, EventLog, TemporalEdge

__all__ = [
    "GeneratorConfig",
    "StaticEdgeSet",
    "GenerationResult",
    "generate_static_graph",
    "expected_message",
    "sample_edge_timeline",
    "generate",
    "generate_detailed",
]

# spawn-key domains for the per-phase RNG streams
_STATIC_STREAM = 0
_CLASS_STREAM = 1
_TIMELINE_STREAM = 2

# below this many node pairs, inter-community pairs are enumerated exactly
# instead of rejection-sampled
_ENUMERATE_PAIR_LIMIT = 2_000_000


def _stream_rng(seed: int, spawn_key: tuple[int, ...]) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=spawn_key))


@dataclass
class GeneratorConfig:
    """All inputs of the synthetic graph generator.

    ``span_mean`` / ``span_std`` are the desired mean and standard deviation
    of the per-edge activity-window length, in time units; they are
    converted internally to the underlying lognormal parameters.
    ``timestamp_noise_fraction`` scales the per-edge jitter std as a
    fraction of the edge's mean inter-event time (span / occurrences).
    """

    node_count: int
    temporal_edge_target: int
    communities: int
    avg_occurrences: float
    time_span: float
    span_mean: float
    span_std: float
    classes: int
    message_dim: int
    message_noise: float
    timestamp_noise_fraction: float = 0.05
    intra_inter_ratio: float = 6.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.communities <= self.node_count:
            raise ValueError(
                f"need node_count >= communities >= 1, got "
                f"{self.node_count} / {self.communities}"
            )
        if self.classes < 1:
            raise ValueError("classes must be >= 1")
        if self.message_dim < 0:
            raise ValueError("message_dim must be >= 0")
        if self.message_dim > 0 and self.message_dim % self.classes**2 != 0:
            raise ValueError(
                f"message_dim {self.message_dim} must be divisible by "
                f"classes^2 = {self.classes ** 2}"
            )
        if self.temporal_edge_target < 0:
            raise ValueError("temporal_edge_target must be >= 0")
        if self.avg_occurrences <= 0:
            raise ValueError("avg_occurrences must be positive")
        if self.time_span <= 0:
            raise ValueError("time_span must be positive")
        if self.span_mean <= 0:
            raise ValueError("span_mean must be positive")
        if self.span_std < 0:
            raise ValueError("span_std must be >= 0")
        # zero noise is allowed: it produces the exactly-regular graphs used
        # by the diagnostics suite
        if self.timestamp_noise_fraction < 0:
            raise ValueError("timestamp_noise_fraction must be >= 0")
        if self.message_noise < 0:
            raise ValueError("message_noise must be >= 0")
        if self.intra_inter_ratio <= 0:
            raise ValueError("intra_inter_ratio must be positive")

    def lognormal_params(self) -> tuple[float, float]:
        """Underlying normal (mu, sigma) matching span_mean/span_std."""
        m, s = self.span_mean, self.span_std
        sigma_sq = math.log(1.0 + (s * s) / (m * m))
        mu = math.log(m) - 0.5 * sigma_sq
        return mu, math.sqrt(sigma_sq)

    def static_edge_count(self) -> int:
        if self.temporal_edge_target == 0:
            return 0
        return math.ceil(self.temporal_edge_target / self.avg_occurrences)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown generator config fields: {sorted(extra)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GeneratorConfig":
        return cls.from_dict(json.loads(text))


@dataclass
class StaticEdgeSet:
    """Static backbone: unordered node pairs plus node partition labels.

    ``communities`` and ``classes`` are 1-based assignments; ``classes`` is
    filled in by :func:`generate_detailed` (the static sampler itself does
    not draw class labels).
    """

    pairs: np.ndarray  # (k, 2) int64, each row (u, v) with u < v
    communities: np.ndarray  # (node_count,) int64 in 1..M
    classes: np.ndarray | None = None  # (node_count,) int64 in 1..C

    def intra_mask(self) -> np.ndarray:
        return self.communities[self.pairs[:, 0]] == self.communities[self.pairs[:, 1]]

    def intra_fraction(self) -> float:
        if not len(self.pairs):
            return 0.0
        return float(self.intra_mask().mean())


def _community_sizes(node_count: int, communities: int) -> np.ndarray:
    base, rem = divmod(node_count, communities)
    sizes = np.full(communities, base, dtype=np.int64)
    sizes[:rem] += 1
    return sizes


def _biased_group_counts(
    n_intra: int, n_inter: int, intra_weight: float, draws: int, rng: np.random.Generator
) -> int:
    """Number of intra picks in sequential weighted sampling w/o replacement.

    Two weight groups only, so the per-pair process collapses to a biased
    urn over remaining group counts.
    """
    u = rng.random(draws)
    remaining_intra, remaining_inter = n_intra, n_inter
    k = 0
    for x in u:
        wi = intra_weight * remaining_intra
        p = wi / (wi + remaining_inter)
        if x < p:
            k += 1
            remaining_intra -= 1
        else:
            remaining_inter -= 1
    return k


def _decode_intra_pairs(
    flat: np.ndarray, sizes: np.ndarray, offsets: np.ndarray
) -> np.ndarray:
    """Map flat indices over concatenated per-community triangles to pairs."""
    tri = sizes * (sizes - 1) // 2
    cum_tri = np.concatenate([[0], np.cumsum(tri)])
    out = np.empty((len(flat), 2), dtype=np.int64)
    comm = np.searchsorted(cum_tri, flat, side="right") - 1
    for c in np.unique(comm):
        size = int(sizes[c])
        sel = comm == c
        local = flat[sel] - cum_tri[c]
        # pairs (i, j), i < j, lexicographic; row i starts at
        # row_start(i) = i*(size-1) - i*(i-1)/2
        rows = np.arange(size, dtype=np.int64)
        row_start = rows * (size - 1) - rows * (rows - 1) // 2
        i = np.searchsorted(row_start, local, side="right") - 1
        j = local - row_start[i] + i + 1
        out[sel, 0] = offsets[c] + i
        out[sel, 1] = offsets[c] + j
    return out


def _sample_inter_pairs(
    k: int,
    membership: np.ndarray,
    node_count: int,
    rng: np.random.Generator,
) -> np.ndarray:
    if k == 0:
        return np.empty((0, 2), dtype=np.int64)
    total_pairs = node_count * (node_count - 1) // 2
    if total_pairs <= _ENUMERATE_PAIR_LIMIT:
        iu, iv = np.triu_indices(node_count, k=1)
        mask = membership[iu] != membership[iv]
        cand_u, cand_v = iu[mask], iv[mask]
        sel = rng.choice(len(cand_u), size=k, replace=False)
        sel.sort()
        return np.column_stack([cand_u[sel], cand_v[sel]]).astype(np.int64)
    chosen: set[tuple[int, int]] = set()
    out: list[tuple[int, int]] = []
    while len(out) < k:
        batch = max(4 * (k - len(out)), 1024)
        a = rng.integers(0, node_count, size=batch)
        b = rng.integers(0, node_count, size=batch)
        u = np.minimum(a, b)
        v = np.maximum(a, b)
        ok = (u != v) & (membership[u] != membership[v])
        for x, y in zip(u[ok], v[ok]):
            key = (int(x), int(y))
            if key not in chosen:
                chosen.add(key)
                out.append(key)
                if len(out) == k:
                    break
    return np.asarray(out, dtype=np.int64)


def generate_static_graph(
    node_count: int,
    target_static_edges: int,
    communities: int,
    intra_inter_ratio: float,
    rng: np.random.Generator,
) -> StaticEdgeSet:
    """Sample a community-structured simple graph with an exact edge budget.

    Nodes are assigned to near-equal contiguous communities. Pairs are drawn
    without replacement with per-pair weights tuned so the expected realized
    intra:inter edge-count ratio equals ``intra_inter_ratio`` (weights are
    scaled by the group sizes; a raw intra-pair weight would skew the count
    ratio because inter pairs vastly outnumber intra pairs).
    """
    total_pairs = node_count * (node_count - 1) // 2
    if target_static_edges > total_pairs:
        raise ValueError(
            f"cannot place {target_static_edges} distinct edges on "
            f"{node_count} nodes ({total_pairs} pairs available)"
        )
    sizes = _community_sizes(node_count, communities)
    offsets = np.concatenate([[0], np.cumsum(sizes)])[:-1]
    membership = np.repeat(np.arange(1, communities + 1, dtype=np.int64), sizes)
    n_intra = int(np.sum(sizes * (sizes - 1) // 2))
    n_inter = total_pairs - n_intra

    if target_static_edges == 0:
        return StaticEdgeSet(np.empty((0, 2), dtype=np.int64), membership)
    if n_inter == 0:
        k_intra = target_static_edges
    elif n_intra == 0:
        k_intra = 0
    else:
        intra_weight = intra_inter_ratio * n_inter / n_intra
        k_intra = _biased_group_counts(
            n_intra, n_inter, intra_weight, target_static_edges, rng
        )
    k_inter = target_static_edges - k_intra

    if k_intra:
        flat = rng.choice(n_intra, size=k_intra, replace=False)
        flat.sort()
        intra_pairs = _decode_intra_pairs(flat, sizes, offsets)
    else:
        intra_pairs = np.empty((0, 2), dtype=np.int64)
    inter_pairs = _sample_inter_pairs(k_inter, membership, node_count, rng)
    pairs = np.vstack([intra_pairs, inter_pairs])
    return StaticEdgeSet(pairs, membership)


def expected_message(class_a: int, class_b: int, classes: int, message_dim: int) -> np.ndarray:
    """Block-indicator expected message for an ordered class pair.

    Each of the ``classes**2`` ordered pairs owns a disjoint block of
    ``message_dim / classes**2`` ones, so expected messages of distinct
    pairs are orthogonal.
    """
    if not (1 <= class_a <= classes and 1 <= class_b <= classes):
        raise ValueError(f"class pair ({class_a}, {class_b}) out of range 1..{classes}")
    if message_dim % classes**2 != 0:
        raise ValueError(
            f"message_dim {message_dim} must be divisible by classes^2 = {classes ** 2}"
        )
    out = np.zeros(message_dim, dtype=np.float64)
    block = message_dim // classes**2
    start = block * ((class_a - 1) * classes + (class_b - 1))
    out[start : start + block] = 1.0
    return out


def _sample_timeline_arrays(
    mean_message: np.ndarray, config: GeneratorConfig, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw one static edge's occurrence timestamps and messages."""
    count = int(rng.poisson(config.avg_occurrences))
    if count == 0:
        return (
            np.empty(0, dtype=np.float64),
            np.empty((0, config.message_dim), dtype=np.float64),
        )
    mu, sigma = config.lognormal_params()
    span = float(rng.lognormal(mu, sigma))
    redraws = 0
    while span >= config.time_span and redraws < 100:
        span = float(rng.lognormal(mu, sigma))
        redraws += 1
    if span >= config.time_span:
        span = config.time_span
        start = 0.0
    else:
        start = float(rng.uniform(0.0, config.time_span - span))
    if count > 1:
        base = start + np.arange(count, dtype=np.float64) * (span / (count - 1))
    else:
        # the even-spacing step is undefined for a single occurrence; it
        # sits at the window start (plus the same jitter every event gets)
        base = np.full(1, start, dtype=np.float64)
    jitter_std = config.timestamp_noise_fraction * span / count
    timestamps = base + rng.normal(0.0, jitter_std, size=count)
    np.clip(timestamps, 0.0, config.time_span, out=timestamps)
    messages = mean_message + config.message_noise * rng.standard_normal(
        (count, config.message_dim)
    )
    return timestamps, messages


def sample_edge_timeline(
    static_edge: tuple[int, int],
    class_pair: tuple[int, int],
    config: GeneratorConfig,
    rng: np.random.Generator,
) -> list[TemporalEdge]:
    """All occurrences of one static edge, in draw order (possibly unsorted
    under jitter; the caller sorts globally)."""
    u, v = static_edge
    mean = expected_message(class_pair[0], class_pair[1], config.classes, config.message_dim)
    timestamps, messages = _sample_timeline_arrays(mean, config, rng)
    return [
        TemporalEdge(u, v, float(timestamps[i]), messages[i]) for i in range(len(timestamps))
    ]


@dataclass
class GenerationResult:
    log: EventLog
    static_edges: StaticEdgeSet


def generate_detailed(config: GeneratorConfig) -> GenerationResult:
    """Run the full generator, keeping the static backbone for inspection."""
    n_static = config.static_edge_count()
    static = generate_static_graph(
        config.node_count,
        n_static,
        config.communities,
        config.intra_inter_ratio,
        _stream_rng(config.seed, (_STATIC_STREAM,)),
    )
    class_rng = _stream_rng(config.seed, (_CLASS_STREAM,))
    static.classes = class_rng.integers(
        1, config.classes + 1, size=config.node_count
    ).astype(np.int64)

    mean_cache: dict[tuple[int, int], np.ndarray] = {}
    ts_parts: list[np.ndarray] = []
    msg_parts: list[np.ndarray] = []
    src_parts: list[np.ndarray] = []
    dst_parts: list[np.ndarray] = []
    for idx in range(len(static.pairs)):
        u = int(static.pairs[idx, 0])
        v = int(static.pairs[idx, 1])
        key = (int(static.classes[u]), int(static.classes[v]))
        mean = mean_cache.get(key)
        if mean is None:
            mean = expected_message(key[0], key[1], config.classes, config.message_dim)
            mean_cache[key] = mean
        rng = _stream_rng(config.seed, (_TIMELINE_STREAM, idx))
        timestamps, messages = _sample_timeline_arrays(mean, config, rng)
        if not len(timestamps):
            continue
        ts_parts.append(timestamps)
        msg_parts.append(messages)
        src_parts.append(np.full(len(timestamps), u, dtype=np.int64))
        dst_parts.append(np.full(len(timestamps), v, dtype=np.int64))

    if ts_parts:
        timestamps = np.concatenate(ts_parts)
        messages = np.vstack(msg_parts)
        sources = np.concatenate(src_parts)
        destinations = np.concatenate(dst_parts)
    else:
        timestamps = np.empty(0, dtype=np.float64)
        messages = np.empty((0, config.message_dim), dtype=np.float64)
        sources = np.empty(0, dtype=np.int64)
        destinations = np.empty(0, dtype=np.int64)
    order = np.argsort(timestamps, kind="stable")
    log = EventLog(
        sources[order],
        destinations[order],
        timestamps[order],
        messages[order],
        np.full(len(order), int(AnomalyType.BENIGN), dtype=np.int64),
        config.node_count,
    )
    return GenerationResult(log, static)


def generate(config: GeneratorConfig) -> EventLog:
    """Generate a benign synthetic event log; deterministic in the config."""
    return generate_detailed(config).log
