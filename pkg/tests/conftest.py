import numpy as np
import pytest

from ctdg_bench.events import AnomalyType, EventLog
from ctdg_bench.generator import GeneratorConfig, generate_detailed


def make_log(rows, node_count, dim=0, labels=None) -> EventLog:
    """Hand-built log from (source, destination, timestamp[, message]) rows.

    Rows may be unsorted; they are stably sorted here. Labels align with the
    input row order before sorting.
    """
    n = len(rows)
    sources = np.array([r[0] for r in rows], dtype=np.int64)
    destinations = np.array([r[1] for r in rows], dtype=np.int64)
    timestamps = np.array([r[2] for r in rows], dtype=np.float64)
    if dim:
        messages = np.array([r[3] for r in rows], dtype=np.float64).reshape(n, dim)
    else:
        messages = np.empty((n, 0), dtype=np.float64)
    if labels is None:
        label_arr = np.zeros(n, dtype=np.int64)
    else:
        label_arr = np.array([int(l) for l in labels], dtype=np.int64)
    order = np.argsort(timestamps, kind="stable")
    return EventLog(
        sources[order], destinations[order], timestamps[order],
        messages[order], label_arr[order], node_count,
    )


def random_log(seed, n_events=200, node_count=20, dim=3, t_max=100.0) -> EventLog:
    rng = np.random.default_rng(seed)
    sources = rng.integers(0, node_count, n_events)
    destinations = rng.integers(0, node_count, n_events)
    timestamps = np.sort(rng.uniform(0, t_max, n_events))
    messages = rng.normal(size=(n_events, dim))
    labels = np.zeros(n_events, dtype=np.int64)
    return EventLog(sources, destinations, timestamps, messages, labels, node_count)


def desk_generator_config(seed=20250811) -> GeneratorConfig:
    """1/10-scale analogue of the reference synthetic graph: same per-edge
    occurrence rate, activity-span proportions, classes, and message noise."""
    return GeneratorConfig(
        node_count=1000,
        temporal_edge_target=100_000,
        communities=10,
        avg_occurrences=50.0,
        time_span=1e8,
        span_mean=1e6,  # 1% of the time span
        span_std=5e5,  # 0.5% of the time span
        classes=5,
        message_dim=100,
        message_noise=0.05,
        timestamp_noise_fraction=0.05,
        intra_inter_ratio=6.0,
        seed=seed,
    )


@pytest.fixture(scope="session")
def desk_result():
    return generate_detailed(desk_generator_config())


@pytest.fixture(scope="session")
def desk_log(desk_result):
    return desk_result.log
