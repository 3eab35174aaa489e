import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctdg_bench.events import (
    AnomalyType,
    EventLog,
    LabeledEdge,
    NeighborIndex,
    SplitSpec,
    TemporalEdge,
    build_log,
    chronological_split,
    organic_split,
)

from conftest import make_log, random_log
from oracles import neighbors_brute


def edge(u, v, t, msg=()):
    return LabeledEdge(TemporalEdge(u, v, t, np.asarray(msg, dtype=float)))


class TestBuildLog:
    def test_empty(self):
        log = build_log([], node_count=5, message_dim=3)
        assert len(log) == 0
        assert log.message_dim == 3
        assert log.node_count == 5

    def test_sorts_by_timestamp(self):
        log = build_log([edge(1, 2, 7.0), edge(0, 1, 3.0)], node_count=3, message_dim=0)
        assert log.timestamps.tolist() == [3.0, 7.0]
        assert log.sources.tolist() == [0, 1]
        assert log.destinations.tolist() == [1, 2]

    def test_stable_ties(self):
        a = edge(0, 1, 5.0)
        b = edge(2, 3, 5.0)
        log = build_log([a, b], node_count=4, message_dim=0)
        assert log.sources.tolist() == [0, 2]

    def test_negative_timestamp_names_index(self):
        with pytest.raises(ValueError, match="event 1"):
            build_log([edge(0, 1, 1.0), edge(0, 1, -2.0)], node_count=2, message_dim=0)

    def test_node_id_out_of_range_names_index(self):
        with pytest.raises(ValueError, match="event 0"):
            build_log([edge(0, 9, 1.0)], node_count=3, message_dim=0)

    def test_message_dim_mismatch_names_index(self):
        events = [edge(0, 1, 1.0, [1.0, 2.0]), edge(0, 1, 2.0, [1.0])]
        with pytest.raises(ValueError, match="event 1"):
            build_log(events, node_count=2, message_dim=2)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(0, 60))
    def test_round_trip_idempotent(self, seed, n):
        log = random_log(seed, n_events=n, node_count=7, dim=2)
        rebuilt = build_log(list(log), node_count=7, message_dim=2)
        assert rebuilt == log


class TestEventLog:
    def test_columns_read_only(self):
        log = random_log(0, n_events=5)
        with pytest.raises(ValueError):
            log.timestamps[0] = -1.0

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError, match="non-decreasing"):
            EventLog(
                np.array([0, 0]), np.array([1, 1]), np.array([2.0, 1.0]),
                np.empty((2, 0)), np.zeros(2, dtype=int), 2,
            )

    def test_rejects_bad_label(self):
        with pytest.raises(ValueError, match="label"):
            EventLog(
                np.array([0]), np.array([1]), np.array([1.0]),
                np.empty((1, 0)), np.array([9]), 2,
            )

    def test_indexing_and_slicing(self):
        log = make_log([(0, 1, 1.0), (1, 2, 2.0), (2, 0, 3.0)], node_count=3)
        item = log[1]
        assert item.edge.source == 1 and item.edge.timestamp == 2.0
        assert item.label is AnomalyType.BENIGN
        part = log[1:]
        assert isinstance(part, EventLog)
        assert len(part) == 2
        assert part.node_count == 3

    def test_time_range(self):
        log = make_log([(0, 1, 2.0), (0, 1, 9.0)], node_count=2)
        assert log.time_range() == (2.0, 9.0)
        with pytest.raises(ValueError):
            EventLog.empty(2, 0).time_range()


class TestNeighborIndex:
    def test_enumeration_example(self):
        log = make_log([(1, 2, 5.0), (1, 3, 7.0), (2, 3, 9.0)], node_count=4)
        index = NeighborIndex(log)
        got = [(nbr, ts) for nbr, ts, _ in index.neighbors_before(1, 8.0)]
        assert got == [(2, 5.0), (3, 7.0)]

    def test_strict_boundary(self):
        log = make_log([(1, 2, 5.0), (1, 3, 7.0), (2, 3, 9.0)], node_count=4)
        assert NeighborIndex(log).neighbors_before(1, 5.0) == []

    def test_unknown_node_empty(self):
        log = make_log([(1, 2, 5.0)], node_count=10)
        assert NeighborIndex(log).neighbors_before(7, 100.0) == []

    def test_sees_both_directions(self):
        log = make_log([(1, 2, 5.0)], node_count=3)
        index = NeighborIndex(log)
        assert index.neighbors_before(2, 6.0) == [(1, 5.0, 0)]

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_matches_brute_force(self, seed):
        log = random_log(seed, n_events=150, node_count=12, dim=0, t_max=50.0)
        index = NeighborIndex(log)
        rng = np.random.default_rng(seed)
        for _ in range(10):
            node = int(rng.integers(0, 13))
            t = float(rng.uniform(-1, 55))
            assert index.neighbors_before(node, t) == neighbors_brute(log, node, t)

    def test_matches_brute_force_large(self):
        log = random_log(99, n_events=10_000, node_count=40, dim=0, t_max=1e4)
        index = NeighborIndex(log)
        rng = np.random.default_rng(7)
        for _ in range(5):
            node = int(rng.integers(0, 40))
            t = float(rng.uniform(0, 1e4))
            assert index.neighbors_before(node, t) == neighbors_brute(log, node, t)


class TestSplitSpec:
    def test_defaults_valid(self):
        SplitSpec()

    @pytest.mark.parametrize(
        "fracs",
        [(0.5, 0.5, 0.5), (0.7, 0.3, 0.0), (-0.1, 0.6, 0.5), (0.7, 0.2, 0.0999)],
    )
    def test_rejects_bad_fractions(self, fracs):
        with pytest.raises(ValueError):
            SplitSpec(*fracs)


class TestChronologicalSplit:
    def test_sizes_100(self):
        log = random_log(1, n_events=100, dim=0)
        train, val, test = chronological_split(log, SplitSpec(0.70, 0.15, 0.15))
        assert (len(train), len(val), len(test)) == (70, 15, 15)

    def test_floor_rule_10(self):
        log = random_log(2, n_events=10, dim=0)
        train, val, test = chronological_split(log, SplitSpec(0.70, 0.15, 0.15))
        assert (len(train), len(val), len(test)) == (7, 1, 2)

    def test_empty(self):
        log = EventLog.empty(4, 2)
        train, val, test = chronological_split(log)
        assert (len(train), len(val), len(test)) == (0, 0, 0)
        assert val.message_dim == 2

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(0, 80))
    def test_pieces_concatenate_to_input(self, seed, n):
        log = random_log(seed, n_events=n, node_count=9, dim=1)
        train, val, test = chronological_split(log)
        ts = np.concatenate([train.timestamps, val.timestamps, test.timestamps])
        src = np.concatenate([train.sources, val.sources, test.sources])
        assert np.array_equal(ts, log.timestamps)
        assert np.array_equal(src, log.sources)
        assert len(train) + len(val) + len(test) == n


BENIGN = AnomalyType.BENIGN
ANOM = AnomalyType.TEMPORAL_STRUCTURAL_CONTEXTUAL


class TestOrganicSplit:
    def test_hand_partition(self):
        # anomalies at positions 2 and 4; val takes the first anomaly and
        # runs until just before the second
        labels = [BENIGN, BENIGN, ANOM, BENIGN, ANOM, BENIGN]
        rows = [(0, 1, float(t)) for t in range(6)]
        log = make_log(rows, node_count=2, labels=labels)
        train, val, test = organic_split(log)
        assert train.timestamps.tolist() == [0.0, 1.0]
        assert val.timestamps.tolist() == [2.0, 3.0]
        assert test.timestamps.tolist() == [4.0, 5.0]

    def test_anomalies_up_front(self):
        labels = [ANOM, ANOM, BENIGN]
        log = make_log([(0, 1, float(t)) for t in range(3)], node_count=2, labels=labels)
        train, val, test = organic_split(log)
        assert len(train) == 0
        assert val.timestamps.tolist() == [0.0]
        assert test.timestamps.tolist() == [1.0, 2.0]

    def test_all_benign_rejected(self):
        log = make_log([(0, 1, 1.0), (0, 1, 2.0)], node_count=2)
        with pytest.raises(ValueError, match="chronological_split"):
            organic_split(log)

    def test_single_anomaly_rejected(self):
        log = make_log(
            [(0, 1, 1.0), (0, 1, 2.0)], node_count=2, labels=[BENIGN, ANOM]
        )
        with pytest.raises(ValueError):
            organic_split(log)

    def test_tied_benign_events_stay_out_of_train(self):
        # benign event sharing the first anomaly's timestamp is not train
        labels = [BENIGN, BENIGN, ANOM, ANOM]
        rows = [(0, 1, 1.0), (0, 1, 2.0), (0, 1, 2.0), (0, 1, 3.0)]
        log = make_log(rows, node_count=2, labels=labels)
        train, val, test = organic_split(log)
        assert len(train) == 1
        assert val.labels.tolist() == [int(BENIGN), int(ANOM)]
        assert test.labels.tolist() == [int(ANOM)]

    @settings(max_examples=60, deadline=None)
    @given(
        pattern=st.lists(st.booleans(), min_size=2, max_size=40).filter(
            lambda p: sum(p) >= 2
        )
    )
    def test_properties(self, pattern):
        labels = [ANOM if flag else BENIGN for flag in pattern]
        rows = [(0, 1, float(t)) for t in range(len(pattern))]
        log = make_log(rows, node_count=2, labels=labels)
        train, val, test = organic_split(log)
        assert not train.anomaly_mask().any()
        n_val = int(val.anomaly_mask().sum())
        n_test = int(test.anomaly_mask().sum())
        assert n_val - n_test in (0, 1)
        assert n_val + n_test == sum(pattern)
        assert len(train) + len(val) + len(test) == len(log)
