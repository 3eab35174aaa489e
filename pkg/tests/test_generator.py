import math

import numpy as np
import pytest

from ctdg_bench.events import AnomalyType
from ctdg_bench.generator import (
    GeneratorConfig,
    generate,
    generate_detailed,
    generate_static_graph,
    expected_message,
    sample_edge_timeline,
)

from conftest import desk_generator_config


def small_config(**overrides):
    base = dict(
        node_count=100,
        temporal_edge_target=10_000,
        communities=10,
        avg_occurrences=50.0,
        time_span=1e8,
        span_mean=1e6,
        span_std=5e5,
        classes=5,
        message_dim=100,
        message_noise=0.05,
        seed=5,
    )
    base.update(overrides)
    return GeneratorConfig(**base)


class TestConfig:
    @pytest.mark.parametrize(
        "overrides",
        [
            dict(communities=0),
            dict(communities=101),
            dict(classes=0),
            dict(message_dim=-1),
            dict(message_dim=30),  # not divisible by classes^2 = 25
            dict(avg_occurrences=0.0),
            dict(time_span=0.0),
            dict(span_mean=0.0),
            dict(span_std=-1.0),
            dict(timestamp_noise_fraction=-0.1),
            dict(message_noise=-0.5),
            dict(intra_inter_ratio=0.0),
            dict(temporal_edge_target=-1),
        ],
    )
    def test_invalid_rejected(self, overrides):
        with pytest.raises(ValueError):
            small_config(**overrides)

    def test_zero_noise_allowed(self):
        small_config(timestamp_noise_fraction=0.0, message_noise=0.0)

    def test_lognormal_params_match_moments(self):
        cfg = small_config()
        mu, sigma = cfg.lognormal_params()
        mean = math.exp(mu + sigma**2 / 2)
        var = (math.exp(sigma**2) - 1) * math.exp(2 * mu + sigma**2)
        assert mean == pytest.approx(cfg.span_mean, rel=1e-12)
        assert math.sqrt(var) == pytest.approx(cfg.span_std, rel=1e-12)

    def test_json_round_trip(self):
        cfg = small_config(seed=123)
        assert GeneratorConfig.from_json(cfg.to_json()) == cfg

    def test_from_dict_rejects_unknown_fields(self):
        data = small_config().to_dict()
        data["bogus"] = 1
        with pytest.raises(ValueError, match="bogus"):
            GeneratorConfig.from_dict(data)

    def test_static_edge_count(self):
        assert small_config().static_edge_count() == 200
        assert small_config(temporal_edge_target=0).static_edge_count() == 0
        assert small_config(temporal_edge_target=101, avg_occurrences=50.0).static_edge_count() == 3


class TestExpectedMessage:
    def test_block_positions(self):
        assert expected_message(1, 1, 2, 8).tolist() == [1, 1, 0, 0, 0, 0, 0, 0]
        assert expected_message(1, 2, 2, 8).tolist() == [0, 0, 1, 1, 0, 0, 0, 0]
        assert expected_message(2, 2, 2, 8).tolist() == [0, 0, 0, 0, 0, 0, 1, 1]

    def test_orthogonality(self):
        a = expected_message(1, 1, 2, 8)
        b = expected_message(1, 2, 2, 8)
        assert float(a @ b) == 0.0

    def test_all_ordered_pairs_disjoint(self):
        vecs = [expected_message(j, k, 3, 18) for j in (1, 2, 3) for k in (1, 2, 3)]
        stacked = np.array(vecs)
        gram = stacked @ stacked.T
        assert np.array_equal(gram, np.eye(9) * 2)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            expected_message(0, 1, 2, 8)
        with pytest.raises(ValueError):
            expected_message(1, 3, 2, 8)
        with pytest.raises(ValueError):
            expected_message(1, 1, 2, 7)


class TestStaticGraph:
    def test_exact_edge_count_no_dupes(self):
        rng = np.random.default_rng(0)
        static = generate_static_graph(50, 200, 5, 6.0, rng)
        assert len(static.pairs) == 200
        assert (static.pairs[:, 0] < static.pairs[:, 1]).all()
        keys = set(map(tuple, static.pairs.tolist()))
        assert len(keys) == 200

    def test_community_sizes_near_equal(self):
        rng = np.random.default_rng(0)
        static = generate_static_graph(103, 10, 10, 6.0, rng)
        _, counts = np.unique(static.communities, return_counts=True)
        assert counts.max() - counts.min() <= 1
        assert counts.sum() == 103

    def test_huge_ratio_forces_intra(self):
        rng = np.random.default_rng(1)
        static = generate_static_graph(4, 2, 2, 1e12, rng)
        assert static.intra_fraction() == 1.0

    def test_single_community_all_intra(self):
        rng = np.random.default_rng(2)
        static = generate_static_graph(10, 20, 1, 6.0, rng)
        assert static.intra_fraction() == 1.0

    def test_singleton_communities_all_inter(self):
        rng = np.random.default_rng(3)
        static = generate_static_graph(10, 20, 10, 6.0, rng)
        assert static.intra_fraction() == 0.0

    def test_infeasible_target_rejected(self):
        with pytest.raises(ValueError, match="cannot place"):
            generate_static_graph(4, 7, 2, 6.0, np.random.default_rng(0))

    def test_intra_fraction_monte_carlo(self):
        # expected intra share of edge counts is ratio/(ratio+1) = 6/7
        fractions = []
        for seed in range(30):
            rng = np.random.default_rng(seed)
            static = generate_static_graph(100, 300, 10, 6.0, rng)
            fractions.append(static.intra_fraction())
        assert abs(float(np.mean(fractions)) - 6.0 / 7.0) < 0.1


class _PinnedRng:
    """Duck-typed generator returning scripted draws."""

    def __init__(self, poisson, lognormal, uniform=0.0):
        self._poisson = poisson
        self._lognormal = lognormal
        self._uniform = uniform

    def poisson(self, lam):
        return self._poisson

    def lognormal(self, mu, sigma):
        return self._lognormal

    def uniform(self, lo, hi):
        return self._uniform

    def normal(self, loc, scale, size=None):
        return np.zeros(size)

    def standard_normal(self, size=None):
        return np.zeros(size)


class TestEdgeTimeline:
    def test_zero_occurrences_empty(self):
        cfg = small_config()
        events = sample_edge_timeline((0, 1), (1, 1), cfg, _PinnedRng(0, 10.0))
        assert events == []

    def test_single_occurrence_at_window_start(self):
        cfg = small_config(timestamp_noise_fraction=0.0)
        events = sample_edge_timeline((0, 1), (1, 1), cfg, _PinnedRng(1, 10.0, uniform=3.0))
        assert len(events) == 1
        assert events[0].timestamp == 3.0

    def test_even_spacing_noise_free(self):
        cfg = small_config(timestamp_noise_fraction=0.0, message_noise=0.0)
        events = sample_edge_timeline((0, 1), (2, 3), cfg, _PinnedRng(3, 10.0, uniform=0.0))
        assert [e.timestamp for e in events] == [0.0, 5.0, 10.0]
        mean = expected_message(2, 3, cfg.classes, cfg.message_dim)
        for e in events:
            assert np.array_equal(e.message, mean)

    def test_oversized_span_clamped(self):
        cfg = small_config(timestamp_noise_fraction=0.0)
        # lognormal pinned above time_span: all 100 redraws fail, clamp
        events = sample_edge_timeline((0, 1), (1, 1), cfg, _PinnedRng(2, 2e8))
        assert [e.timestamp for e in events] == [0.0, cfg.time_span]

    def test_real_rng_timestamps_in_bounds(self):
        cfg = small_config()
        rng = np.random.default_rng(8)
        for _ in range(20):
            events = sample_edge_timeline((3, 4), (1, 2), cfg, rng)
            for e in events:
                assert 0.0 <= e.timestamp <= cfg.time_span
                assert e.source == 3 and e.destination == 4


class TestGenerate:
    def test_zero_target_empty_log(self):
        log = generate(small_config(temporal_edge_target=0))
        assert len(log) == 0
        assert log.message_dim == 100

    def test_deterministic(self):
        cfg = small_config(seed=77)
        assert generate(cfg) == generate(cfg)

    def test_seed_changes_output(self):
        assert generate(small_config(seed=1)) != generate(small_config(seed=2))

    def test_all_benign_and_sorted(self):
        log = generate(small_config(temporal_edge_target=2000))
        assert not log.anomaly_mask().any()
        assert (np.diff(log.timestamps) >= 0).all()
        assert log.node_count == 100

    def test_mean_occurrences_small_scale(self):
        # 1/100 scale of the reference setup; per-pair occurrence mean ~ 50
        log = generate(small_config(seed=9))
        pair_ids = log.sources * log.node_count + log.destinations
        n_pairs = len(np.unique(pair_ids))
        assert abs(len(log) / n_pairs - 50.0) < 3.0

    def test_total_event_count_concentrates(self):
        target = 10_000
        for seed in (0, 1, 2):
            log = generate(small_config(seed=seed))
            assert abs(len(log) - target) <= 5 * math.sqrt(target)

    def test_detailed_exposes_classes(self):
        result = generate_detailed(small_config(temporal_edge_target=1000))
        classes = result.static_edges.classes
        assert classes is not None
        assert classes.min() >= 1 and classes.max() <= 5
        assert len(classes) == 100

    def test_span_moments_desk_scale(self, desk_log):
        cfg = desk_generator_config()
        pair_ids = desk_log.sources * desk_log.node_count + desk_log.destinations
        order = np.argsort(pair_ids, kind="stable")
        sorted_ids = pair_ids[order]
        boundaries = np.flatnonzero(np.diff(sorted_ids)) + 1
        spans = []
        for chunk in np.split(order, boundaries):
            if len(chunk) >= 2:
                ts = desk_log.timestamps[chunk]
                spans.append(ts.max() - ts.min())
        spans = np.array(spans)
        assert len(spans) >= 1000
        assert 0.008 <= spans.mean() / cfg.time_span <= 0.012
        assert 0.003 <= spans.std() / cfg.time_span <= 0.007
