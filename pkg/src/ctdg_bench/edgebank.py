"""Memorization-based link anomaly detectors.

An EdgeBank memorizes node pairs it has seen; a queried edge gets anomaly
score ``1 - p`` where ``p`` is 1 iff the pair is remembered. The infinite
variant never forgets, the time-window variant only counts pairs seen
within a trailing window. Evaluation is streaming with batch size one:
every event is scored first and memorized afterwards, so repeated pairs in
the evaluation split stop looking anomalous after their first occurrence.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .events import AnomalyType, EventLog, TemporalEdge

__all__ = ["EdgeBank", "MODES"]

MODES = ("infinite", "time_window")

# time-window extent as a share of the fitted span when none is given
_DEFAULT_WINDOW_FRACTION = 0.15


class EdgeBank:
    """Non-parametric detector over a last-seen-timestamp pair memory.

    Pairs are directed by default (source/destination roles matter);
    ``directed=False`` folds both orientations onto one key. In
    ``time_window`` mode a pair counts as present at query time ``t`` iff
    it was last seen at or after ``t - window_duration``; when no duration
    is given, the first non-empty ``fit`` pins it to 15% of that log's
    time span.
    """

    def __init__(
        self,
        mode: str = "infinite",
        window_duration: Optional[float] = None,
        directed: bool = True,
    ) -> None:
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        if window_duration is not None and window_duration <= 0:
            raise ValueError("window_duration must be positive")
        self.mode = mode
        self.window_duration = window_duration
        self.directed = directed
        self._seen: dict[tuple[int, int], float] = {}

    def _key(self, source: int, destination: int) -> tuple[int, int]:
        if self.directed or source <= destination:
            return (source, destination)
        return (destination, source)

    def fit(self, log: EventLog) -> "EdgeBank":
        """Memorize every pair of ``log`` with its most recent timestamp.

        May be called repeatedly to accumulate history (e.g. train then
        validation) before streaming an evaluation split.
        """
        if (
            self.mode == "time_window"
            and self.window_duration is None
            and len(log)
        ):
            lo, hi = log.time_range()
            span = hi - lo
            if span <= 0:
                raise ValueError(
                    "cannot derive a default window from a zero-span log; "
                    "pass window_duration explicitly"
                )
            self.window_duration = _DEFAULT_WINDOW_FRACTION * span
        seen = self._seen
        for i in range(len(log)):
            key = self._key(int(log.sources[i]), int(log.destinations[i]))
            t = float(log.timestamps[i])
            prev = seen.get(key)
            if prev is None or t > prev:
                seen[key] = t
        return self

    def _present(self, seen: dict, key: tuple[int, int], t: float) -> bool:
        last = seen.get(key)
        if last is None:
            return False
        if self.mode == "infinite":
            return True
        if self.window_duration is None:
            raise ValueError("time_window detector queried before fitting a window")
        return last >= t - self.window_duration

    def score_pair(self, source: int, destination: int, timestamp: float) -> float:
        """Anomaly score 1 - p for one query; does not mutate the memory."""
        key = self._key(int(source), int(destination))
        return 0.0 if self._present(self._seen, key, float(timestamp)) else 1.0

    def score(self, edge: TemporalEdge) -> float:
        return self.score_pair(edge.source, edge.destination, edge.timestamp)

    def evaluate_stream(
        self, split: EventLog, memorize_anomalous: bool = True
    ) -> tuple[np.ndarray, np.ndarray]:
        """Score a split chronologically with score-then-insert semantics.

        Streams over a copy of the fitted memory, so the call is repeatable.
        By default every scored event (anomalous or not) enters the memory,
        mirroring evaluation-time ignorance of labels;
        ``memorize_anomalous=False`` inserts benign events only.

        Returns (scores, labels), aligned with the split's events.
        """
        seen = dict(self._seen)
        n = len(split)
        scores = np.empty(n, dtype=np.float64)
        benign = int(AnomalyType.BENIGN)
        for i in range(n):
            key = self._key(int(split.sources[i]), int(split.destinations[i]))
            t = float(split.timestamps[i])
            scores[i] = 0.0 if self._present(seen, key, t) else 1.0
            if memorize_anomalous or int(split.labels[i]) == benign:
                prev = seen.get(key)
                if prev is None or t > prev:
                    seen[key] = t
        return scores, split.labels.copy()
