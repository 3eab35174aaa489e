"""Benchmarking toolkit for link-level anomaly detection in
continuous-time dynamic graphs: synthetic graph generation with
controllable consistencies, typed anomaly injection, training negative
samplers, memorization detectors, and ranking metrics."""

from .edgebank import EdgeBank
from .events import (
    ANOMALOUS_TYPES,
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
from .generator import GeneratorConfig, generate, generate_detailed
from .injection import InjectionConfig, inject, inject_detailed
from .metrics import ScoredSet, auc, average_precision, per_type_report, recall_at_k
from .negatives import Batch, PerturbationKind, sample_negative_mixed, sample_negative_random

__version__ = "0.1.0"

__all__ = [
    "ANOMALOUS_TYPES",
    "AnomalyType",
    "Batch",
    "EdgeBank",
    "EventLog",
    "GeneratorConfig",
    "InjectionConfig",
    "LabeledEdge",
    "NeighborIndex",
    "PerturbationKind",
    "ScoredSet",
    "SplitSpec",
    "TemporalEdge",
    "auc",
    "average_precision",
    "build_log",
    "chronological_split",
    "generate",
    "generate_detailed",
    "inject",
    "inject_detailed",
    "organic_split",
    "per_type_report",
    "recall_at_k",
    "sample_negative_mixed",
    "sample_negative_random",
]
