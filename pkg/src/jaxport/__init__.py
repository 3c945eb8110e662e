"""Prompt-augmented PyTorch-to-JAX translation and evaluation harness.

The package splits into focused layers: corpus (fixed-bug dataset handling),
prompts (golden template rendering), llm (provider access), codebleu and
judging and stats (metrics), experiments (pipelines and reports), cli.
"""

from .corpus import (
    DatasetStats,
    EvalPair,
    FixStep,
    FixedBugEntry,
    dataset_stats,
    load_corpus,
    load_dataset,
    serialize_dataset,
)
from .errors import (
    AuthenticationError,
    ConfigError,
    DatasetError,
    DatasetParseError,
    DatasetValidationError,
    EmptyDatasetError,
    EntryNotFoundError,
    JaxportError,
    LlmError,
    MetricError,
    ProviderError,
    TransportError,
)

__version__ = "0.1.0"

__all__ = [
    "DatasetStats",
    "EvalPair",
    "FixStep",
    "FixedBugEntry",
    "dataset_stats",
    "load_corpus",
    "load_dataset",
    "serialize_dataset",
    "JaxportError",
    "ConfigError",
    "DatasetError",
    "DatasetParseError",
    "DatasetValidationError",
    "EmptyDatasetError",
    "EntryNotFoundError",
    "MetricError",
    "LlmError",
    "TransportError",
    "AuthenticationError",
    "ProviderError",
    "__version__",
]
