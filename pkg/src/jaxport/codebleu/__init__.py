"""CodeBLEU: lexical, weighted-lexical, syntactic and dataflow similarity.

The combined score is a weighted sum of four components. Components that
cannot be computed for a given pair (unparseable snippet, reference with no
dataflow facts) are marked absent and the remaining weights renormalized,
so lexical signal survives on snippets that do not compile.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..corpus import EvalPair
from ..errors import MetricError
from .dataflow import dataflow_facts, dataflow_match
from .ngram import ngram_match, weighted_ngram_match
from .syntax import parse_tree, syntax_match
from .tokens import DEFAULT_EXTRA_KEYWORDS, Token, keyword_set, tokenize

__all__ = [
    "CodeBleuBreakdown",
    "codebleu",
    "tokenize",
    "keyword_set",
    "ngram_match",
    "weighted_ngram_match",
    "syntax_match",
    "dataflow_match",
    "dataflow_facts",
    "parse_tree",
    "Token",
    "DEFAULT_EXTRA_KEYWORDS",
    "DEFAULT_WEIGHTS",
]

DEFAULT_WEIGHTS = (0.25, 0.25, 0.25, 0.25)


@dataclass(frozen=True)
class CodeBleuBreakdown:
    """Per-component scores; None marks a component absent for this pair."""

    ngram: float
    weighted_ngram: float
    syntax: Optional[float]
    dataflow: Optional[float]
    combined: float
    weights: tuple[float, float, float, float]

    def to_dict(self) -> dict:
        return {
            "ngram": self.ngram,
            "weighted_ngram": self.weighted_ngram,
            "syntax": self.syntax,
            "dataflow": self.dataflow,
            "combined": self.combined,
            "weights": list(self.weights),
        }


def _validate_weights(weights: Sequence[float]) -> tuple[float, float, float, float]:
    if len(weights) != 4:
        raise ValueError("weights must have exactly four entries")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ValueError("weights must sum to 1")
    return tuple(weights)  # type: ignore[return-value]


def codebleu(
    pair: EvalPair,
    weights: Sequence[float] = DEFAULT_WEIGHTS,
    max_n: int = 4,
    keyword_weight: float = 5.0,
    extra_keywords: frozenset[str] = DEFAULT_EXTRA_KEYWORDS,
) -> CodeBleuBreakdown:
    """Score pair.candidate_code against pair.reference_code."""
    weights = _validate_weights(weights)
    if pair.reference_code is None:
        raise MetricError(f"pair {pair.pair_id!r} has no reference to score against")
    candidate, reference = pair.candidate_code, pair.reference_code

    if not candidate.strip():
        return CodeBleuBreakdown(
            ngram=0.0, weighted_ngram=0.0, syntax=0.0, dataflow=0.0,
            combined=0.0, weights=weights,
        )

    kwset = keyword_set(extra_keywords)
    cand_tokens = tokenize(candidate, kwset)
    ref_tokens = tokenize(reference, kwset)
    ngram = ngram_match(cand_tokens, ref_tokens, max_n=max_n)
    weighted = weighted_ngram_match(
        cand_tokens, ref_tokens, max_n=max_n,
        keyword_weight=keyword_weight, keywords=kwset,
    )

    cand_tree = parse_tree(candidate)
    ref_tree = parse_tree(reference)
    syntax: Optional[float] = None
    dataflow: Optional[float] = None
    if cand_tree is not None and ref_tree is not None:
        syntax = syntax_match(cand_tree, ref_tree)
        ref_facts = dataflow_facts(ref_tree)
        if ref_facts:
            dataflow = dataflow_match(dataflow_facts(cand_tree), ref_facts)

    parts = [(weights[0], ngram), (weights[1], weighted)]
    if syntax is not None:
        parts.append((weights[2], syntax))
    if dataflow is not None:
        parts.append((weights[3], dataflow))
    present_weight = sum(w for w, _ in parts)
    if present_weight == 0:
        combined = 0.0
    else:
        combined = sum(w * s for w, s in parts) / present_weight
    return CodeBleuBreakdown(
        ngram=ngram, weighted_ngram=weighted, syntax=syntax,
        dataflow=dataflow, combined=combined, weights=weights,
    )
