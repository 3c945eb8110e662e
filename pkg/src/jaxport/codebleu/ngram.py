"""Plain and keyword-weighted n-gram precision with brevity penalty.

Scoring rules, shared by both variants:

- Modified precision per order n: clipped match count over candidate count.
- Orders where the candidate has no n-grams are skipped, not scored zero.
- Add-one smoothing applies only for n >= 2 when the clipped count is zero;
  a zero unigram precision zeroes the whole score.
- Brevity penalty: 1 if the candidate is at least as long as the reference,
  else exp(1 - r/c) over unweighted token counts.
- Empty candidate scores 0.

The weighted variant scores each n-gram by the sum of its per-token weights
(keyword_weight for keyword-class tokens, 1 otherwise) and smooths by adding
one unit-weight n-gram, i.e. n, to both sides. With keyword_weight=1 every
n-gram weighs exactly n, so the variant reduces to the plain score.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

from .tokens import DEFAULT_EXTRA_KEYWORDS, Token, keyword_set


def _texts(tokens: Sequence[Token]) -> list[str]:
    return [t.text for t in tokens]


def _ngrams(texts: list[str], n: int) -> Counter:
    return Counter(tuple(texts[i : i + n]) for i in range(len(texts) - n + 1))


def _brevity_penalty(c: int, r: int) -> float:
    if c == 0:
        return 0.0
    if c >= r:
        return 1.0
    return math.exp(1.0 - r / c)


def ngram_match(
    candidate: Sequence[Token], reference: Sequence[Token], max_n: int = 4
) -> float:
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    cand = _texts(candidate)
    ref = _texts(reference)
    if not cand:
        return 0.0
    log_precisions = []
    for n in range(1, max_n + 1):
        cand_counts = _ngrams(cand, n)
        if not cand_counts:
            continue
        ref_counts = _ngrams(ref, n)
        total = sum(cand_counts.values())
        clipped = sum(
            min(count, ref_counts[gram]) for gram, count in cand_counts.items()
        )
        if clipped == 0:
            if n == 1:
                return 0.0
            precision = 1.0 / (total + 1)
        else:
            precision = clipped / total
        log_precisions.append(math.log(precision))
    if not log_precisions:
        return 0.0
    geo_mean = math.exp(sum(log_precisions) / len(log_precisions))
    return _brevity_penalty(len(cand), len(ref)) * geo_mean


def weighted_ngram_match(
    candidate: Sequence[Token],
    reference: Sequence[Token],
    max_n: int = 4,
    keyword_weight: float = 5.0,
    keywords: frozenset[str] | None = None,
) -> float:
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    if keyword_weight < 1:
        raise ValueError("keyword_weight must be at least 1")
    if keywords is None:
        keywords = keyword_set(DEFAULT_EXTRA_KEYWORDS)

    def gram_weight(gram: tuple[str, ...]) -> float:
        return sum(keyword_weight if text in keywords else 1.0 for text in gram)

    cand = _texts(candidate)
    ref = _texts(reference)
    if not cand:
        return 0.0
    log_precisions = []
    for n in range(1, max_n + 1):
        cand_counts = _ngrams(cand, n)
        if not cand_counts:
            continue
        ref_counts = _ngrams(ref, n)
        numerator = 0.0
        denominator = 0.0
        for gram, count in cand_counts.items():
            w = gram_weight(gram)
            denominator += count * w
            numerator += min(count, ref_counts[gram]) * w
        if numerator == 0.0:
            if n == 1:
                return 0.0
            precision = n / (denominator + n)
        else:
            precision = numerator / denominator
        log_precisions.append(math.log(precision))
    if not log_precisions:
        return 0.0
    geo_mean = math.exp(sum(log_precisions) / len(log_precisions))
    return _brevity_penalty(len(cand), len(ref)) * geo_mean
