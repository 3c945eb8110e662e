"""Judge-based metrics: rubric scores, pairwise comparison, fixing cost.

Rubric scoring sends one scoring prompt per candidate and parses a 0..4
integer out of the reply. Comparison shows the judge two candidates under
anonymized A/B slots, with slot order decided by a seeded coin flip per
item so position bias cannot silently favor one set. Fixing cost needs no
judge at all: it counts recorded human fix steps.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .corpus import EvalPair, FixedBugEntry, count_fix_steps
from .errors import EmptyDatasetError, MetricError
from .llm import LlmClient, ModelRole
from .prompts import JUDGE_KINDS, REF_KINDS, PromptKind, render_comparison, render_judge

TIE = "tie"

_INT_RE = re.compile(r"(?<![\w.\-])(\d+)(?!\.?\d)(?!\w)")
_TIE_RE = re.compile(r"\b(?:tie|tied|equal|equally|equivalent|neither)\b", re.IGNORECASE)
_CANDIDATE_RE = re.compile(r"\bCandidate\s+([AB])\b")
_BARE_CHOICE_RE = re.compile(r"\b([AB])\b")


@dataclass(frozen=True)
class JudgeVerdict:
    target: str
    variant: PromptKind
    value: Union[int, str, None]
    raw_response: str
    order_seed: Optional[int] = None


@dataclass(frozen=True)
class ScoreRecord:
    """Aggregate of one metric over a pair set.

    n counts successfully parsed items; the aggregate is their mean.
    Failed items are excluded from the mean and surfaced in failures.
    """

    metric_id: str
    variant: Optional[PromptKind]
    aggregate: float
    per_item: tuple[tuple[str, float], ...]
    n: int
    failures: int


@dataclass(frozen=True)
class FixCostScore:
    total: int
    n: int

    @property
    def mean_exact(self) -> Fraction:
        return Fraction(self.total, self.n)

    @property
    def mean(self) -> float:
        return self.total / self.n


def parse_rubric_score(response: str) -> Optional[int]:
    """First standalone integer in 0..4, or None when there is none."""
    for m in _INT_RE.finditer(response):
        value = int(m.group(1))
        if value <= 4:
            return value
    return None


def parse_comparison_verdict(response: str) -> Optional[str]:
    """Read the judge's choice off the final non-empty line.

    Returns "A" or "B", the tie marker for explicit tie language, or None
    when the line names no candidate. Only the final line is consulted:
    earlier lines hold reasoning that routinely mentions both candidates.
    """
    lines = [line for line in response.splitlines() if line.strip()]
    if not lines:
        return None
    final = lines[-1]
    if _TIE_RE.search(final):
        return TIE
    m = _CANDIDATE_RE.search(final)
    if m:
        return m.group(1)
    m = _BARE_CHOICE_RE.search(final)
    if m:
        return m.group(1)
    return None


def codetrans_score(
    pairs: Sequence[EvalPair],
    variant: PromptKind,
    client: LlmClient,
    judge_role: ModelRole = ModelRole.COSTLY,
) -> ScoreRecord:
    """Mean rubric score over pairs for one judge variant.

    Each unparseable reply earns one automatic re-query before the item is
    counted as a failure. The aggregate is invariant under pair reordering.
    """
    if variant not in JUDGE_KINDS:
        raise ValueError(f"{variant} is not a judge variant")
    if not pairs:
        raise ValueError("pairs must be non-empty")
    if variant in REF_KINDS:
        missing = [p.pair_id for p in pairs if p.reference_code is None]
        if missing:
            raise ValueError(
                f"variant {variant.value} requires references; missing for: "
                + ", ".join(missing)
            )
    per_item = []
    failures = 0
    for pair in pairs:
        prompt = render_judge(
            variant,
            pair.source_code,
            pair.candidate_code,
            pair.reference_code if variant in REF_KINDS else None,
        )
        score = parse_rubric_score(client.complete(prompt, judge_role).response_text)
        if score is None:
            score = parse_rubric_score(client.complete(prompt, judge_role).response_text)
        if score is None:
            failures += 1
        else:
            per_item.append((pair.pair_id, float(score)))
    if not per_item:
        raise MetricError(f"judge produced no parseable {variant.value} scores")
    aggregate = sum(v for _, v in per_item) / len(per_item)
    return ScoreRecord(
        metric_id="codetrans",
        variant=variant,
        aggregate=aggregate,
        per_item=tuple(per_item),
        n=len(per_item),
        failures=failures,
    )


def slot_flip(seed: int, index: int) -> bool:
    """Seeded per-item coin flip deciding whether set-one takes slot B."""
    return random.Random(f"{seed}:{index}").random() < 0.5


def comparison_verdicts(
    set_one: Sequence[str],
    set_two: Sequence[str],
    sources: Sequence[str],
    client: LlmClient,
    judge_role: ModelRole = ModelRole.COSTLY,
    seed: int = 0,
    ids: Optional[Sequence[str]] = None,
) -> list[JudgeVerdict]:
    """One A/B judgment per item; verdict values are already de-anonymized.

    The recorded value is "one"/"two" (which set won), the tie marker, or
    None. The flip that assigned slots is recoverable from (seed, index).
    """
    if not (len(set_one) == len(set_two) == len(sources)):
        raise ValueError("set_one, set_two and sources must have equal lengths")
    if not sources:
        raise ValueError("comparison needs at least one item")
    if ids is None:
        ids = [str(i) for i in range(len(sources))]
    verdicts = []
    for i, (j1, j2, source) in enumerate(zip(set_one, set_two, sources)):
        flipped = slot_flip(seed, i)
        slot_a, slot_b = (j2, j1) if flipped else (j1, j2)
        prompt = render_comparison(source, slot_a, slot_b)
        response = client.complete(prompt, judge_role).response_text
        raw = parse_comparison_verdict(response)
        if raw == "A":
            value: Union[str, None] = "two" if flipped else "one"
        elif raw == "B":
            value = "one" if flipped else "two"
        else:
            value = raw
        verdicts.append(
            JudgeVerdict(
                target=ids[i],
                variant=PromptKind.COMPARISON,
                value=value,
                raw_response=response,
                order_seed=seed,
            )
        )
    return verdicts


def comparison_score(
    set_one: Sequence[str],
    set_two: Sequence[str],
    sources: Sequence[str],
    client: LlmClient,
    judge_role: ModelRole = ModelRole.COSTLY,
    seed: int = 0,
    ids: Optional[Sequence[str]] = None,
) -> float:
    """Fraction of items where set_one's candidate won.

    Ties and unparseable verdicts contribute 0: the conservative reading
    that favors set_two, so a reported advantage is never an artifact of
    judge noise.
    """
    verdicts = comparison_verdicts(
        set_one, set_two, sources, client, judge_role, seed, ids
    )
    wins = sum(1 for v in verdicts if v.value == "one")
    return wins / len(verdicts)


def fixcost_score(dataset: Sequence[FixedBugEntry]) -> FixCostScore:
    """Total and mean count of recorded fix steps over the dataset."""
    if not dataset:
        raise EmptyDatasetError("fixing cost is undefined on an empty dataset")
    total = sum(count_fix_steps(entry) for entry in dataset)
    return FixCostScore(total=total, n=len(dataset))
