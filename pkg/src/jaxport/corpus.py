"""Fixed-bug dataset handling: load, validate, mutate, serialize, summarize.

The on-disk format is a UTF-8 JSON array. Each element carries exactly the
keys ``Example_id``, ``Input_Code``, ``LLM_weak_output``, ``LLM_fix_output``
and ``Errors`` (an array of ``Error_Code`` / ``Error`` / ``Fix_info`` /
``Fixed_Code`` objects), plus optional ``Category`` and ``Subcategory``.
These key names are load-bearing: the serialized file is embedded verbatim
into the augmented translation prompt, whose prose explains the fields by
those names.

Loaded datasets are immutable values (frozen dataclasses, tuple fields) and
safe to share across threads. The only mutating operation,
:func:`append_fix_step`, takes an exclusive file lock and rewrites the file
atomically.
"""

from __future__ import annotations

import json
import os
import statistics
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence

from filelock import FileLock

from .errors import (
    DatasetParseError,
    DatasetValidationError,
    EmptyDatasetError,
    EntryNotFoundError,
)

_STEP_KEYS = ("Error_Code", "Error", "Fix_info", "Fixed_Code")
_ENTRY_REQUIRED_KEYS = (
    "Example_id",
    "Input_Code",
    "LLM_weak_output",
    "LLM_fix_output",
    "Errors",
)
_ENTRY_OPTIONAL_KEYS = ("Category", "Subcategory")


@dataclass(frozen=True)
class FixStep:
    """One recorded bug/solution pair from a human repair session."""

    error_code: str
    error_message: str
    fix_info: str
    fixed_code: str

    def to_json_obj(self) -> dict:
        return {
            "Error_Code": self.error_code,
            "Error": self.error_message,
            "Fix_info": self.fix_info,
            "Fixed_Code": self.fixed_code,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "FixStep":
        return cls(
            error_code=obj["Error_Code"],
            error_message=obj["Error"],
            fix_info=obj["Fix_info"],
            fixed_code=obj["Fixed_Code"],
        )


@dataclass(frozen=True)
class FixedBugEntry:
    """One source snippet with its weak translation, fixed translation and fix history."""

    example_id: str
    input_code: str
    llm_weak_output: str
    llm_fix_output: str
    errors: tuple[FixStep, ...] = ()
    category: Optional[str] = None
    subcategory: Optional[str] = None

    def to_json_obj(self) -> dict:
        obj = {
            "Example_id": self.example_id,
            "Input_Code": self.input_code,
            "LLM_weak_output": self.llm_weak_output,
            "LLM_fix_output": self.llm_fix_output,
            "Errors": [s.to_json_obj() for s in self.errors],
        }
        if self.category is not None:
            obj["Category"] = self.category
        if self.subcategory is not None:
            obj["Subcategory"] = self.subcategory
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "FixedBugEntry":
        return cls(
            example_id=obj["Example_id"],
            input_code=obj["Input_Code"],
            llm_weak_output=obj["LLM_weak_output"],
            llm_fix_output=obj["LLM_fix_output"],
            errors=tuple(FixStep.from_json_obj(s) for s in obj["Errors"]),
            category=obj.get("Category"),
            subcategory=obj.get("Subcategory"),
        )


@dataclass(frozen=True)
class EvalPair:
    """The unit every metric consumes: source, candidate, optional reference.

    Invariants (non-empty source/candidate; reference present for the
    reference-based judge variants) are enforced by the operations that
    need them, so that total operations such as CodeBLEU can still accept
    and zero-score degenerate candidates. Use :func:`validate_pair` to
    check explicitly.
    """

    pair_id: str
    source_code: str
    candidate_code: str
    reference_code: Optional[str] = None


@dataclass(frozen=True)
class DatasetStats:
    """Summary statistics over per-entry fix-step counts."""

    minimum: int
    maximum: int
    mean: float
    median: float
    total: int


def validate_pair(pair: EvalPair) -> list[str]:
    violations = []
    if not pair.source_code.strip():
        violations.append(f"pair {pair.pair_id!r}: source_code is empty")
    if not pair.candidate_code.strip():
        violations.append(f"pair {pair.pair_id!r}: candidate_code is empty")
    return violations


def validate_entry(entry: FixedBugEntry) -> list[str]:
    """Return human-readable invariant violations; empty list means valid.

    Deterministic and side-effect free. Dataset-level invariants (unique
    ids) are checked by :func:`load_dataset`, not here.
    """
    violations = []
    if not entry.example_id:
        violations.append("example_id is empty")
    if not entry.input_code.strip():
        violations.append(f"entry {entry.example_id!r}: input_code is empty")
    if not entry.errors and entry.llm_weak_output != entry.llm_fix_output:
        violations.append(
            f"entry {entry.example_id!r}: has no fix steps but llm_weak_output "
            "differs from llm_fix_output"
        )
    for i, step in enumerate(entry.errors):
        if not step.error_code:
            violations.append(
                f"entry {entry.example_id!r}: step {i}: error_code is empty"
            )
        if not step.fixed_code:
            violations.append(
                f"entry {entry.example_id!r}: step {i}: fixed_code is empty"
            )
    return violations


def _check_keys(obj: dict, index: int) -> None:
    missing = [k for k in _ENTRY_REQUIRED_KEYS if k not in obj]
    if missing:
        raise DatasetValidationError(
            f"entry {index}: missing required field(s) {', '.join(missing)}"
        )
    allowed = set(_ENTRY_REQUIRED_KEYS) | set(_ENTRY_OPTIONAL_KEYS)
    unknown = [k for k in obj if k not in allowed]
    if unknown:
        raise DatasetValidationError(
            f"entry {index} ({obj.get('Example_id', '?')!r}): unknown field(s) "
            f"{', '.join(unknown)}"
        )
    if not isinstance(obj["Errors"], list):
        raise DatasetValidationError(
            f"entry {index} ({obj['Example_id']!r}): Errors must be an array"
        )
    for j, step in enumerate(obj["Errors"]):
        step_missing = [k for k in _STEP_KEYS if k not in step]
        if step_missing:
            raise DatasetValidationError(
                f"entry {index} ({obj['Example_id']!r}), error {j}: missing "
                f"field(s) {', '.join(step_missing)}"
            )


def parse_dataset(text: str) -> list[FixedBugEntry]:
    """Parse a dataset from JSON text, enforcing schema and invariants."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise DatasetParseError(f"malformed dataset JSON: {exc.msg}", offset) from exc
    if not isinstance(raw, list):
        raise DatasetValidationError("dataset must be a JSON array of entries")

    entries = []
    seen: dict[str, int] = {}
    for i, obj in enumerate(raw):
        if not isinstance(obj, dict):
            raise DatasetValidationError(f"entry {i} is not an object")
        _check_keys(obj, i)
        entry = FixedBugEntry.from_json_obj(obj)
        if entry.example_id in seen:
            raise DatasetValidationError(
                f"duplicate example_id {entry.example_id!r} at entries "
                f"{seen[entry.example_id]} and {i}"
            )
        seen[entry.example_id] = i
        violations = validate_entry(entry)
        if violations:
            raise DatasetValidationError("; ".join(violations))
        entries.append(entry)
    return entries


def load_dataset(path: str | Path) -> list[FixedBugEntry]:
    """Load and validate a fixed-bug dataset file, preserving entry order."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetValidationError(f"cannot read dataset {path}: {exc}") from exc
    return parse_dataset(text)


def serialize_dataset(entries: Sequence[FixedBugEntry]) -> str:
    """Canonical serialization: stable field order, stable entry order.

    Same inputs always produce byte-identical output, which is what makes
    leave-one-out prompt contexts reproducible.
    """
    return json.dumps(
        [e.to_json_obj() for e in entries], indent=2, ensure_ascii=False
    ) + "\n"


def save_dataset(entries: Sequence[FixedBugEntry], path: str | Path) -> None:
    """Write the canonical serialization atomically (temp file + rename)."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(serialize_dataset(entries))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def count_fix_steps(entry: FixedBugEntry) -> int:
    return len(entry.errors)


def dataset_stats(dataset: Sequence[FixedBugEntry]) -> DatasetStats:
    """Min/max/mean/median/total of per-entry fix-step counts."""
    if not dataset:
        raise EmptyDatasetError("cannot compute statistics of an empty dataset")
    counts = [count_fix_steps(e) for e in dataset]
    return DatasetStats(
        minimum=min(counts),
        maximum=max(counts),
        mean=sum(counts) / len(counts),
        median=float(statistics.median(counts)),
        total=sum(counts),
    )


def leave_one_out_context(
    dataset: Sequence[FixedBugEntry], target_id: str
) -> str:
    """Serialize every entry except ``target_id``, preserving file order."""
    if all(e.example_id != target_id for e in dataset):
        raise EntryNotFoundError(f"no entry with example_id {target_id!r}")
    return serialize_dataset([e for e in dataset if e.example_id != target_id])


def append_fix_step(
    path: str | Path, example_id: str, step: FixStep
) -> FixedBugEntry:
    """Append one fix step to an entry and rewrite the file atomically.

    Append-only by design: recorded steps are never edited in place. An
    exclusive file lock guards against concurrent fix sessions corrupting
    the corpus.
    """
    if not step.error_code or not step.fixed_code:
        raise DatasetValidationError(
            "fix step requires non-empty error_code and fixed_code"
        )
    path = Path(path)
    with FileLock(str(path) + ".lock"):
        entries = load_dataset(path)
        for i, entry in enumerate(entries):
            if entry.example_id == example_id:
                updated = replace(entry, errors=entry.errors + (step,))
                entries[i] = updated
                save_dataset(entries, path)
                return updated
    raise EntryNotFoundError(f"no entry with example_id {example_id!r}")


def load_corpus(path: str | Path) -> list[EvalPair]:
    """Load a plain parallel corpus: JSON array of {id, code[, reference]}.

    Used for the extrinsic setting, where candidates do not exist yet; the
    candidate slot is filled with the source code and replaced downstream.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetValidationError(f"cannot read corpus {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise DatasetParseError(f"malformed corpus JSON: {exc.msg}", offset) from exc
    if not isinstance(raw, list):
        raise DatasetValidationError("corpus must be a JSON array")
    pairs = []
    seen = set()
    for i, obj in enumerate(raw):
        if not isinstance(obj, dict) or "id" not in obj or "code" not in obj:
            raise DatasetValidationError(
                f"corpus item {i}: expected object with 'id' and 'code'"
            )
        if obj["id"] in seen:
            raise DatasetValidationError(f"duplicate corpus id {obj['id']!r}")
        seen.add(obj["id"])
        pairs.append(
            EvalPair(
                pair_id=obj["id"],
                source_code=obj["code"],
                candidate_code=obj["code"],
                reference_code=obj.get("reference"),
            )
        )
    return pairs
