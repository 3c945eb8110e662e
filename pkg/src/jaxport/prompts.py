"""Prompt rendering over checked-in golden templates.

Templates live as UTF-8 text files under ``jaxport/templates`` and are read
once, at first use, then cached. Rendering substitutes placeholders in a
single pass, so placeholder-looking text inside user-supplied code is never
expanded a second time.
"""

from __future__ import annotations

import enum
import hashlib
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ConfigError

PLACEHOLDERS = (
    "{CODE}",
    "{SOURCE_CODE}",
    "{TRANSLATED_CODE}",
    "{REFERENCE}",
    "{TRANSLATE_CODE_A}",
    "{TRANSLATE_CODE_B}",
)

_PLACEHOLDER_RE = re.compile("|".join(re.escape(p) for p in PLACEHOLDERS))

# Header line that introduces the inlined dataset in the augmented prompt.
# The template prose refers to "a JSON file"; since an API call cannot attach
# files, the serialized dataset rides along in a fenced block under this name.
CONTEXT_HEADER = "Attached JSON file (dataset of common errors):"
DATA_CSV_NOTE = "Attached data.csv file:"


class PromptKind(enum.Enum):
    STANDARD = "standard"
    AUGMENTED = "augmented"
    FUNC_NOREF = "func_noref"
    FUNC_REF = "func_ref"
    USE_NOREF = "use_noref"
    USE_REF = "use_ref"
    COMPARISON = "comparison"


JUDGE_KINDS = (
    PromptKind.FUNC_NOREF,
    PromptKind.FUNC_REF,
    PromptKind.USE_NOREF,
    PromptKind.USE_REF,
)
REF_KINDS = (PromptKind.FUNC_REF, PromptKind.USE_REF)


@dataclass(frozen=True)
class RenderedPrompt:
    kind: PromptKind
    text: str
    inputs_digest: str


_template_cache: dict[PromptKind, str] = {}
_template_dir_override: Path | None = None


def set_template_dir(path: str | Path | None) -> None:
    """Point template loading at a directory instead of the packaged files.

    Intended for run-config startup, before any rendering; clears the cache.
    Pass None to restore the packaged templates.
    """
    global _template_dir_override
    _template_dir_override = Path(path) if path is not None else None
    _template_cache.clear()


def load_template(kind: PromptKind) -> str:
    """Return the golden template text for a prompt kind (cached)."""
    cached = _template_cache.get(kind)
    if cached is None:
        if _template_dir_override is not None:
            cached = (_template_dir_override / f"{kind.value}.txt").read_text(
                encoding="utf-8"
            )
        else:
            ref = resources.files("jaxport") / "templates" / f"{kind.value}.txt"
            cached = ref.read_text(encoding="utf-8")
        _template_cache[kind] = cached
    return cached


def _digest(kind: PromptKind, values: dict[str, str]) -> str:
    """Hash of the substituted values, length-prefixed so fields cannot bleed."""
    h = hashlib.sha256()
    h.update(kind.value.encode("utf-8"))
    for key in sorted(values):
        for part in (key, values[key]):
            raw = part.encode("utf-8")
            h.update(str(len(raw)).encode("ascii"))
            h.update(b":")
            h.update(raw)
    return h.hexdigest()


def substitute(template: str, values: dict[str, str]) -> str:
    """Replace each placeholder with its value in one pass over the template.

    Every placeholder occurring in the template must have a value; values for
    placeholders absent from the template are rejected as caller bugs.
    """
    present = set(_PLACEHOLDER_RE.findall(template))
    given = {"{" + k + "}" for k in values}
    missing = present - given
    if missing:
        raise ConfigError(f"no value for placeholder(s): {', '.join(sorted(missing))}")
    extra = given - present
    if extra:
        raise ConfigError(
            f"value(s) for placeholder(s) not in template: {', '.join(sorted(extra))}"
        )
    return _PLACEHOLDER_RE.sub(lambda m: values[m.group(0)[1:-1]], template)


def render_standard(code: str) -> RenderedPrompt:
    """Standard translation prompt: the template with the snippet in place."""
    if not code.strip():
        raise ValueError("code must be non-empty")
    values = {"CODE": code}
    text = substitute(load_template(PromptKind.STANDARD), values)
    return RenderedPrompt(
        kind=PromptKind.STANDARD,
        text=text,
        inputs_digest=_digest(PromptKind.STANDARD, values),
    )


def render_augmented(
    code: str, context: str, data_attachment: str | None = None
) -> RenderedPrompt:
    """Augmented translation prompt with the fixed-bug dataset inlined.

    ``context`` is the serialized dataset (or a leave-one-out slice of it).
    It is appended after the template body in a fenced block, standing in for
    the file upload the template prose mentions. ``data_attachment``, when
    given, rides along the same way as the data.csv contents.
    """
    if not code.strip():
        raise ValueError("code must be non-empty")
    values = {"CODE": code}
    body = substitute(load_template(PromptKind.AUGMENTED), values)
    parts = [body, "", CONTEXT_HEADER, "```json", context.rstrip("\n"), "```"]
    if data_attachment is not None:
        parts += ["", DATA_CSV_NOTE, "```csv", data_attachment.rstrip("\n"), "```"]
    digest_inputs = {"CODE": code, "CONTEXT": context}
    if data_attachment is not None:
        digest_inputs["DATA"] = data_attachment
    return RenderedPrompt(
        kind=PromptKind.AUGMENTED,
        text="\n".join(parts),
        inputs_digest=_digest(PromptKind.AUGMENTED, digest_inputs),
    )


def render_judge(kind: PromptKind, source_code: str, translated_code: str,
                 reference_code: str | None = None) -> RenderedPrompt:
    """Rubric-scoring prompt for one candidate (Func/Use, NoRef/Ref)."""
    if kind not in JUDGE_KINDS:
        raise ValueError(f"{kind} is not a judge prompt kind")
    if not source_code.strip() or not translated_code.strip():
        raise ValueError("source_code and translated_code must be non-empty")
    values = {"SOURCE_CODE": source_code, "TRANSLATED_CODE": translated_code}
    if kind in REF_KINDS:
        if reference_code is None:
            raise ValueError(f"{kind.value} requires a reference snippet")
        values["REFERENCE"] = reference_code
    elif reference_code is not None:
        raise ValueError(f"{kind.value} does not take a reference snippet")
    text = substitute(load_template(kind), values)
    return RenderedPrompt(kind=kind, text=text, inputs_digest=_digest(kind, values))


def render_comparison(source: str, candidate_a: str, candidate_b: str) -> RenderedPrompt:
    """A/B comparison prompt; slot order is the caller's responsibility."""
    if not source.strip() or not candidate_a.strip() or not candidate_b.strip():
        raise ValueError("source and both candidates must be non-empty")
    values = {
        "CODE": source,
        "TRANSLATE_CODE_A": candidate_a,
        "TRANSLATE_CODE_B": candidate_b,
    }
    text = substitute(load_template(PromptKind.COMPARISON), values)
    return RenderedPrompt(
        kind=PromptKind.COMPARISON,
        text=text,
        inputs_digest=_digest(PromptKind.COMPARISON, values),
    )
