"""End-to-end pipelines: translation runs, evaluation settings, reports.

Two evaluation settings exist. The intrinsic setting scores candidates for
the fixed-bug dataset's own snippets against their human-corrected
translations, building the augmented context leave-one-out so no item sees
its own recorded fixes. The extrinsic setting scores candidates for an
external corpus against ground truth generated once by the costly model
and cached in the output directory.

All orchestration is a deterministic fold ordered by example id: with a
mock provider and fixed seed, an entire run is bit-reproducible.
"""

from __future__ import annotations

import csv
import json
import shutil
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import tomli

from . import prompts
from .codebleu import DEFAULT_WEIGHTS, codebleu
from .corpus import (
    EvalPair,
    FixedBugEntry,
    count_fix_steps,
    leave_one_out_context,
    load_corpus,
    load_dataset,
    serialize_dataset,
)
from .errors import ConfigError, JaxportError, LlmError, MetricError
from .judging import (
    FixCostScore,
    codetrans_score,
    comparison_verdicts,
    fixcost_score,
)
from .llm import LlmClient, ModelRole, extract_code
from .prompts import PromptKind, render_standard
from .stats import MetricVector, pearson, spearman

JUDGE_VARIANTS = (
    PromptKind.FUNC_NOREF,
    PromptKind.FUNC_REF,
    PromptKind.USE_NOREF,
    PromptKind.USE_REF,
)

SUMMARY_METRICS = (
    "CodeBLEU",
    "CodeTrans_Func_NoRef",
    "CodeTrans_Func_Ref",
    "CodeTrans_Use_NoRef",
    "CodeTrans_Use_Ref",
    "Comparison",
    "FixCost",
)

_VARIANT_TO_METRIC = {
    PromptKind.FUNC_NOREF: "CodeTrans_Func_NoRef",
    PromptKind.FUNC_REF: "CodeTrans_Func_Ref",
    PromptKind.USE_NOREF: "CodeTrans_Use_NoRef",
    PromptKind.USE_REF: "CodeTrans_Use_Ref",
}

METRIC_COLUMNS = (
    "codebleu_baseline",
    "codebleu_t2j",
    "func_noref_baseline",
    "func_noref_t2j",
    "func_ref_baseline",
    "func_ref_t2j",
    "use_noref_baseline",
    "use_noref_t2j",
    "use_ref_baseline",
    "use_ref_t2j",
    "comparison_baseline",
    "comparison_t2j",
    "fixcost_baseline",
    "fixcost_t2j",
)

_COLUMN_TO_SUMMARY = {
    "codebleu": "CodeBLEU",
    "func_noref": "CodeTrans_Func_NoRef",
    "func_ref": "CodeTrans_Func_Ref",
    "use_noref": "CodeTrans_Use_NoRef",
    "use_ref": "CodeTrans_Use_Ref",
    "comparison": "Comparison",
}

GROUND_TRUTH_CACHE = "ground_truth.json"


@dataclass(frozen=True)
class RunConfig:
    """Declarative description of one experiment run."""

    fixed_bug_dataset: Path
    corpus: Optional[Path] = None
    t2j_fix_dataset: Optional[Path] = None
    cheap_model: str = "cheap-default"
    costly_model: str = "costly-default"
    weights: tuple[float, float, float, float] = DEFAULT_WEIGHTS
    keyword_weight: float = 5.0
    max_n: int = 4
    timeout_seconds: float = 180.0
    seed: int = 0
    output_dir: Path = Path("out")
    template_dir: Optional[Path] = None

    def to_dict(self) -> dict:
        return {
            "fixed_bug_dataset": str(self.fixed_bug_dataset),
            "corpus": str(self.corpus) if self.corpus else None,
            "t2j_fix_dataset": str(self.t2j_fix_dataset) if self.t2j_fix_dataset else None,
            "cheap_model": self.cheap_model,
            "costly_model": self.costly_model,
            "weights": list(self.weights),
            "keyword_weight": self.keyword_weight,
            "max_n": self.max_n,
            "timeout_seconds": self.timeout_seconds,
            "seed": self.seed,
            "output_dir": str(self.output_dir),
            "template_dir": str(self.template_dir) if self.template_dir else None,
        }

    @classmethod
    def from_toml(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        try:
            with open(path, "rb") as fh:
                raw = tomli.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"malformed config {path}: {exc}") from exc

        datasets = raw.get("datasets", {})
        models = raw.get("models", {})
        metrics = raw.get("metrics", {})
        run = raw.get("run", {})
        if "fixed_bug" not in datasets:
            raise ConfigError("config requires [datasets] fixed_bug")
        base = path.parent

        def _resolve(value: Optional[str]) -> Optional[Path]:
            if value is None:
                return None
            p = Path(value)
            return p if p.is_absolute() else base / p

        weights = metrics.get("weights", list(DEFAULT_WEIGHTS))
        if len(weights) != 4:
            raise ConfigError("metrics.weights must list four values")
        try:
            return cls(
                fixed_bug_dataset=_resolve(datasets["fixed_bug"]),
                corpus=_resolve(datasets.get("corpus")),
                t2j_fix_dataset=_resolve(datasets.get("t2j_fixed_bug")),
                cheap_model=models.get("cheap", "cheap-default"),
                costly_model=models.get("costly", "costly-default"),
                weights=tuple(float(w) for w in weights),
                keyword_weight=float(metrics.get("keyword_weight", 5.0)),
                max_n=int(metrics.get("max_n", 4)),
                timeout_seconds=float(run.get("timeout_seconds", 180.0)),
                seed=int(run.get("seed", 0)),
                output_dir=_resolve(run.get("output_dir", "out")),
                template_dir=_resolve(run.get("template_dir")),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config value: {exc}") from exc

    def apply_template_dir(self) -> None:
        if self.template_dir is not None:
            prompts.set_template_dir(self.template_dir)


@dataclass(frozen=True)
class TranslationResult:
    pair_id: str
    candidate: Optional[str]
    error: Optional[str] = None


@dataclass(frozen=True)
class PerExampleRow:
    example_id: str
    baseline_candidate: Optional[str]
    t2j_candidate: Optional[str]
    metrics: dict[str, Optional[float]]
    baseline_latency: float = 0.0
    t2j_latency: float = 0.0
    failure: Optional[str] = None
    run_result: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "example_id": self.example_id,
            "baseline_candidate": self.baseline_candidate,
            "t2j_candidate": self.t2j_candidate,
            "metrics": dict(self.metrics),
            "baseline_latency": self.baseline_latency,
            "t2j_latency": self.t2j_latency,
            "failure": self.failure,
            "run_result": self.run_result,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "PerExampleRow":
        return cls(
            example_id=obj["example_id"],
            baseline_candidate=obj["baseline_candidate"],
            t2j_candidate=obj["t2j_candidate"],
            metrics=dict(obj["metrics"]),
            baseline_latency=obj["baseline_latency"],
            t2j_latency=obj["t2j_latency"],
            failure=obj["failure"],
            run_result=obj["run_result"],
        )


@dataclass(frozen=True)
class ExperimentReport:
    setting: str
    seed: int
    config: dict
    rows: tuple[PerExampleRow, ...]
    summary: dict[str, dict[str, Optional[float]]]
    fixcost_detail: dict[str, Optional[dict]] = field(default_factory=dict)
    exclusions: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "setting": self.setting,
            "seed": self.seed,
            "config": dict(self.config),
            "rows": [row.to_dict() for row in self.rows],
            "summary": {k: dict(v) for k, v in self.summary.items()},
            "fixcost_detail": {
                k: dict(v) if v is not None else None
                for k, v in self.fixcost_detail.items()
            },
            "exclusions": list(self.exclusions),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentReport":
        return cls(
            setting=obj["setting"],
            seed=obj["seed"],
            config=dict(obj["config"]),
            rows=tuple(PerExampleRow.from_dict(r) for r in obj["rows"]),
            summary={k: dict(v) for k, v in obj["summary"].items()},
            fixcost_detail={
                k: dict(v) if v is not None else None
                for k, v in obj.get("fixcost_detail", {}).items()
            },
            exclusions=tuple(obj.get("exclusions", ())),
        )


def run_baseline_translation(
    corpus: Sequence[EvalPair], client: LlmClient, role: ModelRole = ModelRole.CHEAP
) -> list[TranslationResult]:
    """Standard-prompt translation of each snippet; failures do not abort."""
    if not corpus:
        raise ValueError("corpus must be non-empty")
    results = []
    for pair in corpus:
        try:
            exchange = client.complete(render_standard(pair.source_code), role)
            results.append(_to_result(pair.pair_id, exchange.response_text))
        except LlmError as exc:
            results.append(TranslationResult(pair.pair_id, None, error=str(exc)))
    return results


def _to_result(pair_id: str, response_text: str) -> TranslationResult:
    candidate = extract_code(response_text)
    if not candidate.strip():
        # An all-prose or empty reply yields no code; that is a failed item,
        # not a scoreable empty candidate.
        return TranslationResult(pair_id, None, error="response contained no code")
    return TranslationResult(pair_id, candidate)


def run_t2j_translation(
    corpus: Sequence[EvalPair],
    fixed_bug_dataset: Sequence[FixedBugEntry],
    client: LlmClient,
    role: ModelRole = ModelRole.CHEAP,
    data_attachment: Optional[str] = None,
) -> list[TranslationResult]:
    """Augmented-prompt translation.

    Items that are themselves dataset entries get a leave-one-out context;
    external items get the full dataset.
    """
    if not corpus:
        raise ValueError("corpus must be non-empty")
    dataset_ids = {entry.example_id for entry in fixed_bug_dataset}
    full_context = serialize_dataset(fixed_bug_dataset)
    results = []
    for pair in corpus:
        if pair.pair_id in dataset_ids:
            context = leave_one_out_context(fixed_bug_dataset, pair.pair_id)
        else:
            context = full_context
        try:
            prompt = prompts.render_augmented(pair.source_code, context, data_attachment)
            exchange = client.complete(prompt, role)
            results.append(_to_result(pair.pair_id, exchange.response_text))
        except LlmError as exc:
            results.append(TranslationResult(pair.pair_id, None, error=str(exc)))
    return results


def _mean(values: list[float]) -> Optional[float]:
    return sum(values) / len(values) if values else None


def _judge_columns(
    pairs_by_route: dict[str, list[EvalPair]],
    client: LlmClient,
    metrics_by_id: dict[str, dict[str, Optional[float]]],
) -> dict[str, dict[str, Optional[float]]]:
    """Run all four judge variants on both routes; return summary cells."""
    summary: dict[str, dict[str, Optional[float]]] = {
        name: {"baseline": None, "t2j": None} for name in _VARIANT_TO_METRIC.values()
    }
    for variant in JUDGE_VARIANTS:
        column_stub = variant.value
        for route, pairs in pairs_by_route.items():
            cell = None
            if pairs:
                try:
                    record = codetrans_score(pairs, variant, client)
                except MetricError:
                    record = None
                if record is not None:
                    cell = record.aggregate
                    scored = dict(record.per_item)
                    for pair in pairs:
                        value = scored.get(pair.pair_id)
                        metrics_by_id[pair.pair_id][f"{column_stub}_{route}"] = value
            summary[_VARIANT_TO_METRIC[variant]][route] = cell
    return summary


def _evaluate_setting(
    setting: str,
    eval_pairs: list[EvalPair],
    dataset: list[FixedBugEntry],
    config: RunConfig,
    client: LlmClient,
    fixcost_baseline: Optional[FixCostScore],
    fixcost_t2j: Optional[FixCostScore],
    exclusions: list[str],
) -> ExperimentReport:
    """Shared core: translate both routes, score, aggregate, assemble."""
    eval_pairs = sorted(eval_pairs, key=lambda p: p.pair_id)
    baseline = {
        r.pair_id: r for r in run_baseline_translation(eval_pairs, client)
    }
    t2j = {
        r.pair_id: r
        for r in run_t2j_translation(eval_pairs, dataset, client)
    }

    metrics_by_id: dict[str, dict[str, Optional[float]]] = {
        p.pair_id: {column: None for column in METRIC_COLUMNS} for p in eval_pairs
    }
    failures: dict[str, Optional[str]] = {p.pair_id: None for p in eval_pairs}

    judge_pairs: dict[str, list[EvalPair]] = {"baseline": [], "t2j": []}
    comparison_items: list[tuple[str, str, str, str]] = []
    for pair in eval_pairs:
        base_result = baseline[pair.pair_id]
        t2j_result = t2j[pair.pair_id]
        notes = []
        for route, result in (("baseline", base_result), ("t2j", t2j_result)):
            if result.candidate is None:
                notes.append(f"{route} translation failed: {result.error}")
                continue
            scored_pair = EvalPair(
                pair_id=pair.pair_id,
                source_code=pair.source_code,
                candidate_code=result.candidate,
                reference_code=pair.reference_code,
            )
            breakdown = codebleu(
                scored_pair,
                weights=config.weights,
                max_n=config.max_n,
                keyword_weight=config.keyword_weight,
            )
            metrics_by_id[pair.pair_id][f"codebleu_{route}"] = breakdown.combined
            judge_pairs[route].append(scored_pair)
        if notes:
            failures[pair.pair_id] = "; ".join(notes)
        if base_result.candidate is not None and t2j_result.candidate is not None:
            comparison_items.append(
                (pair.pair_id, pair.source_code, t2j_result.candidate, base_result.candidate)
            )

    summary: dict[str, dict[str, Optional[float]]] = {
        name: {"baseline": None, "t2j": None} for name in SUMMARY_METRICS
    }
    summary.update(_judge_columns(judge_pairs, client, metrics_by_id))

    if comparison_items:
        verdicts = comparison_verdicts(
            set_one=[item[2] for item in comparison_items],
            set_two=[item[3] for item in comparison_items],
            sources=[item[1] for item in comparison_items],
            client=client,
            seed=config.seed,
            ids=[item[0] for item in comparison_items],
        )
        for verdict in verdicts:
            row_metrics = metrics_by_id[verdict.target]
            row_metrics["comparison_t2j"] = 1.0 if verdict.value == "one" else 0.0
            row_metrics["comparison_baseline"] = 1.0 if verdict.value == "two" else 0.0

    if fixcost_baseline is not None:
        steps = {e.example_id: float(count_fix_steps(e)) for e in dataset}
        for pair_id, row_metrics in metrics_by_id.items():
            if pair_id in steps:
                row_metrics["fixcost_baseline"] = steps[pair_id]

    rows = tuple(
        PerExampleRow(
            example_id=pair.pair_id,
            baseline_candidate=baseline[pair.pair_id].candidate,
            t2j_candidate=t2j[pair.pair_id].candidate,
            metrics=metrics_by_id[pair.pair_id],
            failure=failures[pair.pair_id],
        )
        for pair in eval_pairs
    )

    for column_stub, name in _COLUMN_TO_SUMMARY.items():
        for route in ("baseline", "t2j"):
            values = [
                row.metrics[f"{column_stub}_{route}"]
                for row in rows
                if row.metrics[f"{column_stub}_{route}"] is not None
            ]
            if column_stub != "comparison" and summary[name][route] is not None:
                # Judge aggregates were filled from ScoreRecords already and
                # must equal the row means; recompute CodeBLEU and
                # comparison cells from rows directly.
                continue
            summary[name][route] = _mean(values)

    fixcost_detail: dict[str, Optional[dict]] = {"baseline": None, "t2j": None}
    if fixcost_baseline is not None:
        summary["FixCost"]["baseline"] = float(fixcost_baseline.total)
        fixcost_detail["baseline"] = {
            "total": fixcost_baseline.total,
            "mean": fixcost_baseline.mean,
            "n": fixcost_baseline.n,
        }
    if fixcost_t2j is not None:
        summary["FixCost"]["t2j"] = float(fixcost_t2j.total)
        fixcost_detail["t2j"] = {
            "total": fixcost_t2j.total,
            "mean": fixcost_t2j.mean,
            "n": fixcost_t2j.n,
        }

    return ExperimentReport(
        setting=setting,
        seed=config.seed,
        config=config.to_dict(),
        rows=rows,
        summary=summary,
        fixcost_detail=fixcost_detail,
        exclusions=tuple(exclusions),
    )


def run_intrinsic(config: RunConfig, client: LlmClient) -> ExperimentReport:
    """Cross-validated evaluation over the fixed-bug dataset's own snippets."""
    config.apply_template_dir()
    dataset = load_dataset(config.fixed_bug_dataset)
    if not dataset:
        raise ConfigError("intrinsic evaluation needs a non-empty fixed-bug dataset")
    missing = [e.example_id for e in dataset if not e.llm_fix_output.strip()]
    if missing:
        raise ConfigError(
            "entries lack corrected ground truth: " + ", ".join(missing)
        )
    eval_pairs = [
        EvalPair(
            pair_id=e.example_id,
            source_code=e.input_code,
            candidate_code=e.input_code,
            reference_code=e.llm_fix_output,
        )
        for e in dataset
    ]
    fixcost_t2j = None
    if config.t2j_fix_dataset is not None:
        fixcost_t2j = fixcost_score(load_dataset(config.t2j_fix_dataset))
    return _evaluate_setting(
        setting="intrinsic",
        eval_pairs=eval_pairs,
        dataset=dataset,
        config=config,
        client=client,
        fixcost_baseline=fixcost_score(dataset),
        fixcost_t2j=fixcost_t2j,
        exclusions=[],
    )


def _load_ground_truth_cache(path: Path) -> dict[str, str]:
    if not path.exists():
        return {}
    try:
        cached = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return {}
    return cached if isinstance(cached, dict) else {}


def run_extrinsic(config: RunConfig, client: LlmClient) -> ExperimentReport:
    """Evaluation over an external corpus with generated ground truth.

    Ground truth comes from the costly role via the standard prompt,
    generated before any cheap-role call and cached under the output
    directory so reruns reuse it. Items whose ground truth cannot be
    produced are excluded from every metric.
    """
    config.apply_template_dir()
    if config.corpus is None:
        raise ConfigError("extrinsic evaluation needs [datasets] corpus")
    dataset = load_dataset(config.fixed_bug_dataset)
    corpus = load_corpus(config.corpus)
    if not corpus:
        raise ConfigError("extrinsic corpus is empty")

    config.output_dir.mkdir(parents=True, exist_ok=True)
    cache_path = config.output_dir / GROUND_TRUTH_CACHE
    ground_truth = _load_ground_truth_cache(cache_path)
    exclusions = []
    for item in sorted(corpus, key=lambda p: p.pair_id):
        if item.pair_id in ground_truth:
            continue
        try:
            exchange = client.complete(
                render_standard(item.source_code), ModelRole.COSTLY
            )
            gt = extract_code(exchange.response_text)
            if not gt.strip():
                exclusions.append(f"{item.pair_id}: ground truth contained no code")
            else:
                ground_truth[item.pair_id] = gt
        except LlmError as exc:
            exclusions.append(f"{item.pair_id}: ground truth failed: {exc}")
    cache_path.write_text(
        json.dumps(ground_truth, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    eval_pairs = [
        EvalPair(
            pair_id=item.pair_id,
            source_code=item.source_code,
            candidate_code=item.source_code,
            reference_code=ground_truth[item.pair_id],
        )
        for item in corpus
        if item.pair_id in ground_truth
    ]
    if not eval_pairs:
        raise ConfigError("no extrinsic item obtained ground truth")
    return _evaluate_setting(
        setting="extrinsic",
        eval_pairs=eval_pairs,
        dataset=dataset,
        config=config,
        client=client,
        fixcost_baseline=None,
        fixcost_t2j=None,
        exclusions=exclusions,
    )


@dataclass(frozen=True)
class TimingRow:
    set_name: str
    example_id: str
    wall_seconds: float
    timed_out: bool
    exit_code: int


@dataclass(frozen=True)
class TimingReport:
    rows: tuple[TimingRow, ...]
    totals: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "rows": [
                {
                    "set": r.set_name,
                    "example_id": r.example_id,
                    "wall_seconds": r.wall_seconds,
                    "timed_out": r.timed_out,
                    "exit_code": r.exit_code,
                }
                for r in self.rows
            ],
            "totals": dict(self.totals),
        }


def run_timing(
    snippet_sets: dict[str, list[tuple[str, Path]]],
    timeout_seconds: float,
    runner_cmd: Sequence[str],
) -> TimingReport:
    """Execute every snippet once through the runner; tabulate seconds.

    The runner is the separate execution component; it speaks a one-object
    JSON result on stdout with keys exit_code/stdout/stderr/wall_seconds/
    timed_out. Its absence is a configuration error.
    """
    if not runner_cmd:
        raise ConfigError("runner command is empty")
    if shutil.which(runner_cmd[0]) is None and not Path(runner_cmd[0]).exists():
        raise ConfigError(f"runner not found: {runner_cmd[0]}")
    rows = []
    totals: dict[str, float] = {}
    for set_name in sorted(snippet_sets):
        totals[set_name] = 0.0
        for example_id, path in snippet_sets[set_name]:
            proc = subprocess.run(
                [*runner_cmd, str(path), "--timeout", str(timeout_seconds)],
                capture_output=True,
                text=True,
            )
            if proc.returncode != 0:
                raise JaxportError(
                    f"runner failed on {example_id}: {proc.stderr.strip()}"
                )
            try:
                result = json.loads(proc.stdout)
            except json.JSONDecodeError as exc:
                raise JaxportError(
                    f"runner emitted malformed result for {example_id}: {exc}"
                ) from exc
            row = TimingRow(
                set_name=set_name,
                example_id=example_id,
                wall_seconds=float(result["wall_seconds"]),
                timed_out=bool(result["timed_out"]),
                exit_code=int(result["exit_code"]),
            )
            rows.append(row)
            totals[set_name] += row.wall_seconds
    return TimingReport(rows=tuple(rows), totals=totals)


def correlate_against_fixcost(
    report: ExperimentReport, fixcost: MetricVector
) -> dict[str, dict[str, Optional[float]]]:
    """Pearson/Spearman of each baseline-route metric against fix counts.

    The fix counts describe the effort spent repairing the weak route's
    outputs, so baseline-route per-example values are the comparable
    vectors. Items without a metric value are dropped pairwise; None cells
    mean Undefined and render as NaN.
    """
    row_ids = [row.example_id for row in report.rows]
    if sorted(row_ids) != sorted(fixcost.example_ids):
        raise ValueError("fixcost vector ids do not match report example ids")
    fix_by_id = dict(zip(fixcost.example_ids, fixcost.values))
    table: dict[str, dict[str, Optional[float]]] = {}
    for column_stub, name in _COLUMN_TO_SUMMARY.items():
        column = f"{column_stub}_baseline"
        observed = [
            (row.example_id, row.metrics[column])
            for row in report.rows
            if row.metrics[column] is not None
        ]
        if len(observed) < 2:
            table[name] = {"pearson": None, "spearman": None}
            continue
        ids = tuple(pair_id for pair_id, _ in observed)
        x = MetricVector(name, ids, tuple(v for _, v in observed))
        y = MetricVector("FixCost", ids, tuple(fix_by_id[i] for i in ids))
        table[name] = {"pearson": pearson(x, y), "spearman": spearman(x, y)}
    return table


def _format_cell(value: Optional[float]) -> str:
    if value is None:
        return "N/A"
    if value == int(value):
        return str(int(value))
    return f"{value:.4f}"


def summary_markdown(report: ExperimentReport) -> str:
    lines = [
        f"# {report.setting.capitalize()} evaluation summary",
        "",
        f"Seed: {report.seed}. Examples: {len(report.rows)}. "
        f"Exclusions: {len(report.exclusions)}.",
        "",
        "| Metric | Baseline | T2J |",
        "| --- | --- | --- |",
    ]
    for name in SUMMARY_METRICS:
        cells = report.summary[name]
        lines.append(
            f"| {name} | {_format_cell(cells['baseline'])} | "
            f"{_format_cell(cells['t2j'])} |"
        )
    lines.append("")
    return "\n".join(lines)


def emit_report(report: ExperimentReport, output_dir: str | Path) -> dict[str, Path]:
    """Write report.json, per_example.csv and summary.md deterministically."""
    output_dir = Path(output_dir)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {output_dir}: {exc}") from exc

    json_path = output_dir / "report.json"
    json_path.write_text(
        json.dumps(report.to_dict(), indent=2, ensure_ascii=False, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )

    csv_path = output_dir / "per_example.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["example_id", *METRIC_COLUMNS, "failure"])
        for row in report.rows:
            writer.writerow(
                [
                    row.example_id,
                    *[
                        "" if row.metrics[c] is None else repr(row.metrics[c])
                        for c in METRIC_COLUMNS
                    ],
                    row.failure or "",
                ]
            )

    md_path = output_dir / "summary.md"
    md_path.write_text(summary_markdown(report), encoding="utf-8")
    return {"json": json_path, "csv": csv_path, "markdown": md_path}
