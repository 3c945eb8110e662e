"""Command-line interface.

Exit codes: 0 success, 1 validation or configuration problem (including
usage errors), 2 runtime failure (transport, provider, metric). Standard
output carries results; standard error carries diagnostics only.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from pathlib import Path
from typing import Optional

from .codebleu import DEFAULT_WEIGHTS, codebleu
from .corpus import (
    EvalPair,
    FixStep,
    append_fix_step,
    dataset_stats,
    load_dataset,
)
from .errors import (
    AuthenticationError,
    ConfigError,
    DatasetError,
    JaxportError,
)
from .experiments import (
    ExperimentReport,
    RunConfig,
    correlate_against_fixcost,
    emit_report,
    run_extrinsic,
    run_intrinsic,
    run_timing,
    summary_markdown,
)
from .judging import codetrans_score, comparison_verdicts
from .llm import (
    GenerationParams,
    HttpProvider,
    LlmClient,
    ModelRole,
    RoleConfig,
    RunLog,
    default_mock_provider,
    extract_code,
)
from .prompts import PromptKind, render_augmented, render_standard
from .stats import MetricVector


class _Parser(argparse.ArgumentParser):
    # Usage problems are validation errors: exit 1, not argparse's 2.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_client(args: argparse.Namespace) -> LlmClient:
    if args.provider == "mock":
        provider = default_mock_provider()
    else:
        provider = HttpProvider()
    roles = {
        ModelRole.CHEAP: RoleConfig(ModelRole.CHEAP, args.cheap_model, GenerationParams()),
        ModelRole.COSTLY: RoleConfig(ModelRole.COSTLY, args.costly_model, GenerationParams()),
    }
    run_log = RunLog(Path(args.run_log)) if getattr(args, "run_log", None) else RunLog()
    return LlmClient(provider, roles, run_log=run_log)


def _emit(args: argparse.Namespace, payload: dict, human: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True))
    else:
        print(human)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _nan(value: Optional[float]) -> str:
    return "NaN" if value is None else f"{value:.6f}"


# -- subcommand handlers --------------------------------------------------


def _cmd_dataset_validate(args: argparse.Namespace) -> int:
    entries = load_dataset(args.path)
    _emit(
        args,
        {"ok": True, "entries": len(entries)},
        f"OK: {len(entries)} valid entries",
    )
    return 0


def _cmd_dataset_stats(args: argparse.Namespace) -> int:
    stats = dataset_stats(load_dataset(args.path))
    payload = {
        "min": stats.minimum,
        "max": stats.maximum,
        "mean": stats.mean,
        "median": stats.median,
        "total": stats.total,
    }
    human = (
        f"min {stats.minimum}  max {stats.maximum}  mean {stats.mean:.2f}  "
        f"median {stats.median:g}  total {stats.total}"
    )
    _emit(args, payload, human)
    return 0


def _ask(value: Optional[str], label: str) -> str:
    if value is not None:
        return value
    if not sys.stdin.isatty():
        raise ConfigError(f"--{label} is required when not running interactively")
    return input(f"{label}: ")


def _cmd_dataset_record_fix(args: argparse.Namespace) -> int:
    step = FixStep(
        error_code=_ask(args.error_code, "error-code"),
        error_message=_ask(args.error, "error"),
        fix_info=_ask(args.fix_info, "fix-info"),
        fixed_code=_ask(args.fixed_code, "fixed-code"),
    )
    entry = append_fix_step(args.path, args.example_id, step)
    _emit(
        args,
        {"example_id": entry.example_id, "steps": len(entry.errors)},
        f"recorded step {len(entry.errors)} for {entry.example_id}",
    )
    return 0


def _cmd_translate(args: argparse.Namespace) -> int:
    code = _read(args.source)
    client = _build_client(args)
    if args.augmented:
        if not args.dataset:
            raise ConfigError("--augmented requires --dataset")
        from .corpus import serialize_dataset

        prompt = render_augmented(code, serialize_dataset(load_dataset(args.dataset)))
    else:
        prompt = render_standard(code)
    exchange = client.complete(prompt, ModelRole(args.role))
    candidate = extract_code(exchange.response_text)
    _emit(
        args,
        {"candidate": candidate, "attempts": exchange.attempts},
        candidate,
    )
    return 0


def _cmd_judge(args: argparse.Namespace) -> int:
    variant = PromptKind(args.variant)
    pair = EvalPair(
        pair_id=args.source,
        source_code=_read(args.source),
        candidate_code=_read(args.candidate),
        reference_code=_read(args.reference) if args.reference else None,
    )
    record = codetrans_score([pair], variant, _build_client(args))
    payload = {
        "variant": variant.value,
        "score": record.aggregate,
        "failures": record.failures,
    }
    _emit(args, payload, f"{variant.value}: {record.aggregate:g}")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    verdicts = comparison_verdicts(
        set_one=[_read(args.one)],
        set_two=[_read(args.two)],
        sources=[_read(args.source)],
        client=_build_client(args),
        seed=args.seed,
        ids=[args.source],
    )
    value = verdicts[0].value
    label = {"one": "first candidate", "two": "second candidate"}.get(
        value, value or "unparseable"
    )
    _emit(args, {"winner": value, "seed": args.seed}, f"winner: {label}")
    return 0


def _cmd_codebleu(args: argparse.Namespace) -> int:
    try:
        weights = tuple(float(w) for w in args.weights.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad --weights: {exc}") from exc
    pair = EvalPair(
        pair_id=args.candidate,
        source_code=_read(args.candidate),
        candidate_code=_read(args.candidate),
        reference_code=_read(args.reference),
    )
    try:
        breakdown = codebleu(pair, weights=weights, keyword_weight=args.keyword_weight)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    payload = breakdown.to_dict()
    human = "\n".join(
        [
            f"ngram          {breakdown.ngram:.6f}",
            f"weighted_ngram {breakdown.weighted_ngram:.6f}",
            f"syntax         {_nan(breakdown.syntax)}",
            f"dataflow       {_nan(breakdown.dataflow)}",
            f"combined       {breakdown.combined:.6f}",
        ]
    )
    _emit(args, payload, human)
    return 0


def _run_setting(args: argparse.Namespace, runner) -> int:
    config = RunConfig.from_toml(args.config)
    report = runner(config, _build_client(args))
    paths = emit_report(report, config.output_dir)
    _emit(
        args,
        {
            "setting": report.setting,
            "examples": len(report.rows),
            "exclusions": len(report.exclusions),
            "outputs": {k: str(v) for k, v in paths.items()},
        },
        summary_markdown(report)
        + "\nwrote: "
        + ", ".join(str(p) for p in paths.values()),
    )
    return 0


def _cmd_intrinsic(args: argparse.Namespace) -> int:
    return _run_setting(args, run_intrinsic)


def _cmd_extrinsic(args: argparse.Namespace) -> int:
    return _run_setting(args, run_extrinsic)


def _cmd_timing(args: argparse.Namespace) -> int:
    sets: dict[str, list[tuple[str, Path]]] = {}
    for spec_arg in args.set:
        if "=" not in spec_arg:
            raise ConfigError(f"--set needs NAME=DIR, got {spec_arg!r}")
        name, directory = spec_arg.split("=", 1)
        files = sorted(Path(directory).glob("*.py"))
        if not files:
            raise ConfigError(f"set {name!r}: no .py files under {directory}")
        sets[name] = [(f.stem, f) for f in files]
    report = run_timing(sets, args.timeout, shlex.split(args.runner_cmd))
    lines = [f"{r.set_name}\t{r.example_id}\t{r.wall_seconds:.3f}s"
             + ("\ttimed_out" if r.timed_out else "") for r in report.rows]
    lines += [f"total {name}\t{total:.3f}s" for name, total in report.totals.items()]
    _emit(args, report.to_dict(), "\n".join(lines))
    return 0


def _cmd_corr(args: argparse.Namespace) -> int:
    report = ExperimentReport.from_dict(
        json.loads(_read(args.report))
    )
    row_ids = {row.example_id for row in report.rows}
    if args.dataset:
        counts = {
            e.example_id: float(len(e.errors))
            for e in load_dataset(args.dataset)
            if e.example_id in row_ids
        }
    else:
        counts = {
            row.example_id: row.metrics.get("fixcost_baseline")
            for row in report.rows
        }
        if any(v is None for v in counts.values()):
            raise ConfigError(
                "report rows carry no fix counts; pass --dataset to supply them"
            )
    ids = tuple(sorted(counts))
    missing = [i for i in (row.example_id for row in report.rows) if i not in counts]
    if missing:
        raise ConfigError("no fix count for: " + ", ".join(missing))
    vector = MetricVector("FixCost", ids, tuple(counts[i] for i in ids))
    table = correlate_against_fixcost(report, vector)
    lines = ["Metric\tPearson\tSpearman"]
    for name, cells in table.items():
        lines.append(f"{name}\t{_nan(cells['pearson'])}\t{_nan(cells['spearman'])}")
    _emit(args, table, "\n".join(lines))
    return 0


# -- parser wiring ---------------------------------------------------------


def _add_provider_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--provider", choices=("http", "mock"), default="http",
        help="LLM backend: http endpoint or the deterministic mock",
    )
    parser.add_argument("--cheap-model", default="cheap-default")
    parser.add_argument("--costly-model", default="costly-default")
    parser.add_argument("--run-log", help="append-only JSONL exchange log path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jaxport", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def _new(name: str, help_text: str, handler) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(handler=handler)
        return p

    dataset = sub.add_parser("dataset", help="fixed-bug dataset operations")
    dsub = dataset.add_subparsers(dest="dataset_command", required=True,
                                  parser_class=_Parser)

    def _new_ds(name: str, help_text: str, handler) -> argparse.ArgumentParser:
        p = dsub.add_parser(name, help=help_text)
        p.add_argument("path", help="dataset JSON file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(handler=handler)
        return p

    _new_ds("validate", "check schema and invariants", _cmd_dataset_validate)
    _new_ds("stats", "fix-step count statistics", _cmd_dataset_stats)
    record = _new_ds("record-fix", "append one fix step", _cmd_dataset_record_fix)
    record.add_argument("--example-id", required=True)
    record.add_argument("--error-code")
    record.add_argument("--error")
    record.add_argument("--fix-info")
    record.add_argument("--fixed-code")

    translate = _new("translate", "translate one snippet", _cmd_translate)
    translate.add_argument("source", help="snippet file")
    translate.add_argument("--augmented", action="store_true")
    translate.add_argument("--dataset", help="fixed-bug dataset for --augmented")
    translate.add_argument("--role", choices=("cheap", "costly"), default="cheap")
    _add_provider_flags(translate)

    judge = _new("judge", "rubric-score one candidate", _cmd_judge)
    judge.add_argument("source")
    judge.add_argument("candidate")
    judge.add_argument("--reference")
    judge.add_argument(
        "--variant", required=True,
        choices=("func_noref", "func_ref", "use_noref", "use_ref"),
    )
    _add_provider_flags(judge)

    compare = _new("compare", "A/B comparison of two candidates", _cmd_compare)
    compare.add_argument("source")
    compare.add_argument("one")
    compare.add_argument("two")
    compare.add_argument("--seed", type=int, default=0)
    _add_provider_flags(compare)

    cb = _new("codebleu", "similarity of candidate vs reference", _cmd_codebleu)
    cb.add_argument("--candidate", required=True)
    cb.add_argument("--reference", required=True)
    cb.add_argument("--weights", default=",".join(str(w) for w in DEFAULT_WEIGHTS))
    cb.add_argument("--keyword-weight", type=float, default=5.0)

    intrinsic = _new("intrinsic", "cross-validated evaluation run", _cmd_intrinsic)
    intrinsic.add_argument("--config", required=True)
    _add_provider_flags(intrinsic)

    extrinsic = _new("extrinsic", "external-corpus evaluation run", _cmd_extrinsic)
    extrinsic.add_argument("--config", required=True)
    _add_provider_flags(extrinsic)

    timing = _new("timing", "execute snippet sets through the runner", _cmd_timing)
    timing.add_argument("--set", action="append", required=True,
                        help="NAME=DIR with .py snippets, repeatable")
    timing.add_argument("--timeout", type=float, default=180.0)
    timing.add_argument("--runner-cmd", required=True,
                        help="command such as 'jaxport-runner'")

    corr = _new("corr", "correlate metrics against fix counts", _cmd_corr)
    corr.add_argument("--report", required=True, help="report.json path")
    corr.add_argument("--dataset", help="fixed-bug dataset for fix counts")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, DatasetError, AuthenticationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except JaxportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
