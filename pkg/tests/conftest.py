from __future__ import annotations

import json
from pathlib import Path

import pytest

from jaxport.corpus import load_dataset
from jaxport.llm import LlmClient, ModelRole, RoleConfig, default_mock_provider

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "jaxport" / "data"

_acceptance_results: dict[str, str] = {}


@pytest.fixture(scope="session")
def fixed_bug_path() -> Path:
    return DATA_DIR / "fixed_bug_fixture.json"


@pytest.fixture(scope="session")
def t2j_fix_path() -> Path:
    return DATA_DIR / "t2j_fix_fixture.json"


@pytest.fixture(scope="session")
def costly_fix_path() -> Path:
    return DATA_DIR / "costly_fix_fixture.json"


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return DATA_DIR / "extrinsic_corpus_fixture.json"


@pytest.fixture(scope="session")
def fixed_bug_dataset(fixed_bug_path):
    return load_dataset(fixed_bug_path)


def make_mock_client(**kwargs) -> LlmClient:
    roles = {
        ModelRole.CHEAP: RoleConfig(ModelRole.CHEAP, "mock-cheap"),
        ModelRole.COSTLY: RoleConfig(ModelRole.COSTLY, "mock-costly"),
    }
    return LlmClient(default_mock_provider(), roles, **kwargs)


@pytest.fixture()
def mock_client() -> LlmClient:
    return make_mock_client()


def write_run_config(base_dir: Path) -> Path:
    path = base_dir / "run.toml"
    out_dir = base_dir / "out"
    path.write_text(
        "\n".join(
            [
                "[datasets]",
                f'fixed_bug = "{DATA_DIR / "fixed_bug_fixture.json"}"',
                f'corpus = "{DATA_DIR / "extrinsic_corpus_fixture.json"}"',
                f't2j_fixed_bug = "{DATA_DIR / "t2j_fix_fixture.json"}"',
                "",
                "[models]",
                'cheap = "mock-cheap"',
                'costly = "mock-costly"',
                "",
                "[run]",
                "seed = 7",
                f'output_dir = "{out_dir}"',
            ]
        ),
        encoding="utf-8",
    )
    return path


@pytest.fixture()
def run_config_toml(tmp_path) -> Path:
    return write_run_config(tmp_path)


def write_corpus(path: Path, items: list[dict]) -> Path:
    path.write_text(json.dumps(items, indent=2) + "\n", encoding="utf-8")
    return path


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call":
        _acceptance_results[report.nodeid] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _acceptance_results[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for nodeid in sorted(_acceptance_results):
        status = "PASS" if _acceptance_results[nodeid] == "passed" else "FAIL"
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"[{status}] {name}")
