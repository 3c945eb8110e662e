from __future__ import annotations

import json
import threading
import time

import pytest
import requests
from hypothesis import given, settings
from hypothesis import strategies as st

from jaxport.errors import AuthenticationError, ProviderError, TransportError
from jaxport.llm import (
    API_BASE_ENV,
    API_KEY_ENV,
    GenerationParams,
    HttpProvider,
    LlmClient,
    MockProvider,
    ModelRole,
    RoleConfig,
    RunLog,
    default_mock_provider,
    extract_code,
)
from jaxport.prompts import render_standard

ROLES = {
    ModelRole.CHEAP: RoleConfig(ModelRole.CHEAP, "cheap-x"),
    ModelRole.COSTLY: RoleConfig(ModelRole.COSTLY, "costly-x"),
}

PROMPT = render_standard("x = 1")


class CountingProvider:
    records_latency = False

    def __init__(self, fail_times: int = 0, exc=TransportError, reply: str = "OK"):
        self.calls = 0
        self.fail_times = fail_times
        self.exc = exc
        self.reply = reply

    def send(self, model_id, prompt_text, params):
        self.calls += 1
        if self.calls <= self.fail_times:
            raise self.exc("synthetic failure")
        return self.reply


class TestClientRetry:
    def test_first_try_success(self):
        provider = CountingProvider()
        client = LlmClient(provider, ROLES)
        exchange = client.complete(PROMPT, ModelRole.CHEAP)
        assert exchange.response_text == "OK"
        assert exchange.attempts == 1
        assert provider.calls == 1

    def test_transport_errors_retried_with_backoff(self):
        provider = CountingProvider(fail_times=2)
        sleeps = []
        client = LlmClient(provider, ROLES, sleep=sleeps.append)
        exchange = client.complete(PROMPT, ModelRole.CHEAP)
        assert exchange.attempts == 3
        assert provider.calls == 3
        assert sleeps == [1.0, 2.0]

    def test_attempt_limit_enforced(self):
        provider = CountingProvider(fail_times=99)
        client = LlmClient(provider, ROLES, sleep=lambda _: None)
        with pytest.raises(TransportError):
            client.complete(PROMPT, ModelRole.CHEAP)
        assert provider.calls == 3

    def test_auth_errors_are_not_retried(self):
        provider = CountingProvider(fail_times=99, exc=AuthenticationError)
        client = LlmClient(provider, ROLES, sleep=lambda _: None)
        with pytest.raises(AuthenticationError):
            client.complete(PROMPT, ModelRole.CHEAP)
        assert provider.calls == 1

    def test_provider_errors_are_not_retried(self):
        provider = CountingProvider(fail_times=99, exc=ProviderError)
        client = LlmClient(provider, ROLES, sleep=lambda _: None)
        with pytest.raises(ProviderError):
            client.complete(PROMPT, ModelRole.CHEAP)
        assert provider.calls == 1

    def test_empty_response_is_provider_error(self):
        client = LlmClient(CountingProvider(reply="  \n"), ROLES)
        with pytest.raises(ProviderError, match="empty"):
            client.complete(PROMPT, ModelRole.CHEAP)

    def test_unconfigured_role(self):
        client = LlmClient(
            CountingProvider(), {ModelRole.CHEAP: ROLES[ModelRole.CHEAP]}
        )
        with pytest.raises(AuthenticationError, match="costly"):
            client.complete(PROMPT, ModelRole.COSTLY)

    def test_zero_attempts_rejected(self):
        with pytest.raises(ValueError):
            LlmClient(CountingProvider(), ROLES, max_attempts=0)


class TestClientConcurrency:
    def test_in_flight_requests_bounded(self):
        lock = threading.Lock()
        state = {"active": 0, "peak": 0}

        class GateProvider:
            records_latency = False

            def send(self, model_id, prompt_text, params):
                with lock:
                    state["active"] += 1
                    state["peak"] = max(state["peak"], state["active"])
                time.sleep(0.02)
                with lock:
                    state["active"] -= 1
                return "OK"

        client = LlmClient(GateProvider(), ROLES, max_concurrency=2)
        threads = [
            threading.Thread(
                target=lambda: client.complete(PROMPT, ModelRole.CHEAP)
            )
            for _ in range(8)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert 1 <= state["peak"] <= 2


class TestRunLog:
    def test_exchanges_logged_in_order(self, tmp_path):
        log_path = tmp_path / "run.jsonl"
        client = LlmClient(CountingProvider(), ROLES, run_log=RunLog(log_path))
        client.complete(PROMPT, ModelRole.CHEAP)
        client.complete(PROMPT, ModelRole.COSTLY)
        records = [
            json.loads(line)
            for line in log_path.read_text(encoding="utf-8").splitlines()
        ]
        assert [r["role"] for r in records] == ["cheap", "costly"]
        assert records[0]["model_id"] == "cheap-x"
        assert records[0]["prompt_digest"] == PROMPT.inputs_digest
        assert records[0]["response_text"] == "OK"
        assert records[0]["attempts"] == 1

    def test_no_path_means_no_file(self, tmp_path):
        client = LlmClient(CountingProvider(), ROLES, run_log=RunLog())
        client.complete(PROMPT, ModelRole.CHEAP)
        assert list(tmp_path.iterdir()) == []

    def test_failed_exchanges_are_not_logged(self, tmp_path):
        log_path = tmp_path / "run.jsonl"
        client = LlmClient(
            CountingProvider(fail_times=99),
            ROLES,
            run_log=RunLog(log_path),
            sleep=lambda _: None,
        )
        with pytest.raises(TransportError):
            client.complete(PROMPT, ModelRole.CHEAP)
        assert not log_path.exists()


class TestMockProvider:
    def test_latency_not_recorded(self, mock_client):
        exchange = mock_client.complete(PROMPT, ModelRole.CHEAP)
        assert exchange.latency_seconds == 0.0

    def test_translation_swaps_torch_for_jax(self, mock_client):
        prompt = render_standard("import torch\nx = torch.ones(3)")
        reply = mock_client.complete(prompt, ModelRole.CHEAP).response_text
        code = extract_code(reply)
        assert code == "import jax.numpy as jnp\nx = jnp.ones(3)"

    def test_judge_reply_is_deterministic_digit(self, mock_client):
        from jaxport.prompts import PromptKind, render_judge

        prompt = render_judge(PromptKind.FUNC_NOREF, "a = 1", "b = 2")
        first = mock_client.complete(prompt, ModelRole.COSTLY).response_text
        second = mock_client.complete(prompt, ModelRole.COSTLY).response_text
        assert first == second
        assert first in {"0", "1", "2", "3", "4"}

    def test_comparison_prefers_refined_marker(self, mock_client):
        from jaxport.prompts import render_comparison

        refined = "# refined with known fixes\nx = 1"
        plain = "x = 1"
        in_a = render_comparison("s = 0", refined, plain)
        in_b = render_comparison("s = 0", plain, refined)
        assert "Candidate A" in mock_client.complete(in_a, ModelRole.COSTLY).response_text
        assert "Candidate B" in mock_client.complete(in_b, ModelRole.COSTLY).response_text


class FakeResponse:
    def __init__(self, status_code: int, body=None, text: str = ""):
        self.status_code = status_code
        self._body = body
        self.text = text

    def json(self):
        if self._body is None:
            raise ValueError("no body")
        return self._body


class FakeSession:
    def __init__(self, response):
        self.response = response
        self.requests = []

    def post(self, url, json=None, headers=None, timeout=None):
        self.requests.append({"url": url, "json": json, "headers": headers})
        if isinstance(self.response, Exception):
            raise self.response
        return self.response


def http_provider(response) -> tuple[HttpProvider, FakeSession]:
    provider = HttpProvider(base_url="http://unit.test/v1", api_key="secret")
    session = FakeSession(response)
    provider._session = session
    return provider, session


GOOD_BODY = {"choices": [{"message": {"content": "hello"}}]}


class TestHttpProvider:
    def test_requires_endpoint(self, monkeypatch):
        monkeypatch.delenv(API_BASE_ENV, raising=False)
        monkeypatch.delenv(API_KEY_ENV, raising=False)
        with pytest.raises(AuthenticationError, match=API_BASE_ENV):
            HttpProvider()

    def test_payload_shape(self):
        provider, session = http_provider(FakeResponse(200, GOOD_BODY))
        out = provider.send("model-z", "prompt text", GenerationParams())
        assert out == "hello"
        sent = session.requests[0]
        assert sent["url"] == "http://unit.test/v1/chat/completions"
        assert sent["json"]["model"] == "model-z"
        assert sent["json"]["messages"] == [{"role": "user", "content": "prompt text"}]
        assert sent["json"]["temperature"] == 0.0
        assert sent["headers"]["Authorization"] == "Bearer secret"

    @pytest.mark.parametrize("status", [401, 403])
    def test_auth_statuses(self, status):
        provider, _ = http_provider(FakeResponse(status))
        with pytest.raises(AuthenticationError):
            provider.send("m", "p", GenerationParams())

    @pytest.mark.parametrize("status", [429, 500, 503])
    def test_transient_statuses(self, status):
        provider, _ = http_provider(FakeResponse(status))
        with pytest.raises(TransportError):
            provider.send("m", "p", GenerationParams())

    def test_other_status_is_provider_error(self):
        provider, _ = http_provider(FakeResponse(404, text="gone"))
        with pytest.raises(ProviderError, match="404"):
            provider.send("m", "p", GenerationParams())

    def test_malformed_body_is_provider_error(self):
        provider, _ = http_provider(FakeResponse(200, {"choices": []}))
        with pytest.raises(ProviderError, match="malformed"):
            provider.send("m", "p", GenerationParams())

    def test_connection_failure_is_transport_error(self):
        provider, _ = http_provider(requests.ConnectionError("refused"))
        with pytest.raises(TransportError):
            provider.send("m", "p", GenerationParams())


class TestExtractCode:
    def test_single_fenced_block(self):
        reply = "Sure!\n```python\na = 1\n```\nDone."
        assert extract_code(reply) == "a = 1"

    def test_longest_block_wins(self):
        reply = "```\na = 1\n```\ntext\n```python\nb = 2\nc = 3\n```"
        assert extract_code(reply) == "b = 2\nc = 3"

    def test_tie_takes_first_block(self):
        reply = "```\nfirst\n```\n```\nsecon\n```"
        assert extract_code(reply) == "first"

    def test_no_fence_returns_trimmed_reply(self):
        assert extract_code("  a = 1\n") == "a = 1"

    def test_unterminated_fence_falls_back(self):
        reply = "intro\n```python\na = 1"
        assert extract_code(reply) == reply.strip()

    def test_indented_fence_recognized(self):
        reply = "  ```python\n  a = 1\n  ```"
        assert extract_code(reply) == "a = 1"

    def test_block_content_is_stripped(self):
        reply = "```\n\n  a = 1  \n\n```"
        assert extract_code(reply) == "a = 1"

    def test_empty_reply(self):
        assert extract_code("") == ""

    @settings(max_examples=120, deadline=None)
    @given(
        st.lists(
            st.sampled_from(
                ["```", "```python", "x = 1", "", "prose here", "  y = f(x)", "  ```"]
            ),
            max_size=12,
        ).map("\n".join)
    )
    def test_idempotent(self, reply):
        once = extract_code(reply)
        assert extract_code(once) == once

    def test_mock_provider_flags(self):
        provider = default_mock_provider()
        assert provider.records_latency is False
        assert isinstance(provider, MockProvider)
