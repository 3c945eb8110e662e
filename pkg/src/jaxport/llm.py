"""Chat-completion access with named model roles, retries and logging.

Two roles exist: ``cheap`` drafts translations, ``costly`` judges and
refines. Each maps to a provider model id plus generation parameters.
Providers implement a one-method protocol, so tests swap in deterministic
mocks and production points at any chat-completion-compatible endpoint.

Every exchange is appended to a JSONL run log before the caller sees the
response, so a crashed run can always be audited up to its last reply.
"""

from __future__ import annotations

import enum
import hashlib
import json
import os
import re
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Protocol

import requests

from .errors import AuthenticationError, ProviderError, TransportError
from .prompts import PromptKind, RenderedPrompt

API_BASE_ENV = "JAXPORT_API_BASE"
API_KEY_ENV = "JAXPORT_API_KEY"


class ModelRole(enum.Enum):
    CHEAP = "cheap"
    COSTLY = "costly"


@dataclass(frozen=True)
class GenerationParams:
    # Temperature 0 keeps reruns as stable as the provider allows.
    temperature: float = 0.0
    max_tokens: int = 4096


@dataclass(frozen=True)
class RoleConfig:
    role: ModelRole
    model_id: str
    params: GenerationParams = GenerationParams()


@dataclass(frozen=True)
class LlmExchange:
    prompt_digest: str
    role: ModelRole
    response_text: str
    latency_seconds: float
    attempts: int


class Provider(Protocol):
    # False for deterministic mocks: latency is reported as 0.0 so that
    # mock-driven reports are byte-reproducible across runs.
    records_latency: bool

    def send(self, model_id: str, prompt_text: str, params: GenerationParams) -> str:
        ...


class HttpProvider:
    """Chat-completion wire format over HTTP (POST {base}/chat/completions)."""

    records_latency = True

    def __init__(
        self,
        base_url: Optional[str] = None,
        api_key: Optional[str] = None,
        timeout_seconds: float = 120.0,
    ):
        base_url = base_url or os.environ.get(API_BASE_ENV)
        if not base_url:
            raise AuthenticationError(
                f"no endpoint configured: set {API_BASE_ENV} or pass base_url"
            )
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        self.timeout_seconds = timeout_seconds
        self._session = requests.Session()

    def send(self, model_id: str, prompt_text: str, params: GenerationParams) -> str:
        payload = {
            "model": model_id,
            "messages": [{"role": "user", "content": prompt_text}],
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = self._session.post(
                f"{self.base_url}/chat/completions",
                json=payload,
                headers=headers,
                timeout=self.timeout_seconds,
            )
        except requests.RequestException as exc:
            raise TransportError(f"request failed: {exc}") from exc
        if resp.status_code in (401, 403):
            raise AuthenticationError(f"endpoint rejected credentials ({resp.status_code})")
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransportError(f"transient provider status {resp.status_code}")
        if resp.status_code != 200:
            raise ProviderError(f"provider status {resp.status_code}: {resp.text[:200]}")
        try:
            body = resp.json()
            return body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed provider response: {exc}") from exc


class MockProvider:
    """Deterministic provider for tests: a response function, no network."""

    records_latency = False

    def __init__(self, respond: Callable[[str, str], str]):
        self._respond = respond

    def send(self, model_id: str, prompt_text: str, params: GenerationParams) -> str:
        return self._respond(model_id, prompt_text)


def default_mock_provider() -> MockProvider:
    """Mock that exercises the whole pipeline with plausible behavior.

    Translation prompts get the source snippet with torch spellings swapped
    for jax ones (the augmented variant also gains a marker comment, so the
    two routes produce distinct candidates). Rubric prompts get a stable
    pseudo-random score in 0..4 derived from the prompt text. Comparison
    prompts prefer the candidate carrying the augmented marker.
    """

    def respond(model_id: str, prompt_text: str) -> str:
        if prompt_text.startswith("You are an expert in programming language translation"):
            code = prompt_text.rsplit("Input Source Code Snippet:\n", 1)[1]
            if "two inputs" in prompt_text.split("\n", 2)[1]:
                code = code.split("\n\nAttached JSON file", 1)[0]
                translated = _mock_translate(code)
                return (
                    "Here is the refined translation:\n```python\n"
                    "# refined with known fixes\n" + translated + "\n```"
                )
            return "Here is the translation:\n```python\n" + _mock_translate(code) + "\n```"
        if "scores ONLY" in prompt_text:
            digest = hashlib.sha256(prompt_text.encode("utf-8")).digest()
            return str(digest[0] % 5)
        if prompt_text.startswith("You are an expert in PyTorch to JAX translation"):
            body_a = prompt_text.split("2. Translated Code A:\n\n", 1)[1]
            code_a = body_a.split("\n\n3. Translated Code B:", 1)[0]
            winner = "A" if "# refined with known fixes" in code_a else "B"
            return f"Candidate {winner} is better because it applies known fixes."
        return "OK"

    return MockProvider(respond)


def _mock_translate(code: str) -> str:
    out = code.replace("torch.", "jnp.").replace("import torch", "import jax.numpy as jnp")
    return out.replace("torch", "jax")


@dataclass
class RunLog:
    """Append-only JSONL record of every exchange; writes are serialized."""

    path: Optional[Path] = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def append(self, exchange: LlmExchange, model_id: str) -> None:
        if self.path is None:
            return
        record = {
            "prompt_digest": exchange.prompt_digest,
            "role": exchange.role.value,
            "model_id": model_id,
            "response_text": exchange.response_text,
            "latency_seconds": exchange.latency_seconds,
            "attempts": exchange.attempts,
        }
        line = json.dumps(record, ensure_ascii=False)
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")


class LlmClient:
    """Role-routing client with bounded concurrency and retry on transport errors."""

    def __init__(
        self,
        provider: Provider,
        roles: dict[ModelRole, RoleConfig],
        run_log: Optional[RunLog] = None,
        max_attempts: int = 3,
        backoff_base_seconds: float = 1.0,
        max_concurrency: int = 4,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")
        self.provider = provider
        self.roles = dict(roles)
        self.run_log = run_log or RunLog()
        self.max_attempts = max_attempts
        self.backoff_base_seconds = backoff_base_seconds
        self._sleep = sleep
        self._semaphores = {
            role: threading.Semaphore(max_concurrency) for role in ModelRole
        }

    def complete(self, prompt: RenderedPrompt, role: ModelRole) -> LlmExchange:
        config = self.roles.get(role)
        if config is None:
            raise AuthenticationError(f"role {role.value!r} has no configured model")
        attempts = 0
        start = time.monotonic()
        with self._semaphores[role]:
            while True:
                attempts += 1
                try:
                    text = self.provider.send(
                        config.model_id, prompt.text, config.params
                    )
                    break
                except TransportError:
                    if attempts >= self.max_attempts:
                        raise
                    self._sleep(self.backoff_base_seconds * 2 ** (attempts - 1))
        if not text.strip():
            raise ProviderError("provider returned an empty response")
        latency = time.monotonic() - start if self.provider.records_latency else 0.0
        exchange = LlmExchange(
            prompt_digest=prompt.inputs_digest,
            role=role,
            response_text=text,
            latency_seconds=latency,
            attempts=attempts,
        )
        # Log before returning: downstream never consumes an unlogged reply.
        self.run_log.append(exchange, config.model_id)
        return exchange


_FENCE_OPEN_RE = re.compile(r"^\s*```")


def extract_code(response: str) -> str:
    """Pull the code out of a model reply, dropping prose around it.

    Takes the longest complete fenced block (first wins ties); with no
    complete fence, the whole reply trimmed. Total and idempotent: extracted
    code contains no fence lines, so a second pass falls through unchanged.
    """
    blocks = []
    current: Optional[list[str]] = None
    for line in response.split("\n"):
        if _FENCE_OPEN_RE.match(line):
            if current is None:
                current = []
            else:
                # Strip here so extraction is idempotent: a second pass sees
                # no fences and falls through to the same stripped text.
                blocks.append("\n".join(current).strip())
                current = None
        elif current is not None:
            current.append(line)
    if not blocks:
        return response.strip()
    return max(blocks, key=len)
