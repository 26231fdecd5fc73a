"""LLM client with pluggable transports.

A transport is any callable (prompt_id, prompt) -> raw response text. The
client adds retries with exponential backoff, response-hash logging, and JSON
schema checks; record/replay transports make pipeline runs hermetic.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import time
from pathlib import Path
from typing import Callable

import requests

from ..errors import LlmOutputUnparsable, LlmUnavailable

logger = logging.getLogger("conch.llm")

ENV_URL = "CONCH_LLM_URL"
ENV_KEY = "CONCH_LLM_KEY"
ENV_MODEL = "CONCH_LLM_MODEL"

Transport = Callable[[str, str], str]


def _slug(prompt_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", prompt_id)


class HttpTransport:
    """POSTs a chat-style completion request and returns the response text."""

    def __init__(self, endpoint: str, model: str, api_key: str = "",
                 timeout: float = 60.0):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.timeout = timeout

    def __call__(self, prompt_id: str, prompt: str) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": self.model,
            "temperature": 0,
            "messages": [{"role": "user", "content": prompt}],
        }
        response = requests.post(self.endpoint, json=body, headers=headers,
                                 timeout=self.timeout)
        response.raise_for_status()
        data = response.json()
        if isinstance(data, dict):
            choices = data.get("choices")
            if choices:
                return choices[0]["message"]["content"]
            for key in ("content", "text", "response"):
                if isinstance(data.get(key), str):
                    return data[key]
        raise LlmOutputUnparsable(f"unrecognized completion payload for {prompt_id}")


class MockTransport:
    """Scripted transport for tests: prompt id -> canned response."""

    def __init__(self, responses: dict[str, object] | Callable[[str, str], object]):
        self.responses = responses
        self.calls: list[str] = []

    def __call__(self, prompt_id: str, prompt: str) -> str:
        self.calls.append(prompt_id)
        if callable(self.responses):
            value = self.responses(prompt_id, prompt)
        else:
            if prompt_id not in self.responses:
                raise LlmUnavailable(f"no scripted response for {prompt_id!r}")
            value = self.responses[prompt_id]
        return value if isinstance(value, str) else json.dumps(value, sort_keys=True)


class RecordingTransport:
    """Wraps a transport and stores every raw response in a directory."""

    def __init__(self, inner: Transport, directory: str | Path):
        self.inner = inner
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def __call__(self, prompt_id: str, prompt: str) -> str:
        response = self.inner(prompt_id, prompt)
        path = self.directory / f"{_slug(prompt_id)}.json"
        path.write_text(json.dumps({"promptId": prompt_id, "response": response},
                                   ensure_ascii=False, indent=2),
                        encoding="utf-8")
        return response


class ReplayTransport:
    """Serves responses previously captured by RecordingTransport."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def __call__(self, prompt_id: str, prompt: str) -> str:
        path = self.directory / f"{_slug(prompt_id)}.json"
        if not path.exists():
            raise LlmUnavailable(f"no recorded response for {prompt_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))["response"]


class LlmClient:
    def __init__(self, transport: Transport, model: str = "",
                 temperature: float = 0.0, max_retries: int = 3,
                 backoff_base: float = 0.5,
                 sleep: Callable[[float], None] = time.sleep):
        self.transport = transport
        self.model = model
        self.temperature = temperature
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self.sleep = sleep

    def complete(self, prompt_id: str, prompt: str) -> str:
        last: Exception | None = None
        for attempt in range(self.max_retries + 1):
            try:
                response = self.transport(prompt_id, prompt)
            except (LlmUnavailable, LlmOutputUnparsable):
                raise
            except Exception as exc:  # transport-level failure: retry
                last = exc
                if attempt < self.max_retries:
                    self.sleep(self.backoff_base * (2.0 ** attempt))
                continue
            digest = hashlib.sha256(response.encode("utf-8")).hexdigest()[:12]
            logger.info("llm prompt=%s response_sha=%s", prompt_id, digest)
            return response
        raise LlmUnavailable(
            f"transport failed after {self.max_retries + 1} attempts: {last}")

    def complete_json(self, prompt_id: str, prompt: str):
        raw = self.complete(prompt_id, prompt)
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise LlmOutputUnparsable(
                f"{prompt_id}: response is not JSON: {exc}") from exc


def client_from_env() -> LlmClient | None:
    """Build a client from CONCH_LLM_URL/KEY/MODEL; None when unset."""
    url = os.environ.get(ENV_URL, "")
    if not url:
        return None
    model = os.environ.get(ENV_MODEL, "default")
    key = os.environ.get(ENV_KEY, "")
    return LlmClient(HttpTransport(url, model, key), model=model)
