"""Chat-completions client with bounded retries and stable request hashes.

Works against any OpenAI-compatible endpoint. Every request is summarized
by a content hash over (model, prompts, temperature); the hash keys the run
log and the scripted test fixtures, so a response can always be traced to
the exact request that produced it.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass

import requests

from ..errors import TransportError

API_KEY_ENV = "TOKEQUITY_API_KEY"

# HTTP statuses worth retrying: rate limiting and server-side failures
_RETRYABLE = {429, 500, 502, 503, 504}


class AuthenticationError(TransportError):
    """Credential rejection; retrying or continuing the run cannot help."""


@dataclass(frozen=True)
class ChatRequest:
    """One chat call. Temperature is pinned to 0 for the whole experiment."""

    model: str
    system_prompt: str
    user_content: str
    temperature: float = 0.0


def request_hash(request: ChatRequest) -> str:
    payload = json.dumps(
        {
            "model": request.model,
            "system_prompt": request.system_prompt,
            "user_content": request.user_content,
            "temperature": request.temperature,
        },
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class ChatClient:
    """Issue chat requests with exponential backoff on transient failures."""

    def __init__(
        self,
        base_url: str,
        model: str,
        *,
        api_key: str | None = None,
        session: requests.Session | None = None,
        timeout: float = 60.0,
        max_retries: int = 3,
        backoff: float = 0.5,
    ) -> None:
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.session = session or requests.Session()
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff = backoff

    def request(self, system_prompt: str, user_content: str) -> ChatRequest:
        return ChatRequest(
            model=self.model, system_prompt=system_prompt, user_content=user_content
        )

    def complete(self, request: ChatRequest) -> str:
        """Response text for a request, or TransportError after retries."""
        url = f"{self.base_url}/chat/completions"
        body = {
            "model": request.model,
            "messages": [
                {"role": "system", "content": request.system_prompt},
                {"role": "user", "content": request.user_content},
            ],
            "temperature": request.temperature,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        last_error: str = "no attempt made"
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                response = self.session.post(
                    url, json=body, headers=headers, timeout=self.timeout
                )
            except requests.RequestException as exc:
                last_error = str(exc)
                continue
            if response.status_code in _RETRYABLE:
                last_error = f"HTTP {response.status_code}"
                continue
            if response.status_code in (401, 403):
                raise AuthenticationError(
                    f"chat endpoint rejected the credentials "
                    f"(HTTP {response.status_code}); check {API_KEY_ENV}"
                )
            if response.status_code != 200:
                raise TransportError(
                    f"chat endpoint returned HTTP {response.status_code}: "
                    f"{response.text[:200]}"
                )
            try:
                payload = response.json()
                content = payload["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise TransportError(f"malformed chat response: {exc}")
            if not isinstance(content, str):
                raise TransportError("chat response content is not text")
            return content
        raise TransportError(
            f"chat request failed after {self.max_retries + 1} attempts: {last_error}"
        )
