"""Model-client contract: an HTTP JSON endpoint and an offline replay directory."""

from __future__ import annotations

import json
import os
import socket
import threading
import urllib.error
import urllib.request
from pathlib import Path
from typing import Protocol

from .prompts import PromptBundle


class ClientError(Exception):
    """Base class for everything a model client can raise."""

    kind = "client_error"


class NotFoundError(ClientError):
    kind = "not_found"


class TransportError(ClientError):
    kind = "transport_error"


class EndpointError(ClientError):
    kind = "endpoint_error"


class ClientTimeout(ClientError):
    kind = "timeout"


class ModelClient(Protocol):
    def generate(self, prompt: PromptBundle, temperature: float = 0.0, max_new_tokens: int | None = None) -> str: ...


class ReplayClient:
    """Serves stored outputs keyed by example id.

    ``<root>/<id>.md`` holds a single output. ``<root>/<id>/`` holds several,
    returned one per call in file-name order; asking past the end raises
    NotFoundError. Safe for concurrent use.
    """

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        if not self.root.is_dir():
            raise NotFoundError(f"replay directory not found: {self.root}")
        self.calls: dict[str, int] = {}
        self._lock = threading.Lock()

    def _outputs(self, example_id: str) -> list[Path]:
        single = self.root / f"{example_id}.md"
        if single.is_file():
            return [single]
        folder = self.root / example_id
        if folder.is_dir():
            return sorted(folder.glob("*.md"))
        return []

    def generate(self, prompt: PromptBundle, temperature: float = 0.0, max_new_tokens: int | None = None) -> str:
        if not prompt.example_id:
            raise NotFoundError("replay client needs an example id")
        outputs = self._outputs(prompt.example_id)
        with self._lock:
            index = self.calls.get(prompt.example_id, 0)
            self.calls[prompt.example_id] = index + 1
        if not outputs:
            raise NotFoundError(f"no stored output for {prompt.example_id!r}")
        if len(outputs) > 1 and index >= len(outputs):
            raise NotFoundError(f"stored outputs for {prompt.example_id!r} exhausted after {len(outputs)}")
        return outputs[min(index, len(outputs) - 1)].read_text(encoding="utf-8")


class HttpClient:
    """POSTs ``{system, user, temperature, max_new_tokens}`` and expects ``{text}``."""

    def __init__(self, endpoint: str | None = None, api_key: str | None = None, timeout: float = 60.0):
        self.endpoint = endpoint or os.environ.get("MODEL_ENDPOINT")
        if not self.endpoint:
            raise TransportError("no endpoint given and MODEL_ENDPOINT is unset")
        self.api_key = api_key if api_key is not None else os.environ.get("MODEL_API_KEY")
        self.timeout = timeout

    def generate(self, prompt: PromptBundle, temperature: float = 0.0, max_new_tokens: int | None = None) -> str:
        body = json.dumps(
            {"system": prompt.system, "user": prompt.user, "temperature": temperature, "max_new_tokens": max_new_tokens}
        ).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        request = urllib.request.Request(self.endpoint, data=body, headers=headers, method="POST")
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                raw = response.read()
        except urllib.error.HTTPError as exc:
            raise EndpointError(f"HTTP {exc.code} from {self.endpoint}") from exc
        except (socket.timeout, TimeoutError) as exc:
            raise ClientTimeout(f"no response within {self.timeout}s") from exc
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, (socket.timeout, TimeoutError)):
                raise ClientTimeout(f"no response within {self.timeout}s") from exc
            raise TransportError(str(exc.reason)) from exc
        except OSError as exc:
            raise TransportError(str(exc)) from exc
        return _decode(raw)


def _decode(raw: bytes) -> str:
    if not raw.strip():
        raise EndpointError("empty response body")
    try:
        payload = json.loads(raw)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise EndpointError("response is not JSON") from exc
    if not isinstance(payload, dict):
        raise EndpointError("response is not a JSON object")
    if payload.get("error"):
        raise EndpointError(f"endpoint error: {payload['error']}")
    text = payload.get("text")
    if not isinstance(text, str):
        raise EndpointError("response has no text field")
    return text


class ReplayJudge:
    """Judge client reading ``<root>/<id>.judge`` files."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def score(self, example_id: str, output: str) -> str:
        path = self.root / f"{example_id}.judge"
        if not path.is_file():
            raise NotFoundError(f"no stored judge response for {example_id!r}")
        return path.read_text(encoding="utf-8")
