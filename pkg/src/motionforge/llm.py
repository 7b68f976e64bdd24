"""Prompt assembly, chat-completion HTTP client, and fenced-code extraction.

The prompt template bundles the encapsulated function docs, the asset catalog,
and the virtual-world layout, then splices the user's request into the
``{PROMPT}`` placeholder of the instruction. Two pipeline modes exist: ``dsl``
(the model emits a ``.scene`` document, gated by the scene parser) and
``script`` (the model emits a library-only Blender script, gated by the lint).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

import requests

from .assets import AssetCatalog, default_catalog
from .codegen import FunctionManifest, ScriptText, default_manifest
from .dsl import CameraSpec, WorldConfig

PLACEHOLDER = "{PROMPT}"


class LLMError(RuntimeError):
    pass


class AuthError(LLMError):
    pass


class TransportError(LLMError):
    pass


class MalformedResponseError(LLMError):
    pass


class PromptError(ValueError):
    pass


class ExtractionError(ValueError):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    function_docs: str
    asset_catalog: str
    world_info: str
    instruction: str  # must contain {PROMPT} exactly once


_DSL_INSTRUCTION = """\
Write a scene description for the request below using the block syntax shown:
blocks `scene`, `camera`, `object <name>`, `floor`, `wind`, `gravity`, with
`key value;` properties. Pick sizes, masses and positions that physically fit
the request, reference assets as `source asset:<key>`, and reply with exactly
one fenced code block containing only the scene document.

Request: {PROMPT}
"""

_SCRIPT_INSTRUCTION = """\
Write a Python script for the request below. Call only the library functions
listed above (import them from `blenderlib`); do not use the engine API
directly, spawn processes, or touch files outside the asset root. Reply with
exactly one fenced code block containing only the script.

Request: {PROMPT}
"""


def default_template(manifest: FunctionManifest | None = None,
                     catalog: AssetCatalog | None = None,
                     world: WorldConfig | None = None,
                     camera: CameraSpec | None = None,
                     mode: str = "dsl") -> PromptTemplate:
    manifest = manifest if manifest is not None else default_manifest()
    catalog = catalog if catalog is not None else default_catalog()
    world = world if world is not None else WorldConfig()
    if mode not in ("dsl", "script"):
        raise PromptError(f"unknown pipeline mode {mode!r}")

    assets = "\n".join(f"- {e.key}: {e.description}" for e in catalog.entries)
    wx, wy, wz = world.dimensions
    world_lines = [
        f"The virtual world spans {wx} x {wy} x {wz} meters; +Z is up and the "
        "floor sits at Z = 0."
    ]
    if camera is not None:
        world_lines.append(
            f"The camera sits at {camera.position} and looks at {camera.look_at}.")
    else:
        world_lines.append(
            "Place one camera so the whole motion stays in view.")
    return PromptTemplate(
        function_docs=manifest.render_docs(),
        asset_catalog=assets,
        world_info="\n".join(world_lines),
        instruction=_DSL_INSTRUCTION if mode == "dsl" else _SCRIPT_INSTRUCTION,
    )


def build_prompt(user_prompt: str, template: PromptTemplate) -> str:
    """Render the full prompt with the user's request in the placeholder."""
    if not user_prompt or not user_prompt.strip():
        raise PromptError("user prompt is empty")
    count = template.instruction.count(PLACEHOLDER)
    if count != 1:
        raise PromptError(
            f"instruction must contain {PLACEHOLDER} exactly once, found {count}")
    return "\n".join([
        "# Scene library functions",
        template.function_docs,
        "# External assets",
        template.asset_catalog,
        "",
        "# World",
        template.world_info,
        "",
        "# Instruction",
        template.instruction.replace(PLACEHOLDER, user_prompt),
    ])


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str  # full URL of the chat-completions endpoint
    model: str = "gpt-4"
    temperature: float = 0.0
    timeout_s: float = 120.0
    max_attempts: int = 3
    backoff_s: float = 1.0
    key_env: str = "MOTIONFORGE_LLM_KEY"


@dataclass(frozen=True)
class CompletionResult:
    text: str
    attempts: int


def _redacted(headers: dict) -> dict:
    return {k: ("<redacted>" if k.lower() == "authorization" else v)
            for k, v in headers.items()}


def request_completion(prompt: str, config: EndpointConfig,
                       session=None, log_dir: str | Path | None = None) -> CompletionResult:
    """POST the prompt to the configured endpoint, retrying transient failures.

    The credential is read from the environment (never from config files).
    Request and response bodies are logged to ``log_dir`` with the credential
    redacted.
    """
    import os

    key = os.environ.get(config.key_env, "")
    if not key:
        raise AuthError(f"credential missing: set {config.key_env}")
    session = session if session is not None else requests.Session()
    headers = {"Authorization": f"Bearer {key}", "Content-Type": "application/json"}
    body = {
        "model": config.model,
        "temperature": config.temperature,
        "messages": [{"role": "user", "content": prompt}],
    }

    if log_dir is not None:
        log_dir = Path(log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        (log_dir / "llm_request.json").write_text(json.dumps({
            "url": config.base_url, "headers": _redacted(headers), "body": body,
        }, indent=2), encoding="utf-8")

    attempts = 0
    last_error: Exception | None = None
    while attempts < config.max_attempts:
        attempts += 1
        try:
            resp = session.post(config.base_url, json=body, headers=headers,
                                timeout=config.timeout_s)
        except (requests.ConnectionError, requests.Timeout) as e:
            last_error = e
            if attempts < config.max_attempts:
                time.sleep(config.backoff_s * attempts)
            continue
        if resp.status_code in (401, 403):
            raise AuthError(f"authentication failed (HTTP {resp.status_code})")
        if 500 <= resp.status_code < 600:
            last_error = TransportError(f"HTTP {resp.status_code}")
            if attempts < config.max_attempts:
                time.sleep(config.backoff_s * attempts)
            continue
        if resp.status_code != 200:
            raise LLMError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            payload = resp.json()
            text = payload["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise MalformedResponseError(f"unexpected response shape: {e}") from e
        if not isinstance(text, str):
            raise MalformedResponseError("message content is not text")
        if log_dir is not None:
            (log_dir / "llm_response.json").write_text(json.dumps({
                "attempts": attempts, "body": payload,
            }, indent=2), encoding="utf-8")
        return CompletionResult(text=text, attempts=attempts)

    raise TransportError(
        f"gave up after {attempts} attempts: {last_error}") from last_error


def extract_code(response: str) -> ScriptText:
    """Pull the contents of the single fenced code block out of a reply."""
    lines = response.split("\n")
    fence_lines = [i for i, line in enumerate(lines) if line.startswith("```")]
    if len(fence_lines) % 2 == 1:
        raise ExtractionError("unterminated code fence")
    blocks = [(fence_lines[k], fence_lines[k + 1]) for k in range(0, len(fence_lines), 2)]
    if not blocks:
        raise ExtractionError("no fenced code block in response")
    if len(blocks) > 1:
        spans = ", ".join(f"lines {a + 1}-{b + 1}" for a, b in blocks)
        raise ExtractionError(f"expected one fenced code block, found {len(blocks)}: {spans}")
    a, b = blocks[0]
    body = "\n".join(lines[a + 1:b])
    if not body:
        raise ExtractionError("the fenced code block is empty")
    return ScriptText(body=body + "\n", origin="llm")
