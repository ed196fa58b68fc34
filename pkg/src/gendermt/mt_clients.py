"""Translation backends and batch translation of the challenge corpus.

Two backends cover the evaluation workflows: a read-only file fixture for
reproducing stored system outputs, and a generic REST adapter with
declarative request/response mapping for live services.  Per-sentence
failures never abort a batch; they surface as flagged records that the
pipeline turns into explicit statuses.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import requests

from .corpus import ChallengeInstance
from .languages import require_language

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 3
BACKOFF_BASE_SECONDS = 0.5


class BackendError(RuntimeError):
    """Batch-level failure: the backend cannot serve this run at all."""


class TranslationError(RuntimeError):
    """Per-sentence failure; the instance is flagged, the batch continues."""


@dataclass(frozen=True)
class TranslationRecord:
    """One source sentence and its target-language rendering.

    ``error`` is None for usable records; flagged records carry the failure
    reason and an empty target.
    """

    instance_id: str
    system_id: str
    language: str
    source: str
    target: str
    error: str | None = None

    def __post_init__(self):
        if self.error is None and not self.target:
            raise ValueError(f"empty target for {self.instance_id} without error flag")

    @property
    def ok(self) -> bool:
        return self.error is None


class TranslatorBackend(Protocol):
    system_id: str

    def translate(self, instance_id: str, sentence: str, language: str) -> str:
        """Return the translation; raise TranslationError on failure."""
        ...


def translate_corpus(
    instances: list[ChallengeInstance],
    backend: TranslatorBackend,
    language: str,
    jobs: int = 1,
) -> list[TranslationRecord]:
    """Translate every instance, preserving order; failures become flags."""
    language = require_language(language)

    def one(instance: ChallengeInstance) -> TranslationRecord:
        try:
            target = backend.translate(instance.id, instance.sentence, language)
            return TranslationRecord(
                instance.id, backend.system_id, language, instance.sentence, target
            )
        except TranslationError as err:
            return TranslationRecord(
                instance.id, backend.system_id, language, instance.sentence, "",
                error=str(err),
            )

    if jobs <= 1:
        records = [one(instance) for instance in instances]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(one, instances))
    failed = sum(1 for record in records if not record.ok)
    if failed:
        logger.warning("%d/%d instances failed to translate", failed, len(records))
    return records


class FileBackend:
    """Fixture-backed translator: answers from a `id<TAB>target` TSV.

    A sidecar ``<path>.meta.json`` may document the fixture's provenance;
    its ``system_id`` field names the system, else the file stem is used.
    """

    def __init__(self, path: str | Path):
        path = Path(path)
        self.system_id = path.stem
        self.metadata: dict = {}
        sidecar = path.with_name(path.name + ".meta.json")
        if sidecar.exists():
            self.metadata = json.loads(sidecar.read_text(encoding="utf-8"))
            self.system_id = self.metadata.get("system_id", self.system_id)
        self._targets: dict[str, str] = {}
        with open(path, encoding="utf-8", newline="") as handle:
            for line_number, line in enumerate(handle, start=1):
                line = line.rstrip("\n").rstrip("\r")
                if not line:
                    continue
                fields = line.split("\t", 1)
                if len(fields) != 2:
                    raise BackendError(
                        f"{path}, line {line_number}: expected `id<TAB>target`"
                    )
                instance_id, target = fields
                if instance_id in self._targets:
                    raise BackendError(
                        f"{path}, line {line_number}: duplicate id {instance_id!r}"
                    )
                self._targets[instance_id] = target

    def translate(self, instance_id: str, sentence: str, language: str) -> str:
        try:
            target = self._targets[instance_id]
        except KeyError:
            raise TranslationError(f"no fixture translation for id {instance_id!r}")
        if not target:
            raise TranslationError(f"fixture translation empty for id {instance_id!r}")
        return target


def file_backend(path: str | Path) -> FileBackend:
    return FileBackend(path)


class RateLimiter:
    """Serializes callers so request starts are >= 1/rate apart."""

    def __init__(self, rate_per_sec: float):
        self._interval = 1.0 / rate_per_sec if rate_per_sec > 0 else 0.0
        self._lock = threading.Lock()
        self._next_slot = 0.0

    def wait(self) -> None:
        if not self._interval:
            return
        with self._lock:
            now = time.monotonic()
            wait_for = self._next_slot - now
            self._next_slot = max(now, self._next_slot) + self._interval
        if wait_for > 0:
            time.sleep(wait_for)


@dataclass(frozen=True)
class HttpBackendConfig:
    """Declarative request/response mapping for a REST translation API.

    ``url`` and string values inside ``body_template`` may contain the
    placeholders ``{text}`` and ``{lang}``.  ``response_path`` is a dotted
    path into the response JSON (list indices as integers), e.g.
    ``data.translations.0.text``.
    """

    url: str
    method: str = "POST"
    headers: dict | None = None
    body_template: dict | None = None
    response_path: str = "translation"
    rate_per_sec: float = 0.0
    batch_size: int = 1
    system_id: str = "http"

    @classmethod
    def from_file(cls, path: str | Path) -> "HttpBackendConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise BackendError(f"unknown http config keys: {sorted(unknown)}")
        return cls(**raw)


def _fill_placeholders(value, text: str, lang: str):
    if isinstance(value, str):
        return value.replace("{text}", text).replace("{lang}", lang)
    if isinstance(value, dict):
        return {k: _fill_placeholders(v, text, lang) for k, v in value.items()}
    if isinstance(value, list):
        return [_fill_placeholders(v, text, lang) for v in value]
    return value


def _walk_response_path(payload, path: str):
    node = payload
    for step in path.split("."):
        if isinstance(node, list):
            try:
                node = node[int(step)]
            except (ValueError, IndexError):
                raise TranslationError(
                    f"response path step {step!r} does not index the JSON list"
                )
        elif isinstance(node, dict):
            if step not in node:
                raise TranslationError(f"response JSON lacks field {step!r}")
            node = node[step]
        else:
            raise TranslationError(f"response path {path!r} dead-ends at {step!r}")
    if not isinstance(node, str):
        raise TranslationError(f"response path {path!r} does not yield a string")
    return node


class HttpBackend:
    """Generic REST translator; one request per sentence, rate limited."""

    def __init__(self, config: HttpBackendConfig, session: requests.Session | None = None):
        self.config = config
        self.system_id = config.system_id
        self._limiter = RateLimiter(config.rate_per_sec)
        self._session = session or requests.Session()

    def translate(self, instance_id: str, sentence: str, language: str) -> str:
        config = self.config
        url = config.url.replace("{text}", requests.utils.quote(sentence)).replace(
            "{lang}", language
        )
        body = (
            _fill_placeholders(config.body_template, sentence, language)
            if config.body_template is not None
            else None
        )
        last_error = "no attempt made"
        for attempt in range(MAX_ATTEMPTS):
            self._limiter.wait()
            try:
                response = self._session.request(
                    config.method,
                    url,
                    json=body,
                    headers=config.headers,
                    timeout=30,
                )
            except requests.exceptions.ConnectionError as err:
                raise BackendError(f"backend unreachable: {err}") from err
            if 200 <= response.status_code < 300:
                try:
                    payload = response.json()
                except ValueError:
                    raise TranslationError(
                        f"{instance_id}: response is not valid JSON"
                    ) from None
                return _walk_response_path(payload, config.response_path)
            last_error = f"HTTP {response.status_code}"
            if attempt + 1 < MAX_ATTEMPTS:
                time.sleep(BACKOFF_BASE_SECONDS * 2**attempt)
        raise TranslationError(
            f"{instance_id}: {last_error} after {MAX_ATTEMPTS} attempts"
        )


def http_backend(config: str | Path | HttpBackendConfig) -> HttpBackend:
    if not isinstance(config, HttpBackendConfig):
        config = HttpBackendConfig.from_file(config)
    return HttpBackend(config)


def save_translations(path: str | Path, records: list[TranslationRecord]) -> None:
    """Write the `id<TAB>target` artifact; failed records get empty targets."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(f"{record.instance_id}\t{record.target}\n")
