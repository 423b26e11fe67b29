"""Page retrieval: polite live HTTP, on-disk fixtures, in-memory fixtures.

The live source enforces a minimum interval between request starts per host
(shared across worker threads), retries transient failures with exponential
backoff, never retries a 404, and can serve repeat requests from an on-disk
cache without touching the network. Fixture sources make crawls bit-exact
reproducible without any network at all.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import time
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from urllib.parse import urljoin, urlsplit

import requests

from .errors import ConfigError, NotAWikiPage
from .model import canonicalize_url

log = logging.getLogger(__name__)

DEFAULT_USER_AGENT = "tropegraph/0.1 (batch research crawler; polite by default)"


class FetchStatus(Enum):
    OK = "ok"
    NOT_FOUND = "not-found"
    FAILED = "failed"


@dataclass
class FetchResult:
    url: str
    status: FetchStatus
    text: str | None = None
    detail: str | None = None
    from_cache: bool = False

    @property
    def ok(self) -> bool:
        return self.status is FetchStatus.OK


@dataclass(frozen=True)
class SourceConfig:
    """Where pages come from and how politely to ask for them.

    Exactly one of base_url (live mode) and fixture_dir (fixture mode) must
    be set. Fixture mode ignores the network fields.
    """

    base_url: str | None = None
    fixture_dir: str | Path | None = None
    min_interval: float = 1.0
    max_retries: int = 3
    backoff_base: float = 0.5
    cache_dir: str | Path | None = None
    user_agent: str = DEFAULT_USER_AGENT
    timeout: float = 30.0

    def __post_init__(self):
        if (self.base_url is None) == (self.fixture_dir is None):
            raise ConfigError("set exactly one of base_url and fixture_dir")
        if self.min_interval < 0:
            raise ConfigError("min_interval must be >= 0")
        if not 0 <= self.max_retries <= 10:
            raise ConfigError("max_retries must be between 0 and 10")
        if self.backoff_base < 0:
            raise ConfigError("backoff_base must be >= 0")

    @classmethod
    def live(cls, base_url: str, **kwargs) -> SourceConfig:
        return cls(base_url=base_url, **kwargs)

    @classmethod
    def fixture(cls, directory: str | Path) -> SourceConfig:
        return cls(fixture_dir=directory)

    @property
    def is_fixture(self) -> bool:
        return self.fixture_dir is not None


class RateLimiter:
    """Serialize request starts so per-host gaps are at least min_interval.

    Thread-safe: each caller reserves the next start slot under the lock,
    then sleeps outside it, so concurrent workers still space out correctly.
    """

    def __init__(self, min_interval: float):
        self.min_interval = min_interval
        self._next_start: dict[str, float] = {}
        self._lock = threading.Lock()

    def acquire(self, host: str) -> None:
        if self.min_interval <= 0:
            return
        with self._lock:
            now = time.monotonic()
            slot = max(now, self._next_start.get(host, now))
            self._next_start[host] = slot + self.min_interval
        delay = slot - time.monotonic()
        if delay > 0:
            time.sleep(delay)


class FixtureSource:
    """Offline pages from a directory with an index.json lookup table.

    index.json maps canonical wiki paths ("Film/JamesBond") to HTML file
    names relative to the directory.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        index_path = self.directory / "index.json"
        try:
            raw = json.loads(index_path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read fixture index {index_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed fixture index {index_path}: {exc}") from exc
        if not isinstance(raw, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
        ):
            raise ConfigError(f"fixture index {index_path} must map labels to file names")
        self.index: dict[str, str] = raw

    def fetch(self, url: str) -> FetchResult:
        try:
            label = canonicalize_url(url).label
        except NotAWikiPage as exc:
            return FetchResult(url, FetchStatus.NOT_FOUND, detail=str(exc))
        filename = self.index.get(label)
        if filename is None:
            return FetchResult(url, FetchStatus.NOT_FOUND)
        path = self.directory / filename
        try:
            text = path.read_bytes().decode("utf-8", errors="replace")
        except OSError as exc:
            raise ConfigError(f"fixture file {path} unreadable: {exc}") from exc
        return FetchResult(url, FetchStatus.OK, text=text)

    def close(self) -> None:
        pass


class MemorySource:
    """In-memory fixture: maps canonical labels to page HTML.

    A value of MemorySource.FAIL simulates a transient failure. Fetches are
    counted per label so tests can assert that no page is hit twice.
    """

    FAIL = object()

    def __init__(self, pages: dict[str, str]):
        self.pages = pages
        self.fetch_counts: Counter[str] = Counter()

    def fetch(self, url: str) -> FetchResult:
        try:
            label = canonicalize_url(url).label
        except NotAWikiPage as exc:
            return FetchResult(url, FetchStatus.NOT_FOUND, detail=str(exc))
        self.fetch_counts[label] += 1
        if label not in self.pages:
            return FetchResult(url, FetchStatus.NOT_FOUND)
        body = self.pages[label]
        if body is MemorySource.FAIL:
            return FetchResult(url, FetchStatus.FAILED, detail="simulated transient failure")
        return FetchResult(url, FetchStatus.OK, text=body)

    def close(self) -> None:
        pass


class LiveSource:
    """HTTP source with per-host politeness, retry backoff and a body cache."""

    def __init__(self, config: SourceConfig):
        if config.base_url is None:
            raise ConfigError("LiveSource needs a base_url")
        self.config = config
        self.session = requests.Session()
        self.session.headers["User-Agent"] = config.user_agent
        self.limiter = RateLimiter(config.min_interval)
        self.cache_dir = Path(config.cache_dir) if config.cache_dir else None
        self._manifest_lock = threading.Lock()
        if self.cache_dir is not None:
            self.cache_dir.mkdir(parents=True, exist_ok=True)

    def _cache_key(self, url: str) -> str:
        path = urlsplit(url).path or url
        return hashlib.sha256(path.encode("utf-8")).hexdigest()

    def _cache_file(self, url: str) -> Path | None:
        if self.cache_dir is None:
            return None
        return self.cache_dir / (self._cache_key(url) + ".html")

    def _store(self, url: str, full_url: str, text: str) -> None:
        cache_file = self._cache_file(url)
        if cache_file is None:
            return
        cache_file.write_text(text, encoding="utf-8")
        manifest_path = self.cache_dir / "manifest.json"
        with self._manifest_lock:
            manifest = {}
            if manifest_path.exists():
                manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
            manifest[self._cache_key(url)] = full_url
            manifest_path.write_text(
                json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )

    def fetch(self, url: str) -> FetchResult:
        cache_file = self._cache_file(url)
        if cache_file is not None and cache_file.exists():
            text = cache_file.read_bytes().decode("utf-8", errors="replace")
            return FetchResult(url, FetchStatus.OK, text=text, from_cache=True)

        full_url = urljoin(self.config.base_url, url)
        host = urlsplit(full_url).netloc
        detail = "no attempt made"
        for attempt in range(self.config.max_retries + 1):
            if attempt > 0:
                time.sleep(self.config.backoff_base * 2 ** (attempt - 1))
            self.limiter.acquire(host)
            try:
                response = self.session.get(full_url, timeout=self.config.timeout)
            except requests.RequestException as exc:
                detail = f"{type(exc).__name__}: {exc}"
                log.debug("fetch %s attempt %d failed: %s", full_url, attempt, detail)
                continue
            if response.status_code == 404:
                return FetchResult(url, FetchStatus.NOT_FOUND)
            if 200 <= response.status_code < 300:
                text = response.content.decode("utf-8", errors="replace")
                self._store(url, full_url, text)
                return FetchResult(url, FetchStatus.OK, text=text)
            detail = f"HTTP {response.status_code}"
            if response.status_code < 500:
                return FetchResult(url, FetchStatus.FAILED, detail=detail)
            log.debug("fetch %s attempt %d got %s", full_url, attempt, detail)
        return FetchResult(url, FetchStatus.FAILED, detail=f"{detail} after {attempt + 1} attempts")

    def close(self) -> None:
        self.session.close()


PageSource = FixtureSource | MemorySource | LiveSource


def open_source(config: SourceConfig) -> PageSource:
    if config.is_fixture:
        return FixtureSource(config.fixture_dir)
    return LiveSource(config)


def fetch(config_or_source, url: str) -> FetchResult:
    """One-shot fetch. For request sequences open a source once and reuse it,
    otherwise live-mode politeness state resets between calls."""
    if isinstance(config_or_source, SourceConfig):
        source = open_source(config_or_source)
        try:
            return source.fetch(url)
        finally:
            source.close()
    return config_or_source.fetch(url)
