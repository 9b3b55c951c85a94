"""Cached fetcher for the public ConceptNet HTTP API.

Every response is normalized exactly like a dump row and written to an
on-disk cache keyed by a fingerprint of the query. Once an entry exists it is
returned as-is; only ``refresh=True`` re-fetches. Network access is off by
default, so a warm cache makes every crawl reproducible offline.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import logging
import os
import tempfile
import time
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import HttpError, NetworkDisabled, ParseError, RateLimited
from .kg import Direction, Edge, GraphMetadata, KnowledgeGraph, Relation, normalize_label, screen_assertion

log = logging.getLogger(__name__)

DEFAULT_API_BASE = "https://api.conceptnet.io"
HARD_EDGE_CAP = 500
MAX_RADIUS = 3


def _default_cache_dir() -> Path:
    return Path(os.environ.get("CSK_CACHE_DIR") or Path.home() / ".cache" / "csk_organizer" / "conceptnet")


@dataclass(frozen=True)
class Response:
    status: int
    body: str
    headers: dict[str, str] = field(default_factory=dict)


Transport = Callable[[str, "dict[str, str] | None"], Response]


class RequestsTransport:
    def __init__(self, timeout: float = 10.0) -> None:
        import requests

        self.session = requests.Session()
        self.timeout = timeout

    def __call__(self, url: str, params: dict[str, str] | None) -> Response:
        r = self.session.get(url, params=params, timeout=self.timeout)
        return Response(r.status_code, r.text, dict(r.headers))


def forbidden_transport(url: str, params: dict[str, str] | None) -> Response:
    raise NetworkDisabled(f"network access is disabled (attempted GET {url})")


@dataclass(frozen=True)
class ClientConfig:
    base_url: str = field(default_factory=lambda: os.environ.get("CSK_API_BASE", DEFAULT_API_BASE))
    cache_dir: Path = field(default_factory=_default_cache_dir)
    network: bool = False
    refresh: bool = False
    edge_cap: int = HARD_EDGE_CAP
    page_size: int = 100
    max_connections: int = 4
    max_retries: int = 2
    max_backoff: float = 30.0


@dataclass(frozen=True)
class ApiQuery:
    concept: str
    direction: Direction = Direction.BOTH
    relation: str | None = None
    limit: int = HARD_EDGE_CAP

    def __post_init__(self) -> None:
        object.__setattr__(self, "concept", normalize_label(self.concept))
        if self.relation is not None:
            object.__setattr__(self, "relation", Relation.parse(self.relation).name)
        if not isinstance(self.limit, int) or self.limit < 1:
            raise ValueError(f"limit must be a positive integer, got {self.limit!r}")

    def normalized(self) -> dict:
        return {
            "concept": self.concept,
            "direction": self.direction.value,
            "relation": self.relation,
            "limit": self.limit,
        }

    @property
    def fingerprint(self) -> str:
        blob = json.dumps(self.normalized(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def params(self, page_size: int) -> dict[str, str]:
        node = f"/c/en/{self.concept}"
        key = {Direction.FORWARD: "start", Direction.REVERSE: "end", Direction.BOTH: "node"}[self.direction]
        p = {key: node, "limit": str(min(page_size, self.limit))}
        if self.relation:
            p["rel"] = f"/r/{self.relation}"
        return p


@dataclass(frozen=True)
class CacheEntry:
    fingerprint: str
    query: dict
    edges: tuple[Edge, ...]
    filtered: int
    fetched_at: str
    api_version: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "fingerprint": self.fingerprint,
                "query": self.query,
                "edges": [[e.start, e.end, e.relation.name, e.weight] for e in self.edges],
                "filtered": self.filtered,
                "fetched_at": self.fetched_at,
                "api_version": self.api_version,
            },
            sort_keys=True,
            indent=1,
        )

    @classmethod
    def from_json(cls, text: str) -> CacheEntry:
        d = json.loads(text)
        return cls(
            d["fingerprint"],
            d["query"],
            tuple(Edge(s, e, Relation(r), float(w)) for s, e, r, w in d["edges"]),
            int(d["filtered"]),
            d["fetched_at"],
            d["api_version"],
        )


class ResponseCache:
    """One JSON file per query fingerprint; writes are atomic."""

    def __init__(self, directory: str | os.PathLike) -> None:
        self.directory = Path(directory)

    def path(self, fingerprint: str) -> Path:
        return self.directory / f"{fingerprint}.json"

    def get(self, fingerprint: str) -> CacheEntry | None:
        p = self.path(fingerprint)
        if not p.exists():
            return None
        try:
            return CacheEntry.from_json(p.read_text(encoding="utf-8"))
        except (ValueError, KeyError, TypeError):
            log.warning("ignoring unreadable cache entry %s", p)
            return None

    def put(self, entry: CacheEntry) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(entry.to_json())
            os.replace(tmp, self.path(entry.fingerprint))
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise


@dataclass(frozen=True)
class Neighborhood:
    query: ApiQuery
    edges: tuple[Edge, ...]
    filtered: int
    fetched_at: str
    from_cache: bool

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


def parse_api_edges(payload: dict) -> tuple[list[Edge], int]:
    """Normalize the ``edges`` array of an API response; returns (kept, filtered count)."""
    raw = payload.get("edges") if isinstance(payload, dict) else None
    if not isinstance(raw, list):
        raise ParseError("response has no 'edges' array")
    kept, filtered = [], 0
    for item in raw:
        try:
            edge, _ = screen_assertion(item["rel"]["@id"], item["start"]["@id"], item["end"]["@id"], item["weight"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed edge in response: {exc}") from exc
        if edge is None:
            filtered += 1
        else:
            kept.append(edge)
    return kept, filtered


def _retry_after(headers: dict[str, str]) -> float | None:
    for k, v in headers.items():
        if k.lower() == "retry-after":
            try:
                return float(v)
            except ValueError:
                return None
    return None


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


class ConceptNetClient:
    def __init__(
        self,
        config: ClientConfig | None = None,
        transport: Transport | None = None,
        clock: Callable[[], str] = _now,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self.config = config or ClientConfig()
        if transport is None:
            transport = RequestsTransport() if self.config.network else forbidden_transport
        self.transport = transport
        self.cache = ResponseCache(self.config.cache_dir)
        self.clock = clock
        self.sleep = sleep

    def fetch_neighborhood(self, query: ApiQuery) -> Neighborhood:
        if query.limit > self.config.edge_cap:
            raise ValueError(f"limit {query.limit} exceeds the per-concept cap of {self.config.edge_cap}")
        fp = query.fingerprint
        if not self.config.refresh:
            entry = self.cache.get(fp)
            if entry is not None:
                return Neighborhood(query, entry.edges, entry.filtered, entry.fetched_at, True)
        if not self.config.network:
            raise NetworkDisabled(f"cache miss for {query.concept!r} and network access is disabled")

        base = self.config.base_url.rstrip("/")
        url: str | None = base + "/query"
        params: dict[str, str] | None = query.params(self.config.page_size)
        edges: list[Edge] = []
        filtered = 0
        version = ""
        while url is not None and len(edges) < query.limit:
            resp = self.transport(url, params)
            if resp.status == 429:
                raise RateLimited(_retry_after(resp.headers), url)
            if resp.status != 200:
                raise HttpError(resp.status, url)
            try:
                payload = json.loads(resp.body)
            except ValueError as exc:
                raise ParseError(f"response body is not JSON: {exc}") from exc
            kept, dropped = parse_api_edges(payload)
            edges.extend(kept)
            filtered += dropped
            version = version or str(payload.get("version") or resp.headers.get("ETag") or "")
            nxt = (payload.get("view") or {}).get("nextPage")
            url, params = (base + nxt, None) if nxt else (None, None)
        if filtered:
            log.info("%s: dropped %d non-English or non-positive edges", query.concept, filtered)

        entry = CacheEntry(fp, query.normalized(), tuple(edges[: query.limit]), filtered, self.clock(), version)
        self.cache.put(entry)
        return Neighborhood(query, entry.edges, entry.filtered, entry.fetched_at, False)

    def _fetch_with_retry(self, query: ApiQuery) -> Neighborhood:
        attempt = 0
        while True:
            try:
                return self.fetch_neighborhood(query)
            except RateLimited as exc:
                if attempt >= self.config.max_retries:
                    raise
                delay = exc.retry_after if exc.retry_after is not None else 2.0**attempt
                self.sleep(min(delay, self.config.max_backoff))
                attempt += 1

    def build_subgraph(
        self,
        seeds: Iterable[str],
        radius: int,
        continue_on_error: bool = False,
        relation: str | None = None,
    ) -> KnowledgeGraph:
        """Breadth-first crawl around ``seeds``.

        Concepts at each level are fetched in sorted order (concurrently up to
        ``max_connections``) and merged in that order, so the result only
        depends on the cache contents. Concepts the API knows nothing about,
        and failed fetches when ``continue_on_error`` is set, are listed in
        ``metadata.warnings``.
        """
        if not 0 <= radius <= MAX_RADIUS:
            raise ValueError(f"radius must be between 0 and {MAX_RADIUS}")
        seed_ids = sorted({normalize_label(s) for s in seeds})
        if not seed_ids:
            raise ValueError("at least one seed concept is required")

        seen = set(seed_ids)
        frontier = seed_ids
        edges: list[Edge] = []
        warnings: list[str] = []
        fingerprints = hashlib.sha256()
        latest: str | None = None

        def task(concept: str):
            try:
                return self._fetch_with_retry(ApiQuery(concept, Direction.BOTH, relation, self.config.edge_cap))
            except Exception as exc:  # collected and re-raised in crawl order below
                return exc

        with ThreadPoolExecutor(max_workers=max(1, self.config.max_connections)) as pool:
            for _ in range(radius):
                results = list(pool.map(task, frontier))
                discovered: set[str] = set()
                for concept, res in zip(frontier, results):
                    if isinstance(res, Exception):
                        if not continue_on_error:
                            raise res
                        warnings.append(f"fetch failed for {concept!r}: {res}")
                        continue
                    fingerprints.update(res.query.fingerprint.encode())
                    latest = res.fetched_at if latest is None else max(latest, res.fetched_at)
                    if not res.edges:
                        warnings.append(f"no edges returned for {concept!r}")
                    for e in res.edges:
                        edges.append(e)
                        for n in (e.start, e.end):
                            if n not in seen:
                                seen.add(n)
                                discovered.add(n)
                frontier = sorted(discovered)
                if not frontier:
                    break

        meta = GraphMetadata(
            source=self.config.base_url,
            source_digest=fingerprints.hexdigest(),
            built_at=latest,
            warnings=tuple(warnings),
        )
        return KnowledgeGraph.from_edges(edges, nodes=seed_ids, metadata=meta)
