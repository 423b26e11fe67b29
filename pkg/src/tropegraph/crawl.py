"""Breadth-first crawl from seed index pages to a complete snapshot.

Traversal is level-synchronous with lexicographic ordering inside each
level, and all merging happens serially in the coordinator, so the result
is byte-identical no matter how many fetch workers run. Relations found
from film pages, trope pages and pagination pages are unioned: none of the
three routes sees everything, together they do.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date

from .errors import EmptyCrawl
from .fetch import FetchStatus, SourceConfig, open_source
from .model import BipartiteSnapshot, EntityKey, EntityKind, EvidenceSource, sort_key
from .parse import (
    DEFAULT_CONFIG,
    KindRegistry,
    PageKind,
    ParsedPage,
    ParserConfig,
    classify_page,
    extract_relations,
    extract_wiki_links,
)
from .storage import dumps

log = logging.getLogger(__name__)

ALL_PERSPECTIVES = frozenset(EvidenceSource)


@dataclass(frozen=True)
class CrawlLimits:
    """Desk-scale brakes: page budget, depth budget, namespace scope."""

    max_pages: int | None = None
    max_depth: int | None = None
    scope: frozenset[str] | None = None

    def __post_init__(self):
        if self.max_pages is not None and self.max_pages < 1:
            raise ValueError("max_pages must be positive")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be positive")


@dataclass
class CrawlReport:
    pages_fetched: int = 0
    pages_not_found: int = 0
    pages_failed: int = 0
    relations_found: int = 0
    films_discovered: int = 0
    tropes_discovered: int = 0
    failed_urls: list[str] = field(default_factory=list)


def crawl(
    source,
    seeds: list[EntityKey],
    limits: CrawlLimits | None = None,
    *,
    parser_config: ParserConfig | None = None,
    workers: int = 4,
    as_of: date | None = None,
    provenance: str = "scrape",
    perspectives: frozenset[EvidenceSource] = ALL_PERSPECTIVES,
    progress=None,
) -> tuple[BipartiteSnapshot, CrawlReport]:
    """Crawl from the seeds and merge every discovered relation.

    source is a SourceConfig or an already-open page source. Seeds are
    normally the index pages and are folded into the parser config's seed
    set automatically. The perspectives set is a test hook: relations whose
    evidence source is excluded are dropped at merge time, mimicking older
    single-route scrapers.

    Raises EmptyCrawl when no seed page can be retrieved.
    """
    if not seeds:
        raise ValueError("seeds must be non-empty")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if isinstance(source, SourceConfig):
        source = open_source(source)
    limits = limits or CrawlLimits()
    config = parser_config or DEFAULT_CONFIG
    if not set(seeds) <= config.index_seeds:
        config = ParserConfig(
            article_container_id=config.article_container_id,
            film_namespace=config.film_namespace,
            trope_namespaces=config.trope_namespaces,
            index_seeds=config.index_seeds | frozenset(seeds),
            excluded_tags=config.excluded_tags,
            excluded_ids=config.excluded_ids,
        )
    scope = limits.scope
    if scope is None:
        scope = frozenset({config.film_namespace}) | config.trope_namespaces

    snapshot = BipartiteSnapshot(as_of or date.today(), provenance)
    report = CrawlReport()
    registry = KindRegistry()

    visited: set[EntityKey] = set(seeds)
    level = sorted(set(seeds), key=sort_key)
    depth = 0
    visits = 0
    seed_retrieved = False

    while level:
        if limits.max_pages is not None:
            level = level[: limits.max_pages - visits]
            if not level:
                break

        def fetch_one(key: EntityKey):
            result = source.fetch(key.path)
            links = ()
            if result.ok:
                links = tuple(extract_wiki_links(result.text, config))
            return result, links

        if workers == 1 or len(level) == 1:
            fetched = [fetch_one(key) for key in level]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                fetched = list(pool.map(fetch_one, level))

        next_level: set[EntityKey] = set()
        for key, (result, links) in zip(level, fetched):
            visits += 1
            if result.status is FetchStatus.NOT_FOUND:
                report.pages_not_found += 1
                if key.namespace == config.film_namespace:
                    # Category listings sometimes name films that have no
                    # page; they are real observations with degree 0.
                    snapshot.add_film(key)
                continue
            if result.status is FetchStatus.FAILED:
                report.pages_failed += 1
                report.failed_urls.append(result.url)
                log.warning("giving up on %s: %s", result.url, result.detail)
                continue

            report.pages_fetched += 1
            if depth == 0:
                seed_retrieved = True
            parsed = _classify(key, links, registry, config)
            if parsed.kind is PageKind.FILM_PAGE:
                snapshot.add_film(key)
            for link in links:
                _register_namespace_kind(link, registry, config)
            for film, trope, evidence in extract_relations(parsed, registry, config):
                if evidence.source in perspectives:
                    snapshot.add_relation(film, trope, evidence)
            if parsed.kind is not PageKind.OTHER:
                for link in links:
                    if link in visited:
                        continue
                    if link.namespace in scope or registry.has_title(link.namespace):
                        next_level.add(link)

        if depth == 0 and not seed_retrieved:
            raise EmptyCrawl("no seed page could be retrieved")
        if progress is not None:
            progress(visits, len(next_level))
        depth += 1
        if limits.max_depth is not None and depth > limits.max_depth:
            break
        visited.update(next_level)
        level = sorted(next_level, key=sort_key)

    report.relations_found = snapshot.connection_count
    report.films_discovered = snapshot.film_count
    report.tropes_discovered = snapshot.trope_count
    return snapshot, report


def _classify(
    key: EntityKey, links: tuple[EntityKey, ...], registry: KindRegistry, config: ParserConfig
) -> ParsedPage:
    kind, owner = classify_page(key, registry, config)
    if kind is PageKind.FILM_PAGE:
        registry.register(key, EntityKind.FILM)
    elif kind is PageKind.TROPE_PAGE:
        registry.register(key, EntityKind.TROPE)
    return ParsedPage(key, kind, links, owner)


def _register_namespace_kind(key: EntityKey, registry: KindRegistry, config: ParserConfig) -> None:
    if key in config.index_seeds:
        return
    if key.namespace == config.film_namespace:
        registry.register(key, EntityKind.FILM)
    elif config.is_trope_namespace(key.namespace):
        registry.register(key, EntityKind.TROPE)


def recrawl_idempotence_check(
    source_config: SourceConfig,
    seeds: list[EntityKey],
    limits: CrawlLimits | None = None,
    **kwargs,
) -> bool:
    """True iff two consecutive crawls serialize byte-identically.

    The capture date is pinned (to the first crawl's date unless an as_of
    keyword is given) so only real nondeterminism can make this fail.
    """
    kwargs.setdefault("as_of", date.today())
    first, _ = crawl(source_config, seeds, limits, **kwargs)
    second, _ = crawl(source_config, seeds, limits, **kwargs)
    return dumps(first) == dumps(second)
