"""Page classification and link extraction for the three discovery routes.

A relation between a film and a trope can be evidenced by the film's page,
by the trope's page, or by a pagination page that continues an oversized
listing. Pagination pages live at the same URL level as articles (their
namespace is the owning entity's title), so telling them apart needs the
registry of entities discovered so far.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from html.parser import HTMLParser

from .errors import NotAWikiPage, UnownedPagination
from .model import EntityKey, EntityKind, EvidenceSource, RelationEvidence, canonicalize_url

log = logging.getLogger(__name__)

# Elements that never contain content anchors and never get closing tags.
_VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)


@dataclass(frozen=True)
class ParserConfig:
    """Site-structure knobs: container id, namespace tokens, index seeds."""

    article_container_id: str = "main-article"
    film_namespace: str = "Film"
    trope_namespaces: frozenset[str] = frozenset({"Main"})
    index_seeds: frozenset[EntityKey] = frozenset()
    excluded_tags: frozenset[str] = frozenset({"nav", "header", "footer"})
    excluded_ids: frozenset[str] = frozenset({"comments"})

    def is_trope_namespace(self, namespace: str) -> bool:
        return namespace in self.trope_namespaces


DEFAULT_CONFIG = ParserConfig()


class PageKind(Enum):
    FILM_PAGE = "film-page"
    TROPE_PAGE = "trope-page"
    PAGINATION_PAGE = "pagination-page"
    INDEX_PAGE = "index-page"
    OTHER = "other"


@dataclass(frozen=True)
class ParsedPage:
    """Classification plus extracted wiki outlinks of one fetched page."""

    page: EntityKey
    kind: PageKind
    outlinks: tuple[EntityKey, ...]
    owner: EntityKey | None = None


class KindRegistry:
    """Entity kinds discovered so far, with a title index for pagination.

    When a namespace token matches both a known film title and a known trope
    title, the trope wins (oversized listings that need continuation pages
    are overwhelmingly on the trope side); the tie is logged.
    """

    def __init__(self):
        self._kinds: dict[EntityKey, EntityKind] = {}
        self._by_title: dict[str, dict[EntityKind, EntityKey]] = {}

    def register(self, key: EntityKey, kind: EntityKind) -> None:
        if key in self._kinds:
            return
        self._kinds[key] = kind
        self._by_title.setdefault(key.title, {}).setdefault(kind, key)

    def kind_of(self, key: EntityKey) -> EntityKind | None:
        return self._kinds.get(key)

    def has_title(self, title: str) -> bool:
        return title in self._by_title

    def owner_for_namespace(self, namespace: str) -> EntityKey | None:
        candidates = self._by_title.get(namespace)
        if not candidates:
            return None
        if len(candidates) > 1:
            log.warning(
                "namespace %r names both a film and a trope; treating it as the trope's pagination",
                namespace,
            )
        if EntityKind.TROPE in candidates:
            return candidates[EntityKind.TROPE]
        return candidates[EntityKind.FILM]

    def __len__(self) -> int:
        return len(self._kinds)


class _LinkExtractor(HTMLParser):
    """Collect wiki anchors inside the article container, document order.

    Tolerant of malformed markup: unmatched end tags are ignored and missing
    end tags just leave regions open, which mirrors how browsers cope with
    hand-maintained wiki HTML.
    """

    def __init__(self, config: ParserConfig):
        super().__init__(convert_charrefs=True)
        self.config = config
        self.links: list[EntityKey] = []
        self._seen: set[EntityKey] = set()
        # Stack frames: (tag, opens_article, opens_excluded)
        self._stack: list[tuple[str, bool, bool]] = []
        self._article_depth = 0
        self._excluded_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in _VOID_TAGS:
            return
        attr_map = dict(attrs)
        element_id = attr_map.get("id")
        opens_article = element_id == self.config.article_container_id
        opens_excluded = tag in self.config.excluded_tags or (
            element_id in self.config.excluded_ids if element_id else False
        )
        self._stack.append((tag, opens_article, opens_excluded))
        self._article_depth += opens_article
        self._excluded_depth += opens_excluded
        if tag == "a" and self._article_depth > 0 and self._excluded_depth == 0:
            href = attr_map.get("href")
            if href:
                self._record(href)

    def handle_endtag(self, tag):
        if tag in _VOID_TAGS or tag not in (frame[0] for frame in self._stack):
            return
        while self._stack:
            popped, was_article, was_excluded = self._stack.pop()
            self._article_depth -= was_article
            self._excluded_depth -= was_excluded
            if popped == tag:
                break

    def _record(self, href: str) -> None:
        try:
            key = canonicalize_url(href)
        except NotAWikiPage:
            return
        if key not in self._seen:
            self._seen.add(key)
            self.links.append(key)


def extract_wiki_links(html: str, config: ParserConfig = DEFAULT_CONFIG) -> list[EntityKey]:
    """Canonical targets of anchors in the article body, deduplicated.

    Navigation, header, footer and comment regions are excluded; anchors
    outside the article container do not count. Pure: same text, same list.
    """
    extractor = _LinkExtractor(config)
    extractor.feed(html)
    extractor.close()
    return extractor.links


def classify_page(
    page: EntityKey, known: KindRegistry, config: ParserConfig = DEFAULT_CONFIG
) -> tuple[PageKind, EntityKey | None]:
    """Decide what a page is from its key and the entities known so far.

    Namespace rules come first (film, then trope), then pagination (the
    page's namespace equals the title of a known entity), then membership
    in the configured index seed set. Classification is purely key-based:
    index pages are declared, not sniffed from their content. Returns
    (kind, owner); owner is set only for pagination pages.
    """
    if page.namespace == config.film_namespace:
        return PageKind.FILM_PAGE, None
    if config.is_trope_namespace(page.namespace):
        return PageKind.TROPE_PAGE, None
    owner = known.owner_for_namespace(page.namespace)
    if owner is not None:
        return PageKind.PAGINATION_PAGE, owner
    if page in config.index_seeds:
        return PageKind.INDEX_PAGE, None
    return PageKind.OTHER, None


def parse_page(
    page: EntityKey,
    html: str,
    known: KindRegistry,
    config: ParserConfig = DEFAULT_CONFIG,
) -> ParsedPage:
    kind, owner = classify_page(page, known, config)
    return ParsedPage(page, kind, tuple(extract_wiki_links(html, config)), owner)


def extract_relations(
    parsed: ParsedPage,
    known: KindRegistry,
    config: ParserConfig = DEFAULT_CONFIG,
) -> list[tuple[EntityKey, EntityKey, RelationEvidence]]:
    """Film/trope relations evidenced by one parsed page.

    Film pages pair the film with each trope-namespace outlink; trope pages
    flip the direction; pagination pages behave like their owner's page with
    pagination evidence. Index and other pages contribute nothing, as do
    outlinks that are neither films nor tropes.
    """
    def trope_links():
        return [
            link
            for link in parsed.outlinks
            if config.is_trope_namespace(link.namespace) and link not in config.index_seeds
        ]

    def film_links():
        return [
            link
            for link in parsed.outlinks
            if link.namespace == config.film_namespace and link not in config.index_seeds
        ]

    if parsed.kind is PageKind.FILM_PAGE:
        evidence = RelationEvidence(EvidenceSource.FILM_PAGE, parsed.page)
        return [(parsed.page, link, evidence) for link in trope_links()]
    if parsed.kind is PageKind.TROPE_PAGE:
        evidence = RelationEvidence(EvidenceSource.TROPE_PAGE, parsed.page)
        return [(link, parsed.page, evidence) for link in film_links()]
    if parsed.kind is PageKind.PAGINATION_PAGE:
        owner = parsed.owner
        owner_kind = known.kind_of(owner) if owner is not None else None
        if owner_kind is None:
            raise UnownedPagination(f"pagination page {parsed.page} has no known owner")
        evidence = RelationEvidence(EvidenceSource.PAGINATION_PAGE, parsed.page)
        if owner_kind is EntityKind.FILM:
            return [(owner, link, evidence) for link in trope_links()]
        return [(link, owner, evidence) for link in film_links()]
    return []
