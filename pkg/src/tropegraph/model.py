"""Domain model: canonical page identity and the film/trope relation snapshot.

Identity is the (namespace, title) pair exactly as it appears in wiki URLs.
There are no numeric ids; renames between snapshots are handled downstream
by the compare module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from enum import Enum
from urllib.parse import urlsplit

from .errors import KindConflict, NotAWikiPage

_WIKI_PATH = re.compile(r"/pmwiki/pmwiki\.php/([^/]+)/([^/]+)/?$")
_FORBIDDEN_CHARS = frozenset("/?#\\")


@dataclass(frozen=True)
class EntityKey:
    """Canonical identity of one wiki page (film, trope, index, ...)."""

    namespace: str
    title: str

    def __post_init__(self):
        for part, name in ((self.namespace, "namespace"), (self.title, "title")):
            if not part:
                raise ValueError(f"EntityKey {name} must be non-empty")
            bad = _FORBIDDEN_CHARS.intersection(part)
            if bad:
                raise ValueError(f"EntityKey {name} {part!r} contains {sorted(bad)}")

    @property
    def label(self) -> str:
        """The 'Namespace/Title' form used in dataset files and reports."""
        return f"{self.namespace}/{self.title}"

    @property
    def path(self) -> str:
        """Site-relative URL path of this page."""
        return f"/pmwiki/pmwiki.php/{self.namespace}/{self.title}"

    @classmethod
    def from_label(cls, label: str) -> EntityKey:
        namespace, sep, title = label.partition("/")
        if not sep:
            raise ValueError(f"entity label {label!r} is not of the form Namespace/Title")
        return cls(namespace, title)

    def __str__(self) -> str:
        return self.label


def sort_key(key: EntityKey) -> str:
    """The one ordering used everywhere: lexicographic on the label."""
    return key.label


class EntityKind(Enum):
    FILM = "film"
    TROPE = "trope"


class EvidenceSource(Enum):
    """Which kind of page a relation was read from."""

    FILM_PAGE = "FilmPage"
    TROPE_PAGE = "TropePage"
    PAGINATION_PAGE = "PaginationPage"


@dataclass(frozen=True)
class RelationEvidence:
    source: EvidenceSource
    page: EntityKey


def canonicalize_url(raw_url: str) -> EntityKey:
    """Resolve an absolute or site-relative URL to its EntityKey.

    Strips scheme, host, query and fragment, then matches the wiki path
    pattern ``/pmwiki/pmwiki.php/<Namespace>/<Title>``. Comparison of the
    resulting keys is case-sensitive.

    Raises NotAWikiPage for anything else (external links, images, edit
    links, bare paths).
    """
    parts = urlsplit(raw_url)
    match = _WIKI_PATH.search(parts.path)
    if match is None:
        raise NotAWikiPage(f"{raw_url!r} does not match the wiki page pattern")
    namespace, title = match.group(1), match.group(2)
    try:
        return EntityKey(namespace, title)
    except ValueError as exc:
        raise NotAWikiPage(f"{raw_url!r}: {exc}") from exc


class BipartiteSnapshot:
    """The dated film<->trope relation set with indexes on both sides.

    Construction is single-writer: build it through add_film/add_relation,
    then treat it as immutable. Films with zero tropes are stored (they are
    real observations); tropes with zero films are not.
    """

    def __init__(self, captured_at: date, provenance: str = "scrape"):
        self.captured_at = captured_at
        self.provenance = provenance
        self._films: dict[EntityKey, set[EntityKey]] = {}
        self._tropes: dict[EntityKey, set[EntityKey]] = {}
        self._evidences: dict[tuple[EntityKey, EntityKey], set[RelationEvidence]] = {}
        self._kinds: dict[EntityKey, EntityKind] = {}

    def register_kind(self, key: EntityKey, kind: EntityKind) -> None:
        """Record that key is a film or a trope; the two kinds never mix."""
        existing = self._kinds.get(key)
        if existing is not None and existing is not kind:
            raise KindConflict(f"{key} is already a {existing.value}, cannot be a {kind.value}")
        self._kinds[key] = kind

    def kind_of(self, key: EntityKey) -> EntityKind | None:
        return self._kinds.get(key)

    def add_film(self, film: EntityKey) -> None:
        """Record a film, possibly with zero tropes (degree 0)."""
        self.register_kind(film, EntityKind.FILM)
        self._films.setdefault(film, set())

    def add_relation(self, film: EntityKey, trope: EntityKey, evidence: RelationEvidence) -> None:
        """Union one relation into both indexes; idempotent per evidence."""
        self.register_kind(film, EntityKind.FILM)
        self.register_kind(trope, EntityKind.TROPE)
        self._films.setdefault(film, set()).add(trope)
        self._tropes.setdefault(trope, set()).add(film)
        self._evidences.setdefault((film, trope), set()).add(evidence)

    @property
    def films(self) -> dict[EntityKey, set[EntityKey]]:
        return self._films

    @property
    def tropes(self) -> dict[EntityKey, set[EntityKey]]:
        return self._tropes

    @property
    def film_count(self) -> int:
        return len(self._films)

    @property
    def trope_count(self) -> int:
        return len(self._tropes)

    @property
    def connection_count(self) -> int:
        """Number of distinct film/trope relations (equal on both axes)."""
        return sum(len(tropes) for tropes in self._films.values())

    def film_degree(self, film: EntityKey) -> int | None:
        """Trope count of a film, or None when the film is not stored."""
        tropes = self._films.get(film)
        return None if tropes is None else len(tropes)

    def trope_degree(self, trope: EntityKey) -> int | None:
        """Film count of a trope, or None when the trope is not stored."""
        films = self._tropes.get(trope)
        return None if films is None else len(films)

    def evidence_for(self, film: EntityKey, trope: EntityKey) -> frozenset[RelationEvidence]:
        return frozenset(self._evidences.get((film, trope), ()))

    @property
    def evidences(self) -> dict[tuple[EntityKey, EntityKey], set[RelationEvidence]]:
        return self._evidences

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteSnapshot):
            return NotImplemented
        return (
            self.captured_at == other.captured_at
            and self.provenance == other.provenance
            and self._films == other._films
            and self._evidences == other._evidences
        )

    def __repr__(self) -> str:
        return (
            f"<BipartiteSnapshot {self.captured_at.isoformat()} {self.provenance!r} "
            f"films={self.film_count} tropes={self.trope_count} "
            f"connections={self.connection_count}>"
        )


def connection_count(snapshot: BipartiteSnapshot) -> int:
    """Module-level alias for the relation count of a snapshot."""
    return snapshot.connection_count
