"""Small builders shared across test modules."""

from __future__ import annotations

from datetime import date

from tropegraph import (
    BipartiteSnapshot,
    EntityKey,
    EvidenceSource,
    RelationEvidence,
)

CAPTURED = date(2020, 4, 1)


def film(title: str) -> EntityKey:
    return EntityKey("Film", title)


def trope(title: str) -> EntityKey:
    return EntityKey("Main", title)


def make_snapshot(
    pairs,
    captured_at: date = CAPTURED,
    provenance: str = "scrape",
    zero_films=(),
) -> BipartiteSnapshot:
    """Snapshot from (film, trope) pairs, film-page evidence throughout."""
    snapshot = BipartiteSnapshot(captured_at, provenance)
    for f, t in pairs:
        snapshot.add_relation(f, t, RelationEvidence(EvidenceSource.FILM_PAGE, f))
    for f in zero_films:
        snapshot.add_film(f)
    return snapshot


def relation_set(snapshot: BipartiteSnapshot) -> set[tuple[EntityKey, EntityKey]]:
    return {(f, t) for f, tropes in snapshot.films.items() for t in tropes}
