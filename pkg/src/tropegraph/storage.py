"""Snapshot persistence: deterministic UTF-8 JSON with a meta header.

The file stores the films mapping only; the trope index is rebuilt on load.
All keys and lists are emitted in lexicographic order so that identical
snapshots produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from ._version import __version__
from .errors import FormatError, KindConflict, MetaMismatch
from .model import (
    BipartiteSnapshot,
    EntityKey,
    EvidenceSource,
    RelationEvidence,
    sort_key,
)


@dataclass(frozen=True)
class SnapshotMeta:
    """Header counts of a stored snapshot; verified against the body on load."""

    captured_at: date
    film_count: int
    trope_count: int
    connection_count: int
    tool_version: str = __version__
    provenance: str = "scrape"


def meta_of(snapshot: BipartiteSnapshot) -> SnapshotMeta:
    return SnapshotMeta(
        captured_at=snapshot.captured_at,
        film_count=snapshot.film_count,
        trope_count=snapshot.trope_count,
        connection_count=snapshot.connection_count,
        provenance=snapshot.provenance,
    )


def _evidence_token(evidence: RelationEvidence) -> str:
    return f"{evidence.source.value}:{evidence.page.label}"


def _parse_evidence_token(token: str) -> RelationEvidence:
    source_name, sep, page_label = token.partition(":")
    if not sep:
        raise ValueError(f"evidence entry {token!r} is not of the form Source:Namespace/Title")
    try:
        source = EvidenceSource(source_name)
    except ValueError:
        raise ValueError(f"unknown evidence source {source_name!r}") from None
    return RelationEvidence(source, EntityKey.from_label(page_label))


def snapshot_to_document(snapshot: BipartiteSnapshot) -> dict:
    """Build the JSON document (plain dicts in deterministic order)."""
    meta = meta_of(snapshot)
    films = {
        film.label: sorted(trope.label for trope in tropes)
        for film, tropes in sorted(snapshot.films.items(), key=lambda item: sort_key(item[0]))
    }
    evidences: dict[str, dict[str, list[str]]] = {}
    for (film, trope), entries in sorted(
        snapshot.evidences.items(), key=lambda item: (sort_key(item[0][0]), sort_key(item[0][1]))
    ):
        if not entries:
            continue
        evidences.setdefault(film.label, {})[trope.label] = sorted(
            _evidence_token(entry) for entry in entries
        )
    return {
        "meta": {
            "captured_at": meta.captured_at.isoformat(),
            "connection_count": meta.connection_count,
            "film_count": meta.film_count,
            "provenance": meta.provenance,
            "tool_version": meta.tool_version,
            "trope_count": meta.trope_count,
        },
        "films": films,
        "evidences": evidences,
    }


def dumps(snapshot: BipartiteSnapshot) -> str:
    return json.dumps(snapshot_to_document(snapshot), indent=2, ensure_ascii=False) + "\n"


def save_snapshot(snapshot: BipartiteSnapshot, path: str | Path) -> None:
    Path(path).write_text(dumps(snapshot), encoding="utf-8")


def _require(document: dict, field: str, kind: type, source: str):
    value = document.get(field)
    if not isinstance(value, kind):
        raise FormatError(f"{source}: missing or malformed {field!r} field")
    return value


def loads(text: str, source: str = "<string>") -> BipartiteSnapshot:
    """Parse a dataset document; FormatError messages carry file context."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(document, dict):
        raise FormatError(f"{source}: top level is not an object")

    meta = _require(document, "meta", dict, source)
    films = _require(document, "films", dict, source)
    evidences = document.get("evidences", {})
    if not isinstance(evidences, dict):
        raise FormatError(f"{source}: 'evidences' is not an object")

    try:
        captured_at = date.fromisoformat(str(meta.get("captured_at")))
    except ValueError as exc:
        raise FormatError(f"{source}: meta.captured_at: {exc}") from exc
    provenance = str(meta.get("provenance", "scrape"))

    snapshot = BipartiteSnapshot(captured_at, provenance)
    try:
        for film_label, trope_labels in films.items():
            film = _parse_label(film_label, f"{source}: films key")
            snapshot.add_film(film)
            if not isinstance(trope_labels, list):
                raise FormatError(f"{source}: films[{film_label!r}] is not a list")
            for trope_label in trope_labels:
                trope = _parse_label(trope_label, f"{source}: films[{film_label!r}] entry")
                snapshot.add_relation(film, trope, _PLACEHOLDER)
        for film_label, per_trope in evidences.items():
            film = _parse_label(film_label, f"{source}: evidences key")
            if not isinstance(per_trope, dict):
                raise FormatError(f"{source}: evidences[{film_label!r}] is not an object")
            for trope_label, tokens in per_trope.items():
                trope = _parse_label(trope_label, f"{source}: evidences[{film_label!r}] key")
                if trope not in snapshot.films.get(film, ()):
                    raise FormatError(
                        f"{source}: evidence for unknown relation {film_label}/{trope_label}"
                    )
                for token in tokens:
                    try:
                        snapshot.evidences[(film, trope)].add(_parse_evidence_token(str(token)))
                    except ValueError as exc:
                        raise FormatError(f"{source}: {exc}") from exc
    except KindConflict as exc:
        raise FormatError(f"{source}: {exc}") from exc

    for pair, entries in list(snapshot.evidences.items()):
        entries.discard(_PLACEHOLDER)
        if not entries:
            del snapshot.evidences[pair]

    _check_meta(meta, snapshot, source)
    return snapshot


def _parse_label(label, context: str) -> EntityKey:
    try:
        return EntityKey.from_label(str(label))
    except ValueError as exc:
        raise FormatError(f"{context}: {exc}") from exc


def _check_meta(meta: dict, snapshot: BipartiteSnapshot, source: str) -> None:
    stored = {
        "film_count": meta.get("film_count"),
        "trope_count": meta.get("trope_count"),
        "connection_count": meta.get("connection_count"),
    }
    actual = {
        "film_count": snapshot.film_count,
        "trope_count": snapshot.trope_count,
        "connection_count": snapshot.connection_count,
    }
    wrong = {name: (stored[name], actual[name]) for name in stored if stored[name] != actual[name]}
    if wrong:
        details = ", ".join(
            f"{name} stored {got} != recomputed {want}" for name, (got, want) in sorted(wrong.items())
        )
        raise MetaMismatch(f"{source}: {details}")


def load_snapshot(path: str | Path) -> BipartiteSnapshot:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return loads(text, source=str(path))


# Relations loaded from the films mapping start with no evidence; the marker
# keeps add_relation's signature honest and is stripped before returning.
_PLACEHOLDER = RelationEvidence(EvidenceSource.FILM_PAGE, EntityKey("Tropegraph", "LoadPlaceholder"))
