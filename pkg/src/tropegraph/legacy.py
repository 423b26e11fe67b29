"""Importer for line-oriented triple dumps of the old structured database.

Only a small N-Triples subset matters here: lines of the form
``<subject> <predicate> <object> .`` whose predicate is in the configured
feature set and whose subject/object resolve to a film and a trope. The
default predicate set is the feature predicate the legacy dumps are known
to use; override it to match a particular dump.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from urllib.parse import urlsplit

from .errors import FileUnreadable
from .model import BipartiteSnapshot, EntityKey, EvidenceSource, RelationEvidence
from .parse import DEFAULT_CONFIG, ParserConfig

DEFAULT_FEATURE_PREDICATES = frozenset(
    {"http://skipforward.net/skipforward/resource/seeder/skipinions/hasFeature"}
)

_TRIPLE = re.compile(r"^<([^<>\s]+)>\s+<([^<>\s]+)>\s+(.+?)\s*\.\s*$")
_IRI_OBJECT = re.compile(r"^<([^<>\s]+)>$")


@dataclass
class ImportReport:
    lines_total: int = 0
    lines_matched: int = 0
    relations_imported: int = 0
    skipped_predicate: int = 0
    skipped_nonmatching: int = 0
    skipped_malformed: int = 0

    @property
    def zero_relations(self) -> bool:
        return self.relations_imported == 0


def resource_key(iri: str) -> EntityKey | None:
    """Map a resource IRI to its wiki key via the last two path segments."""
    segments = [segment for segment in urlsplit(iri).path.split("/") if segment]
    if len(segments) < 2:
        return None
    try:
        return EntityKey(segments[-2], segments[-1])
    except ValueError:
        return None


def import_legacy(
    ntriples_path: str | Path,
    predicate_iris: frozenset[str] = DEFAULT_FEATURE_PREDICATES,
    *,
    as_of: date | None = None,
    parser_config: ParserConfig = DEFAULT_CONFIG,
) -> tuple[BipartiteSnapshot, ImportReport]:
    """Build a snapshot from a triple dump; skips are counted, never fatal.

    Matching lines need a predicate from predicate_iris, a subject in the
    film namespace and an object in a trope namespace. Duplicate triples
    collapse to one relation (set semantics).
    """
    path = Path(ntriples_path)
    try:
        text = path.read_text(encoding="utf-8", errors="replace")
    except OSError as exc:
        raise FileUnreadable(f"{path}: {exc}") from exc

    snapshot = BipartiteSnapshot(as_of or date.today(), provenance="legacy-import")
    report = ImportReport()
    for raw in text.splitlines():
        report.lines_total += 1
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _TRIPLE.match(line)
        if match is None:
            report.skipped_malformed += 1
            continue
        subject_iri, predicate_iri, object_term = match.groups()
        if predicate_iri not in predicate_iris:
            report.skipped_predicate += 1
            continue
        object_match = _IRI_OBJECT.match(object_term)
        if object_match is None:
            report.skipped_nonmatching += 1
            continue
        film = resource_key(subject_iri)
        trope = resource_key(object_match.group(1))
        if (
            film is None
            or trope is None
            or film.namespace != parser_config.film_namespace
            or not parser_config.is_trope_namespace(trope.namespace)
        ):
            report.skipped_nonmatching += 1
            continue
        snapshot.add_relation(film, trope, RelationEvidence(EvidenceSource.FILM_PAGE, film))
        report.lines_matched += 1
    report.relations_imported = snapshot.connection_count
    return snapshot, report
