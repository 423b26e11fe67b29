"""Diff two snapshots: top table, rank moves, rename handling, growth.

Two synthetic snapshots four years apart. One film was renamed between them
(Sequel -> Sequel2016), which the rename map resolves so the entity counts
as common; one trope vanished entirely, which renders as "--" in the move
report instead of a misleading -100%.

Run with: python demos/compare_snapshots.py
"""

from datetime import date

from tropegraph import (
    Axis,
    BipartiteSnapshot,
    EntityKey,
    EvidenceSource,
    RelationEvidence,
    RenameMap,
    build_top_table,
    describe,
    degree_sequence,
    growth_report,
    rank_moves,
)
from tropegraph.compare import render_growth, render_moves, render_top_table
from tropegraph.storage import meta_of


def snapshot_from_counts(counts: dict[str, int], when: date) -> BipartiteSnapshot:
    """Trope degrees drawn from a shared film pool."""
    snapshot = BipartiteSnapshot(when, provenance="demo")
    pool = [EntityKey("Film", f"Pool{i:04d}") for i in range(max(counts.values()))]
    for name, count in sorted(counts.items()):
        trope = EntityKey("Main", name)
        evidence = RelationEvidence(EvidenceSource.TROPE_PAGE, trope)
        for film in pool[:count]:
            snapshot.add_relation(film, trope, evidence)
    return snapshot


OLD_COUNTS = {
    "BombedHard": 48,
    "CultHit": 28,
    "ThatActor": 24,
    "Sequel": 20,
    "Nemesis": 23,
    "CheapShot": 9,
}

NEW_COUNTS = {
    "AllFilms": 310,
    "Callback": 240,
    "BigVillain": 180,
    "BombedHard": 120,
    "Nemesis": 45,
    "Sequel2016": 41,
    "CultHit": 2,
    "CheapShot": 30,
    # ThatActor was removed from the wiki entirely.
}


def main() -> None:
    old = snapshot_from_counts(OLD_COUNTS, date(2016, 7, 1))
    new = snapshot_from_counts(NEW_COUNTS, date(2020, 4, 1))
    renames = RenameMap({EntityKey("Main", "Sequel"): EntityKey("Main", "Sequel2016")})

    print("top five tropes side by side (common entities starred):\n")
    table = build_top_table(old, new, Axis.FILMS_PER_TROPE, 5, renames)
    print(render_top_table(table, "markdown"))

    print("where the old top five ended up (zero-based ranks):\n")
    moves = rank_moves(old, new, Axis.FILMS_PER_TROPE, renames, n=5)
    print(render_moves(moves, "markdown"))

    print("aggregate growth:\n")
    summaries = []
    for snapshot in (old, new):
        summaries.append(
            tuple(
                describe(degree_sequence(snapshot, axis))
                for axis in (Axis.TROPES_PER_FILM, Axis.FILMS_PER_TROPE)
            )
        )
    report = growth_report(meta_of(old), meta_of(new), summaries[0], summaries[1])
    print(render_growth(report, "markdown"))


if __name__ == "__main__":
    main()
