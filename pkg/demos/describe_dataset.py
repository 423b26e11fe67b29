"""Descriptive statistics over both axes of a snapshot.

Builds a small skewed snapshot in memory (a few blockbuster-like films with
many tropes, a long tail with few) and prints the seven-number summary, the
degree histogram and the boxplot summary for each axis: tropes per film and
films per trope.

Run with: python demos/describe_dataset.py
"""

import random
from datetime import date

from tropegraph import (
    Axis,
    BipartiteSnapshot,
    EntityKey,
    EvidenceSource,
    RelationEvidence,
    boxplot,
    degree_sequence,
    describe,
    histogram,
)
from tropegraph.stats import boxplot_rows, describe_rows, histogram_rows, rows_to_csv


def build_long_tail_snapshot() -> BipartiteSnapshot:
    rng = random.Random(7)
    snapshot = BipartiteSnapshot(date(2020, 4, 1), provenance="demo")
    tropes = [EntityKey("Main", f"Trope{i:03d}") for i in range(120)]
    for i in range(60):
        film = EntityKey("Film", f"Film{i:03d}")
        # A handful of franchises use a lot of tropes; most films use few.
        degree = 40 + rng.randint(0, 40) if i < 5 else 1 + rng.randint(0, 7)
        for trope in rng.sample(tropes, degree):
            snapshot.add_relation(film, trope, RelationEvidence(EvidenceSource.FILM_PAGE, film))
    # A film named by a category page that itself has no page: degree 0.
    snapshot.add_film(EntityKey("Film", "PhantomEntry"))
    return snapshot


def main() -> None:
    snapshot = build_long_tail_snapshot()
    for axis in (Axis.TROPES_PER_FILM, Axis.FILMS_PER_TROPE):
        values = degree_sequence(snapshot, axis)
        print(f"=== {axis.name} ({len(values)} observations) ===")
        print(rows_to_csv(("statistic", "value"), describe_rows(describe(values))))
        print("degree histogram (degree,count):")
        print(rows_to_csv(("degree", "count"), histogram_rows(histogram(snapshot, axis))))
        print("boxplot summary:")
        print(rows_to_csv(("statistic", "value"), boxplot_rows(boxplot(values))))


if __name__ == "__main__":
    main()
