"""Snapshot comparison: top-N tables, increments, rank moves, growth report.

Rename maps are supplied by hand, never inferred; resolving them makes
old-name/new-name pairs like TheAvengers -> TheAvengers2012 count as the
same entity. Rank displays are zero-based by default (the first rank is
"+0th"); pass rank_base=1 for conventional ordinals.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .errors import FormatError, UndefinedIncrement
from .model import BipartiteSnapshot, EntityKey, sort_key
from .stats import Axis, DescriptiveSummary
from .storage import SnapshotMeta


@dataclass(frozen=True)
class RenameMap:
    """Injective old-key -> new-key mapping with no chains."""

    by_old: dict[EntityKey, EntityKey]

    def __post_init__(self):
        news = list(self.by_old.values())
        if len(set(news)) != len(news):
            raise ValueError("rename map is not injective")
        overlap = set(self.by_old) & set(news)
        if overlap:
            raise ValueError(f"rename map chains through {sorted(k.label for k in overlap)}")

    @classmethod
    def empty(cls) -> RenameMap:
        return cls({})

    def resolve(self, key: EntityKey) -> EntityKey:
        return self.by_old.get(key, key)

    def preimage(self, key: EntityKey) -> EntityKey:
        for old, new in self.by_old.items():
            if new == key:
                return old
        return key


def load_renames(path: str | Path) -> RenameMap:
    """Read a two-column (old, new) mapping file; '#' starts a comment."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    mapping: dict[EntityKey, EntityKey] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        columns = line.split()
        if len(columns) != 2:
            raise FormatError(f"{path}:{lineno}: expected two columns, got {len(columns)}")
        try:
            mapping[EntityKey.from_label(columns[0])] = EntityKey.from_label(columns[1])
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from exc
    try:
        return RenameMap(mapping)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class DiffRow:
    """One row of a comparative report.

    For side-by-side top tables old and new name are independent rank-mates;
    increment and the common flag belong to the new-side entity. For
    rank-move reports both names refer to the same (rename-resolved) entity.
    """

    old_name: EntityKey | None
    old_count: int | None
    new_name: EntityKey | None
    new_count: int | None
    increment_display: str
    common: bool
    rank_move_display: str | None = None


@dataclass(frozen=True)
class TopTable:
    axis: Axis
    n: int
    rows: tuple[DiffRow, ...]
    # Every name (old side or new side) that belongs to a common entity;
    # renderers mark these without needing the rename map again.
    marked_names: frozenset[EntityKey] = frozenset()


def top_n(snapshot: BipartiteSnapshot, axis: Axis, n: int) -> list[tuple[EntityKey, int]]:
    """Top n entities by degree, descending, ties broken by name."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return full_ranking(snapshot, axis)[:n]


def full_ranking(snapshot: BipartiteSnapshot, axis: Axis) -> list[tuple[EntityKey, int]]:
    index = snapshot.films if axis is Axis.TROPES_PER_FILM else snapshot.tropes
    entries = [(key, len(others)) for key, others in index.items()]
    entries.sort(key=lambda item: (-item[1], sort_key(item[0])))
    return entries


def percent_change(old_count: int, new_count: int) -> float:
    """100 * (new - old) / old; undefined for an absent or zero old count."""
    if old_count is None or old_count == 0:
        raise UndefinedIncrement("percent change needs a positive old count")
    return 100.0 * (new_count - old_count) / old_count


def format_percent(value: float | None) -> str:
    """Render a percent with sign, comma grouping and one decimal.

    None (the undefined-increment marker) renders as "--". Rounding is half
    away from zero.
    """
    if value is None:
        return "--"
    quantized = Decimal(repr(float(value))).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)
    if quantized.is_zero():
        quantized = Decimal("0.0")
    sign = "-" if quantized < 0 else "+"
    return f"{sign}{abs(quantized):,.1f}%"


def increment_display(old_count: int | None, new_count: int | None) -> str:
    """The table policy: "--" for entities that are new or have dropped to 0."""
    if old_count is None or old_count == 0 or new_count is None or new_count == 0:
        return "--"
    return format_percent(percent_change(old_count, new_count))


def ordinal(n: int) -> str:
    """English ordinal with comma grouping: 3 -> '3rd', 16030 -> '16,030th'."""
    if n % 100 in (11, 12, 13):
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    return f"{n:,}{suffix}"


def mark_common(
    old_top: list[EntityKey], new_top: list[EntityKey], renames: RenameMap
) -> set[EntityKey]:
    """Entities present in both top lists once renames are resolved."""
    resolved_old = {renames.resolve(key) for key in old_top}
    return resolved_old & set(new_top)


def rank_moves(
    old_snap: BipartiteSnapshot,
    new_snap: BipartiteSnapshot,
    axis: Axis,
    renames: RenameMap,
    n: int,
    rank_base: int = 0,
) -> list[DiffRow]:
    """Where the old top n ended up: new count, increment, new rank.

    Rows keep the old name for display; counts and ranks are looked up under
    the rename-resolved key. Entities absent from the new snapshot render
    count 0 and "--" for both increment and move.
    """
    old_top = top_n(old_snap, axis, n)
    new_ranking = full_ranking(new_snap, axis)
    rank_of = {key: rank for rank, (key, _) in enumerate(new_ranking)}
    new_top_keys = [key for key, _ in new_ranking[:n]]
    common = mark_common([key for key, _ in old_top], new_top_keys, renames)

    rows = []
    for key, old_count in old_top:
        resolved = renames.resolve(key)
        rank = rank_of.get(resolved)
        if rank is None:
            new_count = 0
            move = "--"
        else:
            degree = (
                new_snap.film_degree(resolved)
                if axis is Axis.TROPES_PER_FILM
                else new_snap.trope_degree(resolved)
            )
            new_count = degree if degree is not None else 0
            move = "+" + ordinal(rank + rank_base)
        rows.append(
            DiffRow(
                old_name=key,
                old_count=old_count,
                new_name=resolved,
                new_count=new_count,
                increment_display=increment_display(old_count, new_count),
                common=resolved in common,
                rank_move_display=move,
            )
        )
    return rows


def build_top_table(
    old_snap: BipartiteSnapshot,
    new_snap: BipartiteSnapshot,
    axis: Axis,
    n: int,
    renames: RenameMap,
) -> TopTable:
    """Side-by-side old/new top lists, Increment column for the new side."""
    old_top = top_n(old_snap, axis, n)
    new_top = top_n(new_snap, axis, n)
    common = mark_common([key for key, _ in old_top], [key for key, _ in new_top], renames)

    rows = []
    for i in range(max(len(old_top), len(new_top))):
        old_name, old_count = old_top[i] if i < len(old_top) else (None, None)
        new_name, new_count = new_top[i] if i < len(new_top) else (None, None)
        if new_name is None:
            increment = "--"
            is_common = False
        else:
            previous = renames.preimage(new_name)
            previous_count = (
                old_snap.film_degree(previous)
                if axis is Axis.TROPES_PER_FILM
                else old_snap.trope_degree(previous)
            )
            increment = increment_display(previous_count, new_count)
            is_common = new_name in common
        rows.append(DiffRow(old_name, old_count, new_name, new_count, increment, is_common))
    marked = set(common)
    marked.update(key for key, _ in old_top if renames.resolve(key) in common)
    return TopTable(axis=axis, n=n, rows=tuple(rows), marked_names=frozenset(marked))


@dataclass(frozen=True)
class GrowthRow:
    metric: str
    old_value: float
    new_value: float
    display: str


@dataclass(frozen=True)
class GrowthReport:
    rows: tuple[GrowthRow, ...]

    def display(self, metric: str) -> str:
        for row in self.rows:
            if row.metric == metric:
                return row.display
        raise KeyError(metric)


def growth_report(
    old_meta: SnapshotMeta,
    new_meta: SnapshotMeta,
    old_stats: tuple[DescriptiveSummary, DescriptiveSummary],
    new_stats: tuple[DescriptiveSummary, DescriptiveSummary],
) -> GrowthReport:
    """Aggregate growth between two snapshots.

    old_stats/new_stats pair up the two axes: (tropes-per-film summary,
    films-per-trope summary). Each line is the percent change of the
    respective field; undefined increments render "--".
    """

    def row(metric: str, old_value: float, new_value: float) -> GrowthRow:
        try:
            display = format_percent(percent_change(old_value, new_value))
        except UndefinedIncrement:
            display = "--"
        return GrowthRow(metric, old_value, new_value, display)

    old_films, old_tropes = old_stats
    new_films, new_tropes = new_stats
    return GrowthReport(
        rows=(
            row("films", old_meta.film_count, new_meta.film_count),
            row("mean_tropes_per_film", old_films.mean, new_films.mean),
            row("tropes", old_meta.trope_count, new_meta.trope_count),
            row("mean_films_per_trope", old_tropes.mean, new_tropes.mean),
            row("connections", old_meta.connection_count, new_meta.connection_count),
        )
    )


def _name(key: EntityKey | None, is_common: bool, use_marker: bool) -> str:
    if key is None:
        return ""
    return f"*{key.label}*" if use_marker and is_common else key.label


def render_top_table(table: TopTable, fmt: str = "markdown") -> str:
    """Emit a top table as markdown, csv or tsv.

    In the markdown form every name belonging to a common entity is wrapped
    in '*', on both sides of the table.
    """
    header = ["rank", "old_name", "old_count", "new_name", "new_count", "increment", "common"]
    body = []
    for rank, row in enumerate(table.rows):
        body.append(
            [
                str(rank),
                _name(row.old_name, row.old_name in table.marked_names, fmt == "markdown"),
                "" if row.old_count is None else str(row.old_count),
                _name(row.new_name, row.new_name in table.marked_names, fmt == "markdown"),
                "" if row.new_count is None else str(row.new_count),
                row.increment_display,
                "yes" if row.common else "no",
            ]
        )
    return _render(header, body, fmt)


def render_moves(rows: list[DiffRow], fmt: str = "markdown") -> str:
    header = ["rank", "name", "old_count", "new_count", "increment", "moves_to"]
    body = [
        [
            str(rank),
            "" if row.old_name is None else row.old_name.label,
            "" if row.old_count is None else str(row.old_count),
            "" if row.new_count is None else str(row.new_count),
            row.increment_display,
            row.rank_move_display or "--",
        ]
        for rank, row in enumerate(rows)
    ]
    return _render(header, body, fmt)


def render_growth(report: GrowthReport, fmt: str = "markdown") -> str:
    header = ["metric", "old", "new", "increment"]
    body = [
        [row.metric, _plain_number(row.old_value), _plain_number(row.new_value), row.display]
        for row in report.rows
    ]
    return _render(header, body, fmt)


def _plain_number(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return f"{value:.3f}"


def _render(header: list[str], body: list[list[str]], fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(header)] + [",".join(row) for row in body]
    elif fmt == "tsv":
        lines = ["\t".join(header)] + ["\t".join(row) for row in body]
    elif fmt == "markdown":
        lines = [
            "| " + " | ".join(header) + " |",
            "|" + "|".join(" --- " for _ in header) + "|",
        ] + ["| " + " | ".join(row) + " |" for row in body]
    else:
        raise ValueError(f"unknown format {fmt!r} (expected markdown, csv or tsv)")
    return "\n".join(lines) + "\n"
