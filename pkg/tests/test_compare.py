from __future__ import annotations

from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import CAPTURED, film, make_snapshot, trope
from tropegraph import (
    Axis,
    DescriptiveSummary,
    RenameMap,
    SnapshotMeta,
    UndefinedIncrement,
    build_top_table,
    format_percent,
    growth_report,
    mark_common,
    percent_change,
    rank_moves,
    top_n,
)
from tropegraph.compare import (
    full_ranking,
    increment_display,
    load_renames,
    ordinal,
    render_growth,
    render_moves,
    render_top_table,
)
from tropegraph.errors import FormatError


def counts_snapshot(counts: dict[str, int], axis=Axis.FILMS_PER_TROPE):
    """Snapshot where each named trope (or film) has the given degree."""
    pairs = []
    for i, (name, count) in enumerate(sorted(counts.items())):
        for j in range(count):
            if axis is Axis.FILMS_PER_TROPE:
                pairs.append((film(f"Pool{j:05d}"), trope(name)))
            else:
                pairs.append((film(name), trope(f"Pool{j:05d}")))
    return make_snapshot(pairs)


def test_percent_change_values():
    assert percent_change(1075, 3611) == pytest.approx(235.90697674418604)
    assert percent_change(480, 2193) == pytest.approx(356.875)
    assert percent_change(283, 13) == pytest.approx(-95.40636042402827)
    assert percent_change(7, 7) == 0.0


def test_percent_change_undefined():
    with pytest.raises(UndefinedIncrement):
        percent_change(0, 10)
    with pytest.raises(UndefinedIncrement):
        percent_change(None, 10)


@given(st.integers(1, 10**6))
def test_percent_change_identity_is_zero(x):
    assert percent_change(x, x) == 0.0


@given(st.integers(1, 10**4), st.integers(0, 10**6), st.integers(0, 10**6))
@settings(max_examples=200)
def test_percent_change_monotonic_in_new_count(old, a, b):
    if a == b:
        assert percent_change(old, a) == percent_change(old, b)
    else:
        low, high = sorted((a, b))
        assert percent_change(old, low) < percent_change(old, high)


@pytest.mark.parametrize(
    "value,expected",
    [
        (1329.0, "+1,329.0%"),
        (None, "--"),
        (0.0, "+0.0%"),
        (-0.04, "+0.0%"),
        (235.90697674418604, "+235.9%"),
        (-95.40636042402827, "-95.4%"),
        (28716.666666666668, "+28,716.7%"),
        (-0.06, "-0.1%"),
        (120.0, "+120.0%"),
    ],
)
def test_format_percent(value, expected):
    assert format_percent(value) == expected


def test_increment_display_policy():
    assert increment_display(100, 150) == "+50.0%"
    assert increment_display(None, 150) == "--"
    assert increment_display(0, 150) == "--"
    assert increment_display(242, 0) == "--"


@pytest.mark.parametrize(
    "n,expected",
    [
        (0, "0th"),
        (1, "1st"),
        (2, "2nd"),
        (3, "3rd"),
        (4, "4th"),
        (11, "11th"),
        (12, "12th"),
        (13, "13th"),
        (21, "21st"),
        (111, "111th"),
        (212, "212th"),
        (231, "231st"),
        (742, "742nd"),
        (1292, "1,292nd"),
        (16030, "16,030th"),
        (35034, "35,034th"),
    ],
)
def test_ordinal(n, expected):
    assert ordinal(n) == expected


def test_top_n_basic_and_ties():
    snap = counts_snapshot({"Alpha": 3, "Beta": 5, "Gamma": 3})
    assert top_n(snap, Axis.FILMS_PER_TROPE, 2) == [(trope("Beta"), 5), (trope("Alpha"), 3)]
    assert [k.title for k, _ in top_n(snap, Axis.FILMS_PER_TROPE, 10)] == [
        "Beta",
        "Alpha",
        "Gamma",
    ]


def test_top_n_empty_snapshot():
    assert top_n(make_snapshot([]), Axis.TROPES_PER_FILM, 5) == []


def test_top_film_by_trope_count():
    pairs = [(film("JamesBond"), trope(f"T{i:04d}")) for i in range(3611)]
    pairs += [(film("Lesser"), trope(f"T{i:04d}")) for i in range(100)]
    snap = make_snapshot(pairs)
    assert top_n(snap, Axis.TROPES_PER_FILM, 1) == [(film("JamesBond"), 3611)]


def test_top_n_matches_independent_sort():
    import random

    rng = random.Random(13)
    pairs = {(film(f"F{rng.randint(0, 25)}"), trope(f"T{rng.randint(0, 40)}")) for _ in range(250)}
    snap = make_snapshot(pairs)
    expected = sorted(
        ((f, len(ts)) for f, ts in snap.films.items()),
        key=lambda item: (-item[1], item[0].label),
    )
    assert full_ranking(snap, Axis.TROPES_PER_FILM) == expected
    assert top_n(snap, Axis.TROPES_PER_FILM, len(expected)) == expected


def test_top_n_insertion_order_invariance():
    pairs = [
        (film("A"), trope("X")),
        (film("B"), trope("X")),
        (film("B"), trope("Y")),
    ]
    forward = make_snapshot(pairs)
    backward = make_snapshot(list(reversed(pairs)))
    for axis in Axis:
        assert top_n(forward, axis, 10) == top_n(backward, axis, 10)


def test_mark_common_with_rename():
    renames = RenameMap({film("TheAvengers"): film("TheAvengers2012")})
    got = mark_common([film("TheAvengers")], [film("TheAvengers2012")], renames)
    assert got == {film("TheAvengers2012")}


def test_mark_common_disjoint():
    assert mark_common([film("A")], [film("B")], RenameMap.empty()) == set()


def test_rename_map_validation():
    with pytest.raises(ValueError):
        RenameMap({film("A"): film("C"), film("B"): film("C")})  # not injective
    with pytest.raises(ValueError):
        RenameMap({film("A"): film("B"), film("B"): film("C")})  # chain


def test_load_renames(tmp_path):
    path = tmp_path / "renames.txt"
    path.write_text(
        "# film renames between 2016 and 2020\n"
        "Film/TheAvengers Film/TheAvengers2012\n"
        "Film/AlienS\tFilm/Aliens\n"
        "\n",
        encoding="utf-8",
    )
    renames = load_renames(path)
    assert renames.resolve(film("TheAvengers")) == film("TheAvengers2012")
    assert renames.resolve(film("AlienS")) == film("Aliens")
    assert renames.resolve(film("Unmapped")) == film("Unmapped")


def test_load_renames_rejects_bad_lines(tmp_path):
    path = tmp_path / "renames.txt"
    path.write_text("Film/OnlyOneColumn\n", encoding="utf-8")
    with pytest.raises(FormatError):
        load_renames(path)


def test_rank_moves_small():
    old = counts_snapshot({"Alpha": 4, "Beta": 3})
    new = counts_snapshot({"Alpha": 8, "Gamma": 9, "Delta": 2})
    rows = rank_moves(old, new, Axis.FILMS_PER_TROPE, RenameMap.empty(), n=2)
    alpha, beta = rows
    assert alpha.old_name == trope("Alpha")
    assert (alpha.old_count, alpha.new_count) == (4, 8)
    assert alpha.increment_display == "+100.0%"
    assert alpha.rank_move_display == "+1st"
    assert beta.new_count == 0
    assert beta.increment_display == "--"
    assert beta.rank_move_display == "--"


def test_rank_moves_rank_base_one():
    old = counts_snapshot({"Alpha": 4})
    new = counts_snapshot({"Alpha": 8, "Gamma": 9})
    (row,) = rank_moves(old, new, Axis.FILMS_PER_TROPE, RenameMap.empty(), n=1, rank_base=1)
    assert row.rank_move_display == "+2nd"


def test_rank_moves_resolves_renames():
    old = counts_snapshot({"OldName": 4})
    new = counts_snapshot({"NewName": 4, "Bigger": 9})
    renames = RenameMap({trope("OldName"): trope("NewName")})
    (row,) = rank_moves(old, new, Axis.FILMS_PER_TROPE, renames, n=1)
    assert row.old_name == trope("OldName")
    assert row.new_name == trope("NewName")
    assert row.increment_display == "+0.0%"
    assert row.rank_move_display == "+1st"
    # NewName sits outside the new top-1 (Bigger holds it), so not common...
    assert not row.common
    # ...but with n=2 both top lists contain the resolved entity.
    rows = rank_moves(old, new, Axis.FILMS_PER_TROPE, renames, n=2)
    assert rows[0].common


def test_self_diff_all_common_zero_increment():
    snap = counts_snapshot({"Alpha": 4, "Beta": 3, "Gamma": 2})
    table = build_top_table(snap, snap, Axis.FILMS_PER_TROPE, 2, RenameMap.empty())
    assert len(table.rows) == 2
    for row in table.rows:
        assert row.increment_display == "+0.0%"
        assert row.common
        assert row.old_name == row.new_name


def test_top_table_new_entity_shows_dashes():
    old = counts_snapshot({"Alpha": 4})
    new = counts_snapshot({"Fresh": 9})
    table = build_top_table(old, new, Axis.FILMS_PER_TROPE, 1, RenameMap.empty())
    (row,) = table.rows
    assert row.old_name == trope("Alpha")
    assert row.new_name == trope("Fresh")
    assert row.increment_display == "--"
    assert not row.common


def test_top_table_increment_uses_full_old_snapshot():
    # Below the old top list, but its old count still feeds the increment.
    old = counts_snapshot({"Alpha": 40, "Small": 6})
    new = counts_snapshot({"Small": 1729})
    table = build_top_table(old, new, Axis.FILMS_PER_TROPE, 1, RenameMap.empty())
    assert table.rows[0].increment_display == "+28,716.7%"


def test_top_table_rename_marks_both_sides():
    old = counts_snapshot({"OldName": 4, "Other": 2})
    new = counts_snapshot({"NewName": 5, "Fresh": 3})
    renames = RenameMap({trope("OldName"): trope("NewName")})
    table = build_top_table(old, new, Axis.FILMS_PER_TROPE, 2, renames)
    assert trope("OldName") in table.marked_names
    assert trope("NewName") in table.marked_names
    rendered = render_top_table(table, "markdown")
    assert "*Main/OldName*" in rendered
    assert "*Main/NewName*" in rendered
    assert "*Main/Fresh*" not in rendered


def test_render_formats():
    snap = counts_snapshot({"Alpha": 2})
    table = build_top_table(snap, snap, Axis.FILMS_PER_TROPE, 1, RenameMap.empty())
    csv = render_top_table(table, "csv")
    assert csv.splitlines()[0] == "rank,old_name,old_count,new_name,new_count,increment,common"
    assert "Main/Alpha,2,Main/Alpha,2,+0.0%,yes" in csv
    tsv = render_top_table(table, "tsv")
    assert "\t" in tsv.splitlines()[1]
    moves = rank_moves(snap, snap, Axis.FILMS_PER_TROPE, RenameMap.empty(), 1)
    assert "+0th" in render_moves(moves, "csv")
    with pytest.raises(ValueError):
        render_top_table(table, "html")


def make_meta(films, tropes, connections, when=date(2016, 7, 1)):
    return SnapshotMeta(
        captured_at=when,
        film_count=films,
        trope_count=tropes,
        connection_count=connections,
        tool_version="x",
        provenance="test",
    )


def summary(mean, nobs):
    return DescriptiveSummary(nobs, 0, 0, mean, 0.0, None, None)


def test_growth_report_fields():
    old_meta = make_meta(100, 50, 400)
    new_meta = make_meta(200, 150, 1600, when=CAPTURED)
    report = growth_report(
        old_meta,
        new_meta,
        (summary(4.0, 100), summary(8.0, 50)),
        (summary(8.0, 200), summary(32.0, 150)),
    )
    assert report.display("films") == "+100.0%"
    assert report.display("tropes") == "+200.0%"
    assert report.display("mean_tropes_per_film") == "+100.0%"
    assert report.display("mean_films_per_trope") == "+300.0%"
    assert report.display("connections") == "+300.0%"
    rendered = render_growth(report, "csv")
    assert rendered.splitlines()[0] == "metric,old,new,increment"


def test_growth_report_undefined_on_zero_base():
    report = growth_report(
        make_meta(0, 0, 0),
        make_meta(10, 10, 10, when=CAPTURED),
        (summary(0.0, 1), summary(0.0, 1)),
        (summary(1.0, 10), summary(1.0, 10)),
    )
    assert report.display("films") == "--"
    assert report.display("connections") == "--"
