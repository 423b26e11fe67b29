from __future__ import annotations

import random

import pytest

from helpers import CAPTURED, film, relation_set, trope
from tropegraph import (
    CrawlLimits,
    EmptyCrawl,
    EntityKey,
    EvidenceSource,
    MemorySource,
    ParserConfig,
    SourceConfig,
    crawl,
    dumps,
    recrawl_idempotence_check,
)
from wiki_fixtures import (
    FILM,
    INDEX_KEY,
    PAGINATION,
    TROPE,
    build_wiki,
    page_html,
    write_fixture_dir,
)

CONFIG = ParserConfig(index_seeds=frozenset({INDEX_KEY}))


def shared_trope_wiki() -> dict[str, str]:
    """One index, two films, one shared trope listed on all three articles."""
    return {
        INDEX_KEY.label: page_html("Index", ["/pmwiki/pmwiki.php/Film/A", "/pmwiki/pmwiki.php/Film/B"]),
        "Film/A": page_html("A", ["/pmwiki/pmwiki.php/Main/Shared"]),
        "Film/B": page_html("B", ["/pmwiki/pmwiki.php/Main/Shared"]),
        "Main/Shared": page_html(
            "Shared", ["/pmwiki/pmwiki.php/Film/A", "/pmwiki/pmwiki.php/Film/B"]
        ),
    }


def run_crawl(pages, **kwargs):
    source = MemorySource(dict(pages))
    kwargs.setdefault("parser_config", CONFIG)
    kwargs.setdefault("as_of", CAPTURED)
    snapshot, report = crawl(source, [INDEX_KEY], **kwargs)
    return snapshot, report, source


def test_two_films_one_shared_trope():
    snapshot, report, _ = run_crawl(shared_trope_wiki())
    assert snapshot.film_count == 2
    assert snapshot.trope_count == 1
    assert snapshot.connection_count == 2
    for name in ("A", "B"):
        sources = {ev.source for ev in snapshot.evidence_for(film(name), trope("Shared"))}
        assert sources == {EvidenceSource.FILM_PAGE, EvidenceSource.TROPE_PAGE}
    assert report.relations_found == 2
    assert report.films_discovered == 2
    assert report.tropes_discovered == 1


def test_max_pages_one_visits_only_the_index():
    snapshot, report, _ = run_crawl(shared_trope_wiki(), limits=CrawlLimits(max_pages=1))
    assert snapshot.connection_count == 0
    assert snapshot.film_count == 0
    assert report.pages_fetched == 1


def test_max_depth_stops_before_trope_pages():
    snapshot, report, _ = run_crawl(shared_trope_wiki(), limits=CrawlLimits(max_depth=1))
    # Depth 0 is the index, depth 1 the films; the trope page is never read.
    assert snapshot.connection_count == 2
    for name in ("A", "B"):
        sources = {ev.source for ev in snapshot.evidence_for(film(name), trope("Shared"))}
        assert sources == {EvidenceSource.FILM_PAGE}
    assert report.pages_fetched == 3


def test_pagination_only_relation_is_recovered():
    pages = {
        INDEX_KEY.label: page_html("Index", ["/pmwiki/pmwiki.php/Film/C"]),
        "Film/C": page_html("C", ["/pmwiki/pmwiki.php/C/TropesAToZ"]),
        "C/TropesAToZ": page_html("C continued", ["/pmwiki/pmwiki.php/Main/Solo"]),
    }
    snapshot, _, _ = run_crawl(pages)
    assert relation_set(snapshot) == {(film("C"), trope("Solo"))}
    sources = {ev.source for ev in snapshot.evidence_for(film("C"), trope("Solo"))}
    assert sources == {EvidenceSource.PAGINATION_PAGE}


def test_not_found_films_get_degree_zero():
    pages = shared_trope_wiki()
    pages[INDEX_KEY.label] = page_html(
        "Index",
        [
            "/pmwiki/pmwiki.php/Film/A",
            "/pmwiki/pmwiki.php/Film/B",
            "/pmwiki/pmwiki.php/Film/PhantomEntry",
        ],
    )
    snapshot, report, _ = run_crawl(pages)
    assert snapshot.film_degree(film("PhantomEntry")) == 0
    assert report.pages_not_found == 1
    assert min(len(ts) for ts in snapshot.films.values()) == 0


def test_failed_pages_are_reported_not_fatal():
    pages = shared_trope_wiki()
    pages["Film/B"] = MemorySource.FAIL
    snapshot, report, _ = run_crawl(pages)
    assert report.pages_failed == 1
    assert report.failed_urls == [film("B").path]
    # Relations from the other routes survive.
    assert (film("B"), trope("Shared")) in relation_set(snapshot)


def test_no_page_fetched_twice():
    fixture = build_wiki(random.Random(1), 12, 20, 60)
    source = fixture.memory_source()
    crawl(source, fixture.seeds, parser_config=fixture.parser_config, as_of=CAPTURED)
    assert all(count == 1 for count in source.fetch_counts.values())


def test_empty_crawl_raises():
    with pytest.raises(EmptyCrawl):
        crawl(MemorySource({}), [INDEX_KEY], parser_config=CONFIG, as_of=CAPTURED)


def test_seeds_must_be_nonempty():
    with pytest.raises(ValueError):
        crawl(MemorySource({}), [], parser_config=CONFIG)


def test_worker_count_does_not_change_output():
    fixture = build_wiki(random.Random(2), 25, 40, 160, phantom_films=2)
    outputs = []
    for workers in (1, 4):
        snapshot, _, _ = run_crawl(
            fixture.pages, parser_config=fixture.parser_config, workers=workers
        )
        outputs.append(dumps(snapshot))
    assert outputs[0] == outputs[1]


def test_union_of_three_routes():
    f1, f2 = film("F0000"), film("F0001")
    t1, t2 = trope("T0000"), trope("T0001")
    plantings = {
        (f1, t1): frozenset({FILM}),
        (f1, t2): frozenset({TROPE}),
        (f2, t1): frozenset({PAGINATION}),
        (f2, t2): frozenset({FILM, TROPE, PAGINATION}),
    }
    fixture = build_wiki(random.Random(3), 2, 2, 4, plantings=plantings)
    snapshot, _, _ = run_crawl(fixture.pages, parser_config=fixture.parser_config)
    assert relation_set(snapshot) == set(plantings)
    sources = {ev.source for ev in snapshot.evidence_for(f2, t2)}
    assert sources == {
        EvidenceSource.FILM_PAGE,
        EvidenceSource.TROPE_PAGE,
        EvidenceSource.PAGINATION_PAGE,
    }


def test_progress_callback_reports_each_level():
    calls = []
    run_crawl(shared_trope_wiki(), progress=lambda done, frontier: calls.append((done, frontier)))
    assert calls[0] == (1, 2)
    assert [done for done, _ in calls] == sorted(done for done, _ in calls)
    assert calls[-1][1] == 0


def test_crawl_from_fixture_directory(tmp_path):
    fixture = build_wiki(random.Random(4), 8, 12, 30)
    directory = write_fixture_dir(fixture, tmp_path / "wiki")
    config = SourceConfig.fixture(directory)
    snapshot, report = crawl(
        config, fixture.seeds, parser_config=fixture.parser_config, as_of=CAPTURED
    )
    assert relation_set(snapshot) == fixture.relations
    assert report.relations_found == len(fixture.relations)


def test_recrawl_idempotence_on_fixture_directory(tmp_path):
    fixture = build_wiki(random.Random(5), 6, 9, 20)
    directory = write_fixture_dir(fixture, tmp_path / "wiki")
    config = SourceConfig.fixture(directory)
    assert recrawl_idempotence_check(
        config, fixture.seeds, parser_config=fixture.parser_config, as_of=CAPTURED
    )


def test_link_order_on_pages_does_not_matter():
    pages = shared_trope_wiki()
    reordered = dict(pages)
    reordered["Main/Shared"] = page_html(
        "Shared", ["/pmwiki/pmwiki.php/Film/B", "/pmwiki/pmwiki.php/Film/A"]
    )
    reordered[INDEX_KEY.label] = page_html(
        "Index", ["/pmwiki/pmwiki.php/Film/B", "/pmwiki/pmwiki.php/Film/A"]
    )
    snap_a, _, _ = run_crawl(pages)
    snap_b, _, _ = run_crawl(reordered)
    assert dumps(snap_a) == dumps(snap_b)


def test_scope_limits_enqueueing():
    snapshot, report, _ = run_crawl(
        shared_trope_wiki(), limits=CrawlLimits(scope=frozenset({"Film"}))
    )
    # Trope pages are outside the scope: film-side evidence only.
    sources = {ev.source for ev in snapshot.evidence_for(film("A"), trope("Shared"))}
    assert sources == {EvidenceSource.FILM_PAGE}
    assert report.pages_fetched == 3
