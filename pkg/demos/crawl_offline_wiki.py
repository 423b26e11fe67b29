"""Crawl a tiny offline wiki and persist the snapshot.

Builds a four-page fixture wiki in a temporary directory, runs the
breadth-first crawler over it, and shows how the three discovery routes
(film page, trope page, pagination page) complement each other: one of the
relations below exists only on a pagination page and would be lost to a
film-pages-only scrape.

Run with: python demos/crawl_offline_wiki.py
"""

import json
import tempfile
from datetime import date
from pathlib import Path

from tropegraph import (
    EntityKey,
    EvidenceSource,
    ParserConfig,
    SourceConfig,
    crawl,
    dumps,
    save_snapshot,
)

INDEX = EntityKey("Index", "Films")

PAGES = {
    "Index/Films": """
        <div id="main-article">
          <a href="/pmwiki/pmwiki.php/Film/Aliens">Aliens</a>
          <a href="/pmwiki/pmwiki.php/Film/JamesBond">James Bond</a>
          <a href="/pmwiki/pmwiki.php/Film/GhostFilm">category entry with no page</a>
        </div>
    """,
    "Film/Aliens": """
        <nav><a href="/pmwiki/pmwiki.php/Main/NotARelation">sidebar noise</a></nav>
        <div id="main-article">
          <a href="/pmwiki/pmwiki.php/Main/BigBad">Big Bad</a>
        </div>
    """,
    "Film/JamesBond": """
        <div id="main-article">
          <a href="/pmwiki/pmwiki.php/Main/ShoutOut">Shout Out</a>
          <a href="/pmwiki/pmwiki.php/Main/BigBad">Big Bad</a>
        </div>
    """,
    "Main/BigBad": """
        <div id="main-article">
          <a href="/pmwiki/pmwiki.php/Film/Aliens">Aliens</a>
          <a href="/pmwiki/pmwiki.php/BigBad/Film">continued...</a>
        </div>
    """,
    "Main/ShoutOut": """
        <div id="main-article"><p>no film list on this page</p></div>
    """,
    # Pagination page: lives beside the articles, belongs to Main/BigBad.
    "BigBad/Film": """
        <div id="main-article">
          <a href="/pmwiki/pmwiki.php/Film/OnlyOnPagination">a film listed nowhere else</a>
        </div>
    """,
}


def write_fixture(directory: Path) -> None:
    index = {}
    for i, (label, html) in enumerate(sorted(PAGES.items())):
        name = f"page{i}.html"
        (directory / name).write_text(html, encoding="utf-8")
        index[label] = name
    (directory / "index.json").write_text(json.dumps(index, indent=2), encoding="utf-8")


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        fixture_dir = Path(tmp) / "wiki"
        fixture_dir.mkdir()
        write_fixture(fixture_dir)

        config = SourceConfig.fixture(fixture_dir)
        parser_config = ParserConfig(index_seeds=frozenset({INDEX}))
        snapshot, report = crawl(
            config, [INDEX], parser_config=parser_config, as_of=date(2020, 4, 1)
        )

        print("crawl report")
        print(f"  pages fetched:   {report.pages_fetched}")
        print(f"  pages not found: {report.pages_not_found} (GhostFilm has no page)")
        print(f"  films:           {report.films_discovered}")
        print(f"  tropes:          {report.tropes_discovered}")
        print(f"  relations:       {report.relations_found}")
        print()

        print("how each relation was evidenced")
        for film, tropes in sorted(snapshot.films.items(), key=lambda kv: kv[0].label):
            if not tropes:
                print(f"  {film.label}: no tropes (degree 0)")
            for trope in sorted(tropes, key=lambda k: k.label):
                sources = sorted(
                    ev.source.value for ev in snapshot.evidence_for(film, trope)
                )
                print(f"  {film.label} <-> {trope.label}: {', '.join(sources)}")
        print()

        pagination_only = [
            (f, t)
            for (f, t), evs in snapshot.evidences.items()
            if {ev.source for ev in evs} == {EvidenceSource.PAGINATION_PAGE}
        ]
        print(f"relations only a pagination page knew about: {len(pagination_only)}")

        out = Path(tmp) / "snapshot-2020-04.json"
        save_snapshot(snapshot, out)
        print(f"\nsnapshot saved to {out.name}; first lines of the file:")
        print("\n".join(dumps(snapshot).splitlines()[:10]))


if __name__ == "__main__":
    main()
