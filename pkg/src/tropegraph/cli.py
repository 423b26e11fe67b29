"""Command-line entry point for reproducible batch runs.

Exit codes: 0 success, 1 usage error, 2 input/format error, 3 empty crawl.
Reports go to stdout, diagnostics to stderr; for fixture inputs every
command's output is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import sys
from datetime import date
from pathlib import Path

from . import compare, stats
from .crawl import CrawlLimits, crawl
from .errors import (
    ConfigError,
    EmptyCrawl,
    FileUnreadable,
    FormatError,
    MetaMismatch,
    TropegraphError,
)
from .fetch import SourceConfig
from .legacy import DEFAULT_FEATURE_PREDICATES, import_legacy
from .model import EntityKey
from .parse import DEFAULT_CONFIG, ParserConfig
from .storage import load_snapshot, meta_of, save_snapshot


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _entity(label: str) -> EntityKey:
    try:
        return EntityKey.from_label(label)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _iso_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tropegraph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    scrape = sub.add_parser("scrape", help="crawl a wiki (live or fixture) into a dataset")
    mode = scrape.add_mutually_exclusive_group(required=True)
    mode.add_argument("--base-url", help="live site root, e.g. https://example.wiki")
    mode.add_argument("--fixture", help="fixture directory with an index.json")
    scrape.add_argument("--seed", dest="seeds", type=_entity, action="append", required=True,
                        metavar="NS/TITLE", help="index page to start from (repeatable)")
    scrape.add_argument("--out", required=True, help="dataset file to write")
    scrape.add_argument("--max-pages", type=int)
    scrape.add_argument("--max-depth", type=int)
    scrape.add_argument("--scope", action="append", metavar="NAMESPACE",
                        help="namespace eligible for enqueueing (repeatable)")
    scrape.add_argument("--workers", type=int, default=4)
    scrape.add_argument("--as-of", type=_iso_date, help="capture date, default today")
    scrape.add_argument("--min-interval", type=float, default=1.0)
    scrape.add_argument("--max-retries", type=int, default=3)
    scrape.add_argument("--cache-dir")
    scrape.add_argument("--user-agent")
    scrape.add_argument("--article-id", default=DEFAULT_CONFIG.article_container_id,
                        help="id of the article body container")
    scrape.add_argument("--film-namespace", default=DEFAULT_CONFIG.film_namespace)
    scrape.add_argument("--trope-namespace", action="append", dest="trope_namespaces",
                        help="namespace holding trope articles (repeatable, default Main)")

    imp = sub.add_parser("import-legacy", help="build a dataset from an n-triples dump")
    imp.add_argument("--triples", required=True, help="line-oriented triples file")
    imp.add_argument("--out", required=True)
    imp.add_argument("--predicate", action="append", dest="predicates", metavar="IRI",
                     help="feature predicate IRI (repeatable; default: the known legacy one)")
    imp.add_argument("--as-of", type=_iso_date)

    st = sub.add_parser("stats", help="seven descriptive statistics of one axis")
    st.add_argument("--dataset", required=True)
    st.add_argument("--axis", choices=["films", "tropes"], required=True)
    st.add_argument("--format", choices=["csv", "tsv", "markdown"], default="csv")
    st.add_argument("--boxplot", action="store_true", help="emit the boxplot summary instead")

    hist = sub.add_parser("hist", help="degree frequency histogram of one axis")
    hist.add_argument("--dataset", required=True)
    hist.add_argument("--axis", choices=["films", "tropes"], required=True)
    hist.add_argument("--format", choices=["csv", "tsv", "markdown"], default="csv")
    hist.add_argument("--out", help="write to a file instead of stdout")

    diff = sub.add_parser("diff", help="compare the top lists of two datasets")
    diff.add_argument("--old", required=True)
    diff.add_argument("--new", required=True)
    diff.add_argument("--axis", choices=["films", "tropes"], default="films")
    diff.add_argument("--top", type=int, default=50)
    diff.add_argument("--renames", help="two-column old/new mapping file")
    diff.add_argument("--rank-base", type=int, choices=[0, 1], default=0)
    diff.add_argument("--format", choices=["markdown", "csv", "tsv"], default="markdown")
    diff.add_argument("--moves", action="store_true",
                      help="report where the old top entries moved to instead")

    growth = sub.add_parser("growth", help="aggregate growth between two datasets")
    growth.add_argument("--old", required=True)
    growth.add_argument("--new", required=True)
    growth.add_argument("--format", choices=["markdown", "csv", "tsv"], default="markdown")

    return parser


def _rows_out(rows, fmt: str, header: tuple[str, str]) -> str:
    if fmt == "csv":
        return stats.rows_to_csv(header, rows)
    if fmt == "tsv":
        lines = ["\t".join(header)] + ["\t".join(row) for row in rows]
        return "\n".join(lines) + "\n"
    lines = [f"| {header[0]} | {header[1]} |", "| --- | --- |"]
    lines += [f"| {name} | {value} |" for name, value in rows]
    return "\n".join(lines) + "\n"


def _load_axis(args) -> tuple:
    snapshot = load_snapshot(args.dataset)
    return snapshot, stats.Axis.from_token(args.axis)


def _cmd_scrape(args) -> int:
    if args.fixture:
        config = SourceConfig.fixture(args.fixture)
    else:
        config = SourceConfig.live(
            args.base_url,
            min_interval=args.min_interval,
            max_retries=args.max_retries,
            cache_dir=args.cache_dir,
            **({"user_agent": args.user_agent} if args.user_agent else {}),
        )
    trope_namespaces = frozenset(args.trope_namespaces or DEFAULT_CONFIG.trope_namespaces)
    parser_config = ParserConfig(
        article_container_id=args.article_id,
        film_namespace=args.film_namespace,
        trope_namespaces=trope_namespaces,
        index_seeds=frozenset(args.seeds),
    )
    limits = CrawlLimits(
        max_pages=args.max_pages,
        max_depth=args.max_depth,
        scope=frozenset(args.scope) if args.scope else None,
    )
    snapshot, report = crawl(
        config,
        args.seeds,
        limits,
        parser_config=parser_config,
        workers=args.workers,
        as_of=args.as_of,
    )
    save_snapshot(snapshot, args.out)
    print(f"dataset written to {args.out}")
    print(f"pages fetched: {report.pages_fetched}")
    print(f"pages not found: {report.pages_not_found}")
    print(f"pages failed: {report.pages_failed}")
    print(f"films: {report.films_discovered}")
    print(f"tropes: {report.tropes_discovered}")
    print(f"relations: {report.relations_found}")
    for url in report.failed_urls:
        print(f"failed: {url}", file=sys.stderr)
    return 0


def _cmd_import_legacy(args) -> int:
    predicates = frozenset(args.predicates) if args.predicates else DEFAULT_FEATURE_PREDICATES
    snapshot, report = import_legacy(args.triples, predicates, as_of=args.as_of)
    save_snapshot(snapshot, args.out)
    print(f"dataset written to {args.out}")
    print(f"relations imported: {report.relations_imported}")
    print(
        f"skipped: {report.skipped_predicate} other predicates, "
        f"{report.skipped_nonmatching} non-matching resources, "
        f"{report.skipped_malformed} malformed lines",
        file=sys.stderr,
    )
    if report.zero_relations:
        print("warning: no relations matched; check the predicate set", file=sys.stderr)
    return 0


def _cmd_stats(args) -> int:
    snapshot, axis = _load_axis(args)
    values = stats.degree_sequence(snapshot, axis)
    if args.boxplot:
        rows = stats.boxplot_rows(stats.boxplot(values))
    else:
        rows = stats.describe_rows(stats.describe(values))
    sys.stdout.write(_rows_out(rows, args.format, ("statistic", "value")))
    return 0


def _cmd_hist(args) -> int:
    snapshot, axis = _load_axis(args)
    rows = stats.histogram_rows(stats.histogram(snapshot, axis))
    text = _rows_out(rows, args.format, ("degree", "count"))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"histogram written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_diff(args) -> int:
    old_snap = load_snapshot(args.old)
    new_snap = load_snapshot(args.new)
    axis = stats.Axis.from_token(args.axis)
    renames = compare.load_renames(args.renames) if args.renames else compare.RenameMap.empty()
    if args.moves:
        rows = compare.rank_moves(old_snap, new_snap, axis, renames, args.top, args.rank_base)
        sys.stdout.write(compare.render_moves(rows, args.format))
    else:
        table = compare.build_top_table(old_snap, new_snap, axis, args.top, renames)
        sys.stdout.write(compare.render_top_table(table, args.format))
    return 0


def _cmd_growth(args) -> int:
    old_snap = load_snapshot(args.old)
    new_snap = load_snapshot(args.new)

    def summaries(snapshot):
        return tuple(
            stats.describe(stats.degree_sequence(snapshot, axis) or [0])
            for axis in (stats.Axis.TROPES_PER_FILM, stats.Axis.FILMS_PER_TROPE)
        )

    report = compare.growth_report(
        meta_of(old_snap), meta_of(new_snap), summaries(old_snap), summaries(new_snap)
    )
    sys.stdout.write(compare.render_growth(report, args.format))
    return 0


_COMMANDS = {
    "scrape": _cmd_scrape,
    "import-legacy": _cmd_import_legacy,
    "stats": _cmd_stats,
    "hist": _cmd_hist,
    "diff": _cmd_diff,
    "growth": _cmd_growth,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except EmptyCrawl as exc:
        print(f"empty crawl: {exc}", file=sys.stderr)
        return 3
    except (FormatError, MetaMismatch, ConfigError, FileUnreadable) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except TropegraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
