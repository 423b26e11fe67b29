"""tropegraph: crawl a film/trope wiki into dated bipartite snapshots,
then describe and compare them.

The public surface, by area:

- model/storage: EntityKey identity, BipartiteSnapshot, deterministic
  JSON persistence.
- fetch/parse/crawl: polite page retrieval (live or fixture), link
  extraction, three-route relation discovery, breadth-first crawling.
- stats: descriptive summaries, degree histograms, boxplot summaries.
- compare: top-N tables, increments, rank moves, rename handling,
  aggregate growth.
- legacy: importer for old line-oriented triple dumps.
- cli: the `tropegraph` command.
"""

from ._version import __version__
from .compare import (
    DiffRow,
    GrowthReport,
    RenameMap,
    TopTable,
    build_top_table,
    format_percent,
    growth_report,
    mark_common,
    percent_change,
    rank_moves,
    top_n,
)
from .crawl import CrawlLimits, CrawlReport, crawl, recrawl_idempotence_check
from .errors import (
    ConfigError,
    EmptyCrawl,
    EmptyInput,
    FileUnreadable,
    FormatError,
    KindConflict,
    MetaMismatch,
    NotAWikiPage,
    TropegraphError,
    UndefinedIncrement,
    UnownedPagination,
)
from .fetch import (
    FetchResult,
    FetchStatus,
    FixtureSource,
    LiveSource,
    MemorySource,
    SourceConfig,
    fetch,
    open_source,
)
from .legacy import import_legacy
from .model import (
    BipartiteSnapshot,
    EntityKey,
    EntityKind,
    EvidenceSource,
    RelationEvidence,
    canonicalize_url,
    connection_count,
)
from .parse import (
    KindRegistry,
    PageKind,
    ParsedPage,
    ParserConfig,
    classify_page,
    extract_relations,
    extract_wiki_links,
    parse_page,
)
from .stats import (
    Axis,
    BoxplotSummary,
    DescriptiveSummary,
    boxplot,
    degree_sequence,
    describe,
    histogram,
)
from .storage import SnapshotMeta, dumps, load_snapshot, loads, meta_of, save_snapshot

__all__ = [
    "__version__",
    "Axis",
    "BipartiteSnapshot",
    "BoxplotSummary",
    "ConfigError",
    "CrawlLimits",
    "CrawlReport",
    "DescriptiveSummary",
    "DiffRow",
    "EmptyCrawl",
    "EmptyInput",
    "EntityKey",
    "EntityKind",
    "EvidenceSource",
    "FetchResult",
    "FetchStatus",
    "FileUnreadable",
    "FixtureSource",
    "FormatError",
    "GrowthReport",
    "KindConflict",
    "KindRegistry",
    "LiveSource",
    "MemorySource",
    "MetaMismatch",
    "NotAWikiPage",
    "PageKind",
    "ParsedPage",
    "ParserConfig",
    "RelationEvidence",
    "RenameMap",
    "SnapshotMeta",
    "SourceConfig",
    "TopTable",
    "TropegraphError",
    "UndefinedIncrement",
    "UnownedPagination",
    "boxplot",
    "build_top_table",
    "canonicalize_url",
    "classify_page",
    "connection_count",
    "crawl",
    "degree_sequence",
    "describe",
    "dumps",
    "extract_relations",
    "extract_wiki_links",
    "fetch",
    "format_percent",
    "growth_report",
    "histogram",
    "import_legacy",
    "load_snapshot",
    "loads",
    "mark_common",
    "meta_of",
    "open_source",
    "parse_page",
    "percent_change",
    "rank_moves",
    "recrawl_idempotence_check",
    "save_snapshot",
    "top_n",
]
