"""Exception types shared across the toolchain."""


class TropegraphError(Exception):
    """Base class for all tropegraph errors."""


class NotAWikiPage(TropegraphError):
    """URL does not resolve to a wiki article path."""


class KindConflict(TropegraphError):
    """An entity key was registered both as a film and as a trope."""


class FormatError(TropegraphError):
    """A dataset or fixture file is malformed; the message carries context."""


class MetaMismatch(TropegraphError):
    """Stored dataset counts disagree with the counts recomputed on load."""


class ConfigError(TropegraphError):
    """A source configuration is unusable (bad mode, unreadable fixture, ...)."""


class EmptyCrawl(TropegraphError):
    """No seed page could be retrieved, so the crawl produced nothing."""


class UnownedPagination(TropegraphError):
    """A pagination page's owner is not a known film or trope."""


class EmptyInput(TropegraphError):
    """A statistic was requested over zero observations."""


class UndefinedIncrement(TropegraphError):
    """Percent change is undefined because the old count is absent or zero."""


class FileUnreadable(TropegraphError):
    """An input file could not be opened or read."""
