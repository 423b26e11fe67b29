"""Descriptive statistics and degree distributions over either snapshot axis.

Conventions are pinned once and for all: sample variance (n-1 denominator),
skewness and excess kurtosis from biased population moments. Zero-variance
input yields undefined markers for skewness/kurtosis rather than an error,
so degenerate fixtures still render reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import EmptyInput
from .model import BipartiteSnapshot


class Axis(Enum):
    """Which side of the bipartite relation the per-entity degrees come from."""

    TROPES_PER_FILM = "films"
    FILMS_PER_TROPE = "tropes"

    @classmethod
    def from_token(cls, token: str) -> Axis:
        for axis in cls:
            if axis.value == token:
                return axis
        raise ValueError(f"unknown axis {token!r} (expected 'films' or 'tropes')")


@dataclass(frozen=True)
class DescriptiveSummary:
    """The seven headline statistics of one degree distribution."""

    nobs: int
    minimum: float
    maximum: float
    mean: float
    variance: float
    skewness: float | None
    kurtosis: float | None


@dataclass(frozen=True)
class BoxplotSummary:
    q1: float
    median: float
    q3: float
    iqr: float
    whisker_low: float
    whisker_high: float
    outlier_count: int


def degree_sequence(snapshot: BipartiteSnapshot, axis: Axis) -> list[int]:
    """Per-entity degrees, sorted ascending. Zero-degree films are included."""
    if axis is Axis.TROPES_PER_FILM:
        return sorted(len(tropes) for tropes in snapshot.films.values())
    return sorted(len(films) for films in snapshot.tropes.values())


def describe(values) -> DescriptiveSummary:
    """Summarize a sequence of numbers.

    mean = sum(x)/n; variance = sum((x-mean)^2)/(n-1); skewness = m3/m2^1.5
    and kurtosis = m4/m2^2 - 3 with m_k the biased population moments. All
    values equal (m2 = 0) is not an error: variance is 0 and skewness and
    kurtosis are None.
    """
    x = np.asarray(list(values), dtype=float)
    n = x.size
    if n == 0:
        raise EmptyInput("describe() needs at least one observation")
    mean = float(x.mean())
    minimum = float(x.min())
    maximum = float(x.max())
    if minimum == maximum:
        return DescriptiveSummary(n, minimum, maximum, mean, 0.0, None, None)
    d = x - mean
    d2 = d * d
    m2 = float(d2.mean())
    m3 = float((d2 * d).mean())
    m4 = float((d2 * d2).mean())
    variance = float(d2.sum() / (n - 1))
    skewness = m3 / m2**1.5
    kurtosis = m4 / m2**2 - 3.0
    return DescriptiveSummary(n, minimum, maximum, mean, variance, skewness, kurtosis)


def histogram(snapshot: BipartiteSnapshot, axis: Axis) -> dict[int, int]:
    """Exact degree -> entity-count mapping; degrees with zero count omitted."""
    counts: dict[int, int] = {}
    for degree in degree_sequence(snapshot, axis):
        counts[degree] = counts.get(degree, 0) + 1
    return counts


def boxplot(values) -> BoxplotSummary:
    """Five-number boxplot summary.

    Quartiles interpolate linearly between order statistics (quantile p sits
    at position (n-1)*p). Whiskers sit on the most extreme data points within
    1.5*IQR of the quartiles; everything outside is an outlier.
    """
    x = np.asarray(list(values), dtype=float)
    if x.size == 0:
        raise EmptyInput("boxplot() needs at least one observation")
    q1, median, q3 = (float(q) for q in np.quantile(x, [0.25, 0.5, 0.75]))
    iqr = q3 - q1
    low_fence = q1 - 1.5 * iqr
    high_fence = q3 + 1.5 * iqr
    inside = x[(x >= low_fence) & (x <= high_fence)]
    whisker_low = float(inside.min())
    whisker_high = float(inside.max())
    outlier_count = int(x.size - inside.size)
    return BoxplotSummary(q1, median, q3, iqr, whisker_low, whisker_high, outlier_count)


def _fmt(value: float | int | None) -> str:
    if value is None:
        return "undefined"
    return f"{value:.3f}"


def describe_rows(summary: DescriptiveSummary) -> list[tuple[str, str]]:
    """The seven statistics as (name, value) rows, report order."""
    return [
        ("min", _fmt(summary.minimum)),
        ("max", _fmt(summary.maximum)),
        ("nobs", _fmt(summary.nobs)),
        ("mean", _fmt(summary.mean)),
        ("kurtosis", _fmt(summary.kurtosis)),
        ("skewness", _fmt(summary.skewness)),
        ("variance", _fmt(summary.variance)),
    ]


def histogram_rows(counts: dict[int, int]) -> list[tuple[str, str]]:
    return [(str(degree), str(count)) for degree, count in sorted(counts.items())]


def boxplot_rows(summary: BoxplotSummary) -> list[tuple[str, str]]:
    return [
        ("q1", _fmt(summary.q1)),
        ("median", _fmt(summary.median)),
        ("q3", _fmt(summary.q3)),
        ("iqr", _fmt(summary.iqr)),
        ("whisker_low", _fmt(summary.whisker_low)),
        ("whisker_high", _fmt(summary.whisker_high)),
        ("outlier_count", str(summary.outlier_count)),
    ]


def rows_to_csv(header: tuple[str, str], rows: list[tuple[str, str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"
