"""Distribution analysis: two-sample K-S tests, chi-square feature ranking,
class distributions, and per-class content-practice summaries.

Everything here reports numbers; rendering is a consumer concern, so ECDFs
and shares are emitted as plain rows, never as images.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptyInput, EmptySample, SingleClass, TooFewSamples
from .features import FEATURE_NAMES
from .ingestion import TweetRecord, extract_user_profiles

KS_TERM_CUTOFF = 1e-10

# Metadata fields whose per-class distributions get compared.
KS_FIELDS: tuple[str, ...] = (
    "followers_count",
    "friends_count",
    "listed_count",
    "statuses_count",
    "favourites_count",
)


@dataclass(frozen=True)
class KSResult:
    d_statistic: float
    p_value: float
    n1: int
    n2: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "d_statistic": self.d_statistic,
            "p_value": self.p_value,
            "n1": self.n1,
            "n2": self.n2,
        }


def _sweep_d(a: np.ndarray, b: np.ndarray) -> float:
    """Max ECDF gap by a two-pointer merge over both sorted samples.

    Ties are consumed from both samples before the gap is measured, so the
    statistic is exact for discrete data.
    """
    n1, n2 = len(a), len(b)
    i = j = 0
    d = 0.0
    while i < n1 or j < n2:
        if j >= n2 or (i < n1 and a[i] <= b[j]):
            x = a[i]
        else:
            x = b[j]
        while i < n1 and a[i] == x:
            i += 1
        while j < n2 and b[j] == x:
            j += 1
        gap = abs(i / n1 - j / n2)
        if gap > d:
            d = gap
    return d


def _p_value(d: float, n_eff: float) -> float:
    """Asymptotic two-sided p: 2 * sum_k (-1)^(k-1) exp(-2 k^2 n_eff d^2),
    truncated when a term drops below 1e-10, clamped into [0, 1]."""
    t = n_eff * d * d
    if t <= 0.0:
        return 1.0
    total = 0.0
    sign = 1.0
    k = 1
    while True:
        term = 2.0 * math.exp(-2.0 * k * k * t)
        if term < KS_TERM_CUTOFF:
            break
        total += sign * term
        sign = -sign
        k += 1
    return min(1.0, max(0.0, total))


def ks_two_sample(sample_a: Sequence[float], sample_b: Sequence[float]) -> KSResult:
    """Two-sample Kolmogorov-Smirnov test.

    Symmetric in its arguments; D = 0 maps to p = 1 exactly.
    """
    a = np.sort(np.asarray(sample_a, dtype=np.float64))
    b = np.sort(np.asarray(sample_b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise EmptySample("both samples must be non-empty")
    d = _sweep_d(a, b)
    n_eff = a.size * b.size / (a.size + b.size)
    return KSResult(
        d_statistic=d, p_value=_p_value(d, n_eff), n1=int(a.size), n2=int(b.size)
    )


def ecdf_points(values: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """(sorted unique values, cumulative fractions), ready for CSV rows."""
    v = np.sort(np.asarray(values, dtype=np.float64))
    if v.size == 0:
        raise EmptySample("empty sample has no ECDF")
    uniq, counts = np.unique(v, return_counts=True)
    return uniq, np.cumsum(counts) / v.size


@dataclass(frozen=True)
class RankedFeature:
    name: str
    chi2: float
    dof: int
    degenerate: bool


@dataclass(frozen=True)
class FeatureRanking:
    bins: int
    features: tuple[RankedFeature, ...]

    def names(self) -> list[str]:
        return [f.name for f in self.features]

    def to_dict(self) -> dict[str, Any]:
        return {
            "bins": self.bins,
            "features": [
                {
                    "name": f.name,
                    "chi2": f.chi2,
                    "dof": f.dof,
                    "degenerate": f.degenerate,
                }
                for f in self.features
            ],
        }


def _bin_column(col: np.ndarray, bins: int) -> np.ndarray:
    """Equal-frequency bin membership via interior quantile edges.

    Duplicate edges collapse, so a column with few distinct values lands in
    fewer bins; a constant column lands in exactly one.
    """
    qs = np.linspace(0, 1, bins + 1)[1:-1]
    edges = np.unique(np.quantile(col, qs))
    return np.searchsorted(edges, col, side="right")


def chi_square_rank(
    X: np.ndarray,
    y: np.ndarray,
    bins: int = 10,
    feature_names: Sequence[str] = FEATURE_NAMES,
) -> FeatureRanking:
    """Rank features by chi-square dependence between binned value and class.

    Expected counts come from the usual row x column marginal product; cells
    with zero expectation contribute nothing. A feature that lands in a
    single bin is flagged degenerate and scored 0. Sorting is stable on
    descending chi2, so ties keep schema order.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2:
        raise ValueError("X must be 2-dimensional")
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y row counts differ")
    if X.shape[0] < bins:
        raise TooFewSamples(f"{X.shape[0]} rows cannot fill {bins} bins")
    if np.unique(y).size < 2:
        raise SingleClass("chi-square ranking needs at least two classes")
    if X.shape[1] != len(feature_names):
        raise ValueError("feature_names width does not match X")

    classes = np.unique(y)
    K = classes.size
    col_of = {int(c): k for k, c in enumerate(classes)}
    yk = np.array([col_of[int(v)] for v in y])
    n = X.shape[0]

    ranked: list[RankedFeature] = []
    for f, name in enumerate(feature_names):
        member = _bin_column(X[:, f], bins)
        B = int(member.max()) + 1
        table = np.bincount(member * K + yk, minlength=B * K).reshape(B, K)
        table = table[table.sum(axis=1) > 0]
        rows = table.shape[0]
        if rows < 2:
            ranked.append(RankedFeature(name, 0.0, 0, True))
            continue
        row_tot = table.sum(axis=1, keepdims=True)
        col_tot = table.sum(axis=0, keepdims=True)
        expected = row_tot * col_tot / n
        mask = expected > 0
        chi2 = float((((table - expected) ** 2)[mask] / expected[mask]).sum())
        nonzero_cols = int((col_tot > 0).sum())
        dof = (rows - 1) * (nonzero_cols - 1)
        ranked.append(RankedFeature(name, chi2, dof, False))

    order = np.argsort([-f.chi2 for f in ranked], kind="stable")
    return FeatureRanking(bins=bins, features=tuple(ranked[i] for i in order))


def label_distribution(labels: Sequence[int], n_classes: int = 4) -> np.ndarray:
    """Percentage of each class among the given labels; sums to 100."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size == 0:
        raise EmptyInput("no labels to summarize")
    counts = np.bincount(labels, minlength=n_classes)
    return counts / labels.size * 100.0


_URL_RE = re.compile(r"https?://", re.IGNORECASE)
_MENTION_RE = re.compile(r"@[^\W_]")


@dataclass(frozen=True)
class ClassPractices:
    tweet_count: int
    user_count: int
    url_share: float
    mention_share: float
    mean_friends: float
    mean_followers: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "tweet_count": self.tweet_count,
            "user_count": self.user_count,
            "url_share": self.url_share,
            "mention_share": self.mention_share,
            "mean_friends": self.mean_friends,
            "mean_followers": self.mean_followers,
        }


@dataclass(frozen=True)
class PracticeReport:
    per_class: dict[int, ClassPractices]
    user_percentages: dict[int, float]
    unmapped_tweets: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "per_class": {
                str(k): v.to_dict() for k, v in sorted(self.per_class.items())
            },
            "user_percentages": {
                str(k): v for k, v in sorted(self.user_percentages.items())
            },
            "unmapped_tweets": self.unmapped_tweets,
        }


def content_practice_report(
    tweets: Iterable[TweetRecord], class_of: Mapping[str, int]
) -> PracticeReport:
    """Per-class tweeting practices: URL and mention shares over tweets,
    mean connectivity over deduplicated users, class shares over users.

    Tweets from users absent from class_of are counted and skipped. Classes
    with no tweets are omitted from per_class.
    """
    tweet_counts: dict[int, int] = {}
    url_counts: dict[int, int] = {}
    mention_counts: dict[int, int] = {}
    per_class_records: dict[int, list[TweetRecord]] = {}
    unmapped = 0
    for rec in tweets:
        cls = class_of.get(rec.user.user_id)
        if cls is None:
            unmapped += 1
            continue
        cls = int(cls)
        tweet_counts[cls] = tweet_counts.get(cls, 0) + 1
        if _URL_RE.search(rec.text):
            url_counts[cls] = url_counts.get(cls, 0) + 1
        if _MENTION_RE.search(rec.text):
            mention_counts[cls] = mention_counts.get(cls, 0) + 1
        per_class_records.setdefault(cls, []).append(rec)

    if not tweet_counts:
        raise EmptyInput("no tweets map to a known class")

    per_class: dict[int, ClassPractices] = {}
    class_profiles = {
        cls: extract_user_profiles(records)
        for cls, records in per_class_records.items()
    }
    total_users = sum(len(p) for p in class_profiles.values())
    for cls, count in tweet_counts.items():
        profiles = class_profiles[cls]
        per_class[cls] = ClassPractices(
            tweet_count=count,
            user_count=len(profiles),
            url_share=url_counts.get(cls, 0) / count,
            mention_share=mention_counts.get(cls, 0) / count,
            mean_friends=float(np.mean([p.friends_count for p in profiles])),
            mean_followers=float(np.mean([p.followers_count for p in profiles])),
        )
    user_percentages = {
        cls: len(class_profiles[cls]) / total_users * 100.0
        for cls in class_profiles
    }
    return PracticeReport(
        per_class=per_class,
        user_percentages=user_percentages,
        unmapped_tweets=unmapped,
    )
