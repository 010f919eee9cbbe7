"""Profile feature extraction: the 15-slot Social/Activity/Representation vector.

Derived ratios use natural log with +1 smoothing on both numerator and
denominator, so every feature is finite for any non-negative counts:

    sociability   = ln(1 + (1 + friends)   / (1 + followers))
    favorability  = ln(1 + (1 + favorites) / (1 + tweets))
    survivability = ln(1 + age_days)
    activeness    = ln(1 + (1 + tweets)    / (1 + age_days))

age_days = floor((observed_at - created_at) / 86400).
"""

from __future__ import annotations

import math
import re
from enum import Enum

import numpy as np

from .errors import NegativeAge
from .ingestion import UserProfile


class FeatureCategory(str, Enum):
    SOCIAL = "social"
    ACTIVITY = "activity"
    REPRESENTATION = "representation"
    ALL = "all"


# Slot order is fixed; models, CSV columns, and rankings all key off it.
FEATURE_SCHEMA: tuple[tuple[str, FeatureCategory], ...] = (
    ("friends_count", FeatureCategory.SOCIAL),
    ("followers_count", FeatureCategory.SOCIAL),
    ("sociability", FeatureCategory.SOCIAL),
    ("statuses_count", FeatureCategory.ACTIVITY),
    ("favourites_count", FeatureCategory.ACTIVITY),
    ("listed_count", FeatureCategory.ACTIVITY),
    ("favorability", FeatureCategory.ACTIVITY),
    ("survivability", FeatureCategory.ACTIVITY),
    ("activeness", FeatureCategory.ACTIVITY),
    ("n_hashtags", FeatureCategory.REPRESENTATION),
    ("n_mentions", FeatureCategory.REPRESENTATION),
    ("n_emoticons", FeatureCategory.REPRESENTATION),
    ("n_numerics", FeatureCategory.REPRESENTATION),
    ("url_present", FeatureCategory.REPRESENTATION),
    ("embedding_score", FeatureCategory.REPRESENTATION),
)

FEATURE_NAMES: tuple[str, ...] = tuple(name for name, _ in FEATURE_SCHEMA)
N_FEATURES = len(FEATURE_SCHEMA)

SECONDS_PER_DAY = 86400


def category_slots(category: FeatureCategory | str) -> list[int]:
    """Column indices belonging to a category, in schema order."""
    category = FeatureCategory(category)
    if category is FeatureCategory.ALL:
        return list(range(N_FEATURES))
    return [i for i, (_, cat) in enumerate(FEATURE_SCHEMA) if cat is category]


def sociability(friends_count: int, followers_count: int) -> float:
    return math.log1p((1 + friends_count) / (1 + followers_count))


def favorability(favorites_count: int, tweet_count: int) -> float:
    return math.log1p((1 + favorites_count) / (1 + tweet_count))


def account_age_days(profile: UserProfile) -> int:
    if profile.observed_at < profile.created_at:
        raise NegativeAge(
            f"user {profile.user_id}: observed_at {profile.observed_at} "
            f"precedes created_at {profile.created_at}"
        )
    return (profile.observed_at - profile.created_at) // SECONDS_PER_DAY


def survivability(profile: UserProfile) -> float:
    return math.log1p(account_age_days(profile))


def activeness(status_count: int, profile: UserProfile) -> float:
    return math.log1p((1 + status_count) / (1 + account_age_days(profile)))


# Informality counters. Hashtags/mentions are a sigil followed immediately by
# an alphanumeric ([^\W_] = unicode word chars minus underscore); numerics are
# maximal digit runs.
_HASHTAG_RE = re.compile(r"#[^\W_]")
_MENTION_RE = re.compile(r"@[^\W_]")
_NUMERIC_RE = re.compile(r"\d+")

# ASCII emoticon lexicon, scanned longest-first without overlap.
EMOTICONS: tuple[str, ...] = (
    ":-)", ":-(", ":'(", ";-)",
    ":)", ":(", ":D", ";)", ":P", ":p", ":/", "<3", "xD", "XD",
)
_EMOTICON_STARTS = frozenset(e[0] for e in EMOTICONS)


def _count_emoticons(text: str) -> int:
    count = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in _EMOTICON_STARTS:
            for emo in EMOTICONS:
                if text.startswith(emo, i):
                    count += 1
                    i += len(emo)
                    break
            else:
                i += 1
            continue
        cp = ord(ch)
        if 0x2600 <= cp <= 0x27BF or 0x1F300 <= cp <= 0x1FAFF:
            count += 1
        i += 1
    return count


def informality_counts(bio: str) -> tuple[int, int, int, int]:
    """(hashtags, mentions, emoticons, numerics) in a bio string."""
    return (
        len(_HASHTAG_RE.findall(bio)),
        len(_MENTION_RE.findall(bio)),
        _count_emoticons(bio),
        len(_NUMERIC_RE.findall(bio)),
    )


def extract_features(profile: UserProfile, embedding_score: float) -> np.ndarray:
    """Full 15-slot float64 vector for one profile.

    The embedding score is computed elsewhere (it needs a trained model) and
    injected here; it must be finite.
    """
    if not math.isfinite(embedding_score):
        raise ValueError("embedding_score must be finite")
    hashtags, mentions, emoticons, numerics = informality_counts(profile.bio)
    return np.array(
        [
            profile.friends_count,
            profile.followers_count,
            sociability(profile.friends_count, profile.followers_count),
            profile.statuses_count,
            profile.favourites_count,
            profile.listed_count,
            favorability(profile.favourites_count, profile.statuses_count),
            survivability(profile),
            activeness(profile.statuses_count, profile),
            hashtags,
            mentions,
            emoticons,
            numerics,
            1.0 if profile.profile_url_present else 0.0,
            embedding_score,
        ],
        dtype=np.float64,
    )


def project_category(
    values: np.ndarray, category: FeatureCategory | str
) -> np.ndarray:
    """Select the columns of one category from 15-wide vectors or matrices."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape[-1] != N_FEATURES:
        raise ValueError(
            f"expected {N_FEATURES} feature columns, got {values.shape[-1]}"
        )
    return values[..., category_slots(category)]
