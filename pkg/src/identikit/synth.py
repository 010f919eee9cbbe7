"""Synthetic labeled tweet streams for benchmarks and pipeline tests.

The default spec draws four identity classes with deliberately overlapping
marginals: no single feature category separates everything, but the union
does. Class counts use largest-remainder allocation (not multinomial draws),
so requested proportions hold exactly up to integer rounding for any seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np

from .errors import InvalidSpec

OBSERVED_AT_DEFAULT = 1475280000  # 2016-10-01T00:00:00Z

ORG_POOL = (
    "official", "updates", "news", "agency", "relief", "response", "public",
    "safety", "emergency", "services", "department", "national", "regional",
    "alerts", "information", "communications", "media", "office", "bureau",
    "team",
)
AFFIL_POOL = (
    "coordinator", "volunteer", "director", "manager", "officer", "member",
    "works", "serving", "organizer", "field", "program", "community",
    "outreach", "deployed", "liaison", "staff", "responder", "advocate",
    "leads", "partner",
)
CASUAL_POOL = (
    "love", "life", "music", "coffee", "dreams", "travel", "happy", "family",
    "friends", "living", "enjoying", "sunshine", "foodie", "gamer", "artist",
    "dreamer", "wanderlust", "vibes", "blessed", "chasing",
)
NOISE_POOL = (
    "win", "free", "click", "follow", "back", "hot", "deals", "cash", "prize",
    "link", "bonus", "gift", "promo", "offer", "instant", "daily", "crypto",
    "earn", "fast", "easy",
)
FILLER_POOL = (
    "weather", "water", "road", "closed", "stay", "safe", "help", "need",
    "shelter", "open", "volunteers", "supplies", "power", "outage", "update",
    "area", "river", "rising", "evacuation", "residents",
)
HANDLE_POOL = (
    "redhelp", "cityofficial", "reliefworks", "stormwatch", "safetyfirst",
    "localnews",
)
EVENT_TERMS = ("floodwatch", "rescue efforts", "#stormrelief")
BIO_EMOTICONS = (":)", ":D", ";)", "<3", ":/")

_COUNT_CAP = 5_000_000
_AGE_CAP_DAYS = 5400


@dataclass(frozen=True)
class ClassSpec:
    """One identity class: lognormal (mu, sigma) per count field, plus bio
    and tweet composition probabilities."""

    proportion: float
    friends: tuple[float, float]
    followers: tuple[float, float]
    statuses: tuple[float, float]
    favourites: tuple[float, float]
    listed: tuple[float, float]
    age_days: tuple[float, float]
    bio_pool: tuple[str, ...]
    bio_length: tuple[int, int]
    bio_empty_prob: float
    hashtag_prob: float
    mention_prob: float
    emoticon_prob: float
    numeric_prob: float
    url_prob: float
    tweets_per_user: tuple[int, int]
    tweet_url_prob: float
    tweet_mention_prob: float


@dataclass(frozen=True)
class SynthSpec:
    classes: tuple[ClassSpec, ...]
    observed_at: int = OBSERVED_AT_DEFAULT
    event_terms: tuple[str, ...] = EVENT_TERMS
    filler_pool: tuple[str, ...] = FILLER_POOL
    handle_pool: tuple[str, ...] = HANDLE_POOL
    keyword_prob: float = 0.9


def default_spec() -> SynthSpec:
    organization = ClassSpec(
        proportion=0.25,
        friends=(5.0, 1.0),
        followers=(8.0, 1.2),
        statuses=(8.6, 0.8),
        favourites=(3.2, 1.2),
        listed=(3.8, 0.9),
        age_days=(6.8, 0.6),
        bio_pool=ORG_POOL,
        bio_length=(4, 8),
        bio_empty_prob=0.02,
        hashtag_prob=0.5,
        mention_prob=0.15,
        emoticon_prob=0.02,
        numeric_prob=0.35,
        url_prob=0.9,
        tweets_per_user=(1, 3),
        tweet_url_prob=0.7,
        tweet_mention_prob=0.25,
    )
    affiliated = ClassSpec(
        proportion=0.20,
        friends=(6.8, 0.9),
        followers=(6.9, 1.0),
        statuses=(7.6, 0.9),
        favourites=(6.4, 1.0),
        listed=(2.6, 0.9),
        age_days=(6.6, 0.7),
        bio_pool=AFFIL_POOL,
        bio_length=(5, 10),
        bio_empty_prob=0.03,
        hashtag_prob=0.45,
        mention_prob=0.8,
        emoticon_prob=0.1,
        numeric_prob=0.3,
        url_prob=0.75,
        tweets_per_user=(1, 4),
        tweet_url_prob=0.45,
        tweet_mention_prob=0.6,
    )
    non_affiliated = ClassSpec(
        proportion=0.35,
        friends=(5.8, 1.0),
        followers=(4.8, 1.2),
        statuses=(6.8, 1.1),
        favourites=(7.8, 1.0),
        listed=(0.8, 0.9),
        age_days=(6.4, 0.8),
        bio_pool=CASUAL_POOL,
        bio_length=(3, 8),
        bio_empty_prob=0.15,
        hashtag_prob=0.3,
        mention_prob=0.25,
        emoticon_prob=0.7,
        numeric_prob=0.2,
        url_prob=0.25,
        tweets_per_user=(1, 3),
        tweet_url_prob=0.15,
        tweet_mention_prob=0.45,
    )
    noise = ClassSpec(
        proportion=0.20,
        friends=(5.6, 1.2),
        followers=(4.6, 1.4),
        statuses=(6.6, 1.2),
        favourites=(3.4, 1.4),
        listed=(0.4, 1.0),
        age_days=(3.6, 1.0),
        bio_pool=NOISE_POOL,
        bio_length=(2, 6),
        bio_empty_prob=0.5,
        hashtag_prob=0.1,
        mention_prob=0.05,
        emoticon_prob=0.05,
        numeric_prob=0.55,
        url_prob=0.1,
        tweets_per_user=(1, 2),
        tweet_url_prob=0.5,
        tweet_mention_prob=0.1,
    )
    return SynthSpec(classes=(organization, affiliated, non_affiliated, noise))


def validate_spec(spec: SynthSpec) -> None:
    if len(spec.classes) < 2:
        raise InvalidSpec("need at least two classes")
    total = sum(c.proportion for c in spec.classes)
    if abs(total - 1.0) > 1e-9:
        raise InvalidSpec(f"class proportions sum to {total}, expected 1")
    for k, c in enumerate(spec.classes):
        if c.proportion <= 0:
            raise InvalidSpec(f"class {k} has non-positive proportion")
        for name in (
            "bio_empty_prob", "hashtag_prob", "mention_prob", "emoticon_prob",
            "numeric_prob", "url_prob", "tweet_url_prob", "tweet_mention_prob",
        ):
            p = getattr(c, name)
            if not 0.0 <= p <= 1.0:
                raise InvalidSpec(f"class {k}: {name}={p} outside [0, 1]")
        lo, hi = c.bio_length
        if lo < 0 or hi < lo:
            raise InvalidSpec(f"class {k}: bad bio_length {c.bio_length}")
        lo, hi = c.tweets_per_user
        if lo < 1 or hi < lo:
            raise InvalidSpec(f"class {k}: bad tweets_per_user {c.tweets_per_user}")
        if not c.bio_pool:
            raise InvalidSpec(f"class {k}: empty bio_pool")
    if not 0.0 <= spec.keyword_prob <= 1.0:
        raise InvalidSpec("keyword_prob outside [0, 1]")
    if spec.observed_at <= 0:
        raise InvalidSpec("observed_at must be positive")


def allocate_counts(n: int, proportions: Sequence[float]) -> list[int]:
    """Largest-remainder rounding of n * p_k; remainder ties favor the lower
    class index. Exact, and off by at most one from any real-valued quota."""
    quotas = [n * p for p in proportions]
    counts = [math.floor(q) for q in quotas]
    remainder = n - sum(counts)
    by_frac = sorted(
        range(len(proportions)), key=lambda k: (-(quotas[k] - counts[k]), k)
    )
    for k in by_frac[:remainder]:
        counts[k] += 1
    return counts


def _draw_count(rng: np.random.Generator, mu_sigma: tuple[float, float], cap: int) -> int:
    value = int(rng.lognormal(mu_sigma[0], mu_sigma[1]))
    return min(value, cap)


def _draw_bio(rng: np.random.Generator, c: ClassSpec, spec: SynthSpec) -> str:
    if rng.random() < c.bio_empty_prob:
        return ""
    lo, hi = c.bio_length
    k = int(rng.integers(lo, hi + 1))
    if k <= len(c.bio_pool):
        words = [str(w) for w in rng.choice(c.bio_pool, size=k, replace=False)]
    else:
        words = [str(w) for w in rng.choice(c.bio_pool, size=k, replace=True)]
    if rng.random() < c.hashtag_prob:
        words.append("#" + str(rng.choice(c.bio_pool)))
    if rng.random() < c.mention_prob:
        words.append("@" + str(rng.choice(spec.handle_pool)))
    if rng.random() < c.emoticon_prob:
        words.append(str(rng.choice(BIO_EMOTICONS)))
    if rng.random() < c.numeric_prob:
        words.append(str(int(rng.integers(1990, 2026))))
    return " ".join(words)


def _draw_tweet_text(
    rng: np.random.Generator, c: ClassSpec, spec: SynthSpec, tweet_id: int
) -> str:
    k = int(rng.integers(4, 9))
    words = [str(w) for w in rng.choice(spec.filler_pool, size=k, replace=True)]
    if spec.event_terms and rng.random() < spec.keyword_prob:
        term = str(spec.event_terms[int(rng.integers(len(spec.event_terms)))])
        words.insert(int(rng.integers(len(words) + 1)), term)
    if rng.random() < c.tweet_mention_prob:
        words.append("@" + str(rng.choice(spec.handle_pool)))
    if rng.random() < c.tweet_url_prob:
        words.append(f"https://ex.io/t{tweet_id}")
    return " ".join(words)


def generate(
    spec: SynthSpec, n_users: int, seed: int = 0
) -> tuple[list[str], list[tuple[str, int]]]:
    """Produce (jsonl_lines, [(user_id, class_index), ...]).

    Tweet lines are globally shuffled; labels come back in user-id order.
    Deterministic for a given (spec, n_users, seed).
    """
    validate_spec(spec)
    if n_users < 1:
        raise InvalidSpec("n_users must be positive")
    rng = np.random.default_rng(seed)
    counts = allocate_counts(n_users, [c.proportion for c in spec.classes])
    classes = np.repeat(np.arange(len(spec.classes)), counts)
    rng.shuffle(classes)

    labels: list[tuple[str, int]] = []
    tweets: list[str] = []
    tweet_id = 0
    for u in range(n_users):
        cls = int(classes[u])
        c = spec.classes[cls]
        user_id = f"u{u:05d}"
        labels.append((user_id, cls))
        age = min(int(rng.lognormal(*c.age_days)), _AGE_CAP_DAYS)
        created_at = spec.observed_at - age * 86400 - int(rng.integers(86400))
        user_obj = {
            "id": user_id,
            "screen_name": f"user{u}",
            "description": _draw_bio(rng, c, spec),
            "created_at": created_at,
            "friends_count": _draw_count(rng, c.friends, _COUNT_CAP),
            "followers_count": _draw_count(rng, c.followers, _COUNT_CAP),
            "statuses_count": _draw_count(rng, c.statuses, _COUNT_CAP),
            "favourites_count": _draw_count(rng, c.favourites, _COUNT_CAP),
            "listed_count": _draw_count(rng, c.listed, _COUNT_CAP),
            "url": f"https://example.org/{user_id}"
            if rng.random() < c.url_prob
            else None,
        }
        lo, hi = c.tweets_per_user
        for _ in range(int(rng.integers(lo, hi + 1))):
            tweet_id += 1
            obj = {
                "id": f"t{tweet_id:07d}",
                "text": _draw_tweet_text(rng, c, spec, tweet_id),
                "created_at": int(rng.integers(created_at, spec.observed_at + 1)),
                "observed_at": spec.observed_at,
                "user": user_obj,
            }
            tweets.append(json.dumps(obj, separators=(",", ":")))
    order = rng.permutation(len(tweets))
    return [tweets[i] for i in order], labels


def spec_to_dict(spec: SynthSpec) -> dict[str, Any]:
    return {
        "observed_at": spec.observed_at,
        "event_terms": list(spec.event_terms),
        "filler_pool": list(spec.filler_pool),
        "handle_pool": list(spec.handle_pool),
        "keyword_prob": spec.keyword_prob,
        "classes": [
            {
                "proportion": c.proportion,
                "friends": list(c.friends),
                "followers": list(c.followers),
                "statuses": list(c.statuses),
                "favourites": list(c.favourites),
                "listed": list(c.listed),
                "age_days": list(c.age_days),
                "bio_pool": list(c.bio_pool),
                "bio_length": list(c.bio_length),
                "bio_empty_prob": c.bio_empty_prob,
                "hashtag_prob": c.hashtag_prob,
                "mention_prob": c.mention_prob,
                "emoticon_prob": c.emoticon_prob,
                "numeric_prob": c.numeric_prob,
                "url_prob": c.url_prob,
                "tweets_per_user": list(c.tweets_per_user),
                "tweet_url_prob": c.tweet_url_prob,
                "tweet_mention_prob": c.tweet_mention_prob,
            }
            for c in spec.classes
        ],
    }


def _class_from_dict(base: ClassSpec, d: dict[str, Any]) -> ClassSpec:
    kwargs: dict[str, Any] = {}
    pair_fields = {
        "friends", "followers", "statuses", "favourites", "listed",
        "age_days", "bio_length", "tweets_per_user",
    }
    for key, value in d.items():
        if not hasattr(base, key):
            raise InvalidSpec(f"unknown class field {key!r}")
        if key in pair_fields:
            kwargs[key] = (value[0], value[1])
        elif key == "bio_pool":
            kwargs[key] = tuple(str(w) for w in value)
        else:
            kwargs[key] = value
    return replace(base, **kwargs)


def spec_from_dict(d: dict[str, Any]) -> SynthSpec:
    """Build a spec from a (possibly partial) JSON object; unspecified fields
    keep their default values, per class by position."""
    base = default_spec()
    try:
        classes = base.classes
        if "classes" in d:
            supplied = d["classes"]
            if len(supplied) != len(base.classes):
                # A different class count replaces, not overlays, the default.
                template = base.classes[0]
                classes = tuple(
                    _class_from_dict(template, cd) for cd in supplied
                )
            else:
                classes = tuple(
                    _class_from_dict(base.classes[k], cd)
                    for k, cd in enumerate(supplied)
                )
        spec = SynthSpec(
            classes=classes,
            observed_at=int(d.get("observed_at", base.observed_at)),
            event_terms=tuple(d.get("event_terms", base.event_terms)),
            filler_pool=tuple(d.get("filler_pool", base.filler_pool)),
            handle_pool=tuple(d.get("handle_pool", base.handle_pool)),
            keyword_prob=float(d.get("keyword_prob", base.keyword_prob)),
        )
    except InvalidSpec:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InvalidSpec(f"bad spec structure: {exc}") from None
    validate_spec(spec)
    return spec
