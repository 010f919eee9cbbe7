"""Streaming ingestion of tweet JSONL: parsing, keyword filtering, profiles.

A record line is one JSON object with a nested user object. The filter is a
generator so arbitrarily long streams run in constant memory; malformed lines
are skipped and counted, never fatal.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import MalformedLine

logger = logging.getLogger(__name__)

# A token is a run of word characters (underscore included), optionally glued
# to a single leading '#' or '@'. Lone sigils are not tokens.
_TOKEN_RE = re.compile(r"[#@]\w+|\w+")

_COUNT_FIELDS = (
    "friends_count",
    "followers_count",
    "statuses_count",
    "favourites_count",
    "listed_count",
)


@dataclass(frozen=True, slots=True)
class UserProfile:
    user_id: str
    screen_name: str
    bio: str
    created_at: int
    observed_at: int
    friends_count: int
    followers_count: int
    statuses_count: int
    favourites_count: int
    listed_count: int
    profile_url_present: bool


@dataclass(frozen=True, slots=True)
class TweetRecord:
    tweet_id: str
    text: str
    created_at: int
    user: UserProfile


def tokenize_text(text: str) -> list[str]:
    """Lowercased tokens; '#'/'@' stay glued to the following word run."""
    return [t.lower() for t in _TOKEN_RE.findall(text)]


def parse_tweet_line(line: str, line_no: int | None = None) -> TweetRecord:
    """Parse one JSONL line into a TweetRecord.

    Raises MalformedLine for anything that cannot become a valid record:
    broken JSON, missing tweet id / user id / text, non-numeric or negative
    counts. Missing count fields default to 0; a missing observed_at falls
    back to the tweet timestamp.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedLine(f"invalid JSON: {exc.msg}", line_no) from None
    if not isinstance(obj, dict):
        raise MalformedLine("top-level value is not an object", line_no)
    user = obj.get("user")
    if not isinstance(user, Mapping):
        raise MalformedLine("missing user object", line_no)

    tweet_id = obj.get("id")
    if tweet_id is None or str(tweet_id) == "":
        raise MalformedLine("missing tweet id", line_no)
    user_id = user.get("id")
    if user_id is None or str(user_id) == "":
        raise MalformedLine("missing user id", line_no)
    text = obj.get("text")
    if not isinstance(text, str):
        raise MalformedLine("missing text field", line_no)

    try:
        tweet_created = int(obj.get("created_at") or 0)
        user_created = int(user.get("created_at") or 0)
        observed_at = int(obj.get("observed_at") or tweet_created)
        counts = {name: int(user.get(name) or 0) for name in _COUNT_FIELDS}
    except (TypeError, ValueError):
        raise MalformedLine("non-numeric count or timestamp", line_no) from None
    if any(v < 0 for v in counts.values()):
        raise MalformedLine("negative count field", line_no)

    bio = user.get("description")
    profile = UserProfile(
        user_id=str(user_id),
        screen_name=str(user.get("screen_name") or ""),
        bio=bio if isinstance(bio, str) else "",
        created_at=user_created,
        observed_at=observed_at,
        friends_count=counts["friends_count"],
        followers_count=counts["followers_count"],
        statuses_count=counts["statuses_count"],
        favourites_count=counts["favourites_count"],
        listed_count=counts["listed_count"],
        profile_url_present=bool(user.get("url")),
    )
    return TweetRecord(
        tweet_id=str(tweet_id),
        text=text,
        created_at=tweet_created,
        user=profile,
    )


@dataclass(frozen=True)
class KeywordSet:
    """Track terms: OR across terms, AND within a term's tokens.

    Each term is a tuple of lowercased tokens. A term with a '#token' matches
    both '#token' and 'token' in text (and vice versa); '@' carries no such
    equivalence.
    """

    terms: tuple[tuple[str, ...], ...]

    @classmethod
    def from_terms(cls, terms: Iterable[str]) -> "KeywordSet":
        seen: dict[tuple[str, ...], None] = {}
        for raw in terms:
            tokens = tuple(tokenize_text(raw))
            if tokens and tokens not in seen:
                seen[tokens] = None
        return cls(tuple(seen))

    def __len__(self) -> int:
        return len(self.terms)


def load_keywords(path: str) -> KeywordSet:
    """One term per line; blank lines and '#'-leading lines are comments.

    Hashtag terms therefore cannot be written literally, but hashtag
    equivalence makes the bare token match the tagged form anyway.
    """
    terms: list[str] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            terms.append(stripped)
    return KeywordSet.from_terms(terms)


def _canon(token: str) -> str:
    # One leading '#' is stripped on both sides of a comparison.
    return token[1:] if token.startswith("#") else token


def matches_keywords(text: str, keywords: KeywordSet) -> bool:
    """True if any term has all its tokens present in the text.

    An empty KeywordSet matches nothing.
    """
    if not keywords.terms:
        return False
    present = {_canon(t) for t in tokenize_text(text)}
    return any(
        all(_canon(tok) in present for tok in term) for term in keywords.terms
    )


@dataclass
class StreamCounters:
    read: int = 0
    matched: int = 0
    malformed: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "read": self.read,
            "matched": self.matched,
            "malformed": self.malformed,
        }


def stream_filter(
    lines: Iterable[str],
    keywords: KeywordSet | None,
    counters: StreamCounters | None = None,
) -> Iterator[TweetRecord]:
    """Yield parsed records whose text matches the keyword set.

    keywords=None disables matching and yields every valid record (matched
    then counts every valid record). Whitespace-only lines count as read but
    are neither matched nor malformed. The caller may pass its own counters
    object to observe totals after the generator is exhausted.
    """
    if counters is None:
        counters = StreamCounters()
    for line in lines:
        counters.read += 1
        if not line.strip():
            continue
        try:
            record = parse_tweet_line(line, line_no=counters.read)
        except MalformedLine as exc:
            counters.malformed += 1
            logger.warning("skipping line %d: %s", counters.read, exc.reason)
            continue
        if keywords is None or matches_keywords(record.text, keywords):
            counters.matched += 1
            yield record


def extract_user_profiles(records: Iterable[TweetRecord]) -> list[UserProfile]:
    """One profile per user: the snapshot from the latest tweet wins
    (stream order breaks created_at ties), output in first-appearance order."""
    latest: dict[str, tuple[int, UserProfile]] = {}
    for rec in records:
        prev = latest.get(rec.user.user_id)
        if prev is None or rec.created_at >= prev[0]:
            latest[rec.user.user_id] = (rec.created_at, rec.user)
    return [profile for _, profile in latest.values()]
