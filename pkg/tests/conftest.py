"""Shared fixtures: a hand-written stream corpus and its track keywords."""

import json

import pytest

from identikit.ingestion import KeywordSet

OBSERVED_AT = 1475280000  # 2016-10-01T00:00:00Z

TRACK_TERMS = ("floodwatch", "rescue efforts", "stormrelief")


def build_tweet_line(
    tweet_id,
    text,
    user_id,
    *,
    tweet_created=1474100000,
    observed_at=OBSERVED_AT,
    bio="",
    screen_name=None,
    user_created=1400000000,
    friends=10,
    followers=20,
    statuses=30,
    favourites=5,
    listed=1,
    url=None,
):
    obj = {
        "id": tweet_id,
        "text": text,
        "created_at": tweet_created,
        "observed_at": observed_at,
        "user": {
            "id": user_id,
            "screen_name": screen_name or f"sn_{user_id}",
            "description": bio,
            "created_at": user_created,
            "friends_count": friends,
            "followers_count": followers,
            "statuses_count": statuses,
            "favourites_count": favourites,
            "listed_count": listed,
            "url": url,
        },
    }
    return json.dumps(obj, separators=(",", ":"))


def fixture_corpus_lines():
    """20 lines: 8 match the track terms, 3 are malformed, 1 is whitespace
    only, and the remaining 8 parse fine without matching."""
    mk = build_tweet_line
    return [
        mk(
            "t01",
            "floodwatch issued for the valley",
            "u01",
            bio="official alerts #safety",
            url="https://example.org/u01",
            followers=4000,
            statuses=900,
        ),
        mk("t02", "weather update for the northern coast", "u02", bio="coffee and sunsets :)"),
        '{"id": "t03", "text": "broken record',
        mk(
            "t04",
            "rescue efforts underway near the river",
            "u03",
            bio="volunteer coordinator @redhelp",
            friends=800,
        ),
        mk("t05", "rescue team staging at the dome", "u04", bio="gamer 1998"),
        mk(
            "t06",
            "donate now #stormrelief",
            "u05",
            bio="community outreach",
            url="https://example.org/u05",
        ),
        "   ",
        mk("t07", "power outage reported downtown", "u06"),
        '{"id": "t08", "text": "no user attached", "created_at": 1474000000}',
        mk("t09", "floodwatch extended through friday", "u07", bio="regional news desk", listed=40),
        mk("t10", "relief supplies arriving tomorrow", "u08", bio="dreamer <3"),
        mk("t11", "massive rescue efforts tonight", "u09", bio="field officer"),
        mk("t12", "#stormrelief supplies accepted here", "u10", bio="serving the community"),
        '{"id": "t13", "text": "negative followers", "created_at": 1474000000,'
        ' "user": {"id": "u99", "followers_count": -3}}',
        mk("t14", "river levels rising near the bridge", "u11"),
        mk(
            "t15",
            "FloodWatch update: stay clear of the wash",
            "u12",
            bio="emergency services bureau",
            url="https://example.org/u12",
        ),
        mk("t16", "shelter open at the high school", "u13", bio="love music love life"),
        mk(
            "t17",
            "rescue crews doubling their efforts this evening",
            "u14",
            bio="program manager @cityofficial",
        ),
        mk("t18", "volunteers needed for cleanup", "u15"),
        mk("t19", "road closed between 5th and main", "u16", bio="win free prizes daily 2024"),
    ]


@pytest.fixture
def tweet_line():
    return build_tweet_line


@pytest.fixture
def corpus_lines():
    return fixture_corpus_lines()


@pytest.fixture
def track_keywords():
    return KeywordSet.from_terms(TRACK_TERMS)


@pytest.fixture
def keywords_file(tmp_path):
    path = tmp_path / "keywords.txt"
    path.write_text(
        "# track terms\n" + "\n".join(TRACK_TERMS) + "\n", encoding="utf-8"
    )
    return str(path)
