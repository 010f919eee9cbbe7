"""Synthetic stream generation: exact allocation, determinism, and spec I/O."""

import json

import numpy as np
import pytest

from identikit.errors import InvalidSpec
from identikit.ingestion import (
    KeywordSet,
    extract_user_profiles,
    matches_keywords,
    parse_tweet_line,
    stream_filter,
)
from identikit.synth import (
    EVENT_TERMS,
    allocate_counts,
    default_spec,
    generate,
    spec_from_dict,
    spec_to_dict,
    validate_spec,
)


class TestAllocateCounts:
    def test_sums_and_quota_distance(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            k = int(rng.integers(2, 6))
            raw = rng.random(k) + 0.01
            props = raw / raw.sum()
            n = int(rng.integers(1, 500))
            counts = allocate_counts(n, props)
            assert sum(counts) == n
            assert all(c >= 0 for c in counts)
            for c, p in zip(counts, props):
                assert abs(c - n * p) < 1.0

    def test_remainder_ties_favor_lower_index(self):
        assert allocate_counts(5, [0.25, 0.25, 0.25, 0.25]) == [2, 1, 1, 1]
        assert allocate_counts(2, [0.5, 0.5]) == [1, 1]
        assert allocate_counts(3, [0.5, 0.5]) == [2, 1]

    def test_exact_proportions_untouched(self):
        assert allocate_counts(20, [0.25, 0.20, 0.35, 0.20]) == [5, 4, 7, 4]


class TestGenerate:
    def test_deterministic(self):
        spec = default_spec()
        a_lines, a_labels = generate(spec, 50, seed=3)
        b_lines, b_labels = generate(spec, 50, seed=3)
        assert a_lines == b_lines
        assert a_labels == b_labels
        c_lines, _ = generate(spec, 50, seed=4)
        assert a_lines != c_lines

    def test_labels_cover_allocation_in_user_order(self):
        spec = default_spec()
        _, labels = generate(spec, 101, seed=1)
        user_ids = [u for u, _ in labels]
        assert user_ids == sorted(user_ids)
        assert len(set(user_ids)) == 101
        counts = np.bincount([cls for _, cls in labels], minlength=4)
        expected = allocate_counts(101, [c.proportion for c in spec.classes])
        assert counts.tolist() == expected

    def test_every_line_parses(self):
        lines, labels = generate(default_spec(), 40, seed=2)
        label_ids = {u for u, _ in labels}
        for line in lines:
            record = parse_tweet_line(line)
            assert record.user.user_id in label_ids
            assert record.created_at <= record.user.observed_at
            assert record.user.created_at < record.created_at

    def test_profiles_recoverable(self):
        lines, labels = generate(default_spec(), 60, seed=5)
        profiles = extract_user_profiles(stream_filter(lines, None))
        assert {p.user_id for p in profiles} == {u for u, _ in labels}

    def test_certain_keywords_hit_every_tweet(self):
        spec = default_spec()
        spec = spec_from_dict({**spec_to_dict(spec), "keyword_prob": 1.0})
        lines, _ = generate(spec, 30, seed=6)
        keywords = KeywordSet.from_terms(EVENT_TERMS)
        for line in lines:
            assert matches_keywords(parse_tweet_line(line).text, keywords)

    def test_zero_users_rejected(self):
        with pytest.raises(InvalidSpec):
            generate(default_spec(), 0, seed=1)


class TestValidateSpec:
    def test_default_spec_valid(self):
        validate_spec(default_spec())

    def test_proportions_must_sum_to_one(self):
        d = spec_to_dict(default_spec())
        d["classes"][0]["proportion"] = 0.5
        with pytest.raises(InvalidSpec):
            spec_from_dict(d)

    def test_probability_bounds_checked(self):
        d = spec_to_dict(default_spec())
        d["classes"][1]["url_prob"] = 1.5
        with pytest.raises(InvalidSpec):
            spec_from_dict(d)

    def test_keyword_prob_bounds_checked(self):
        d = {"keyword_prob": -0.1}
        with pytest.raises(InvalidSpec):
            spec_from_dict(d)

    def test_tweets_per_user_needs_at_least_one(self):
        d = spec_to_dict(default_spec())
        d["classes"][2]["tweets_per_user"] = [0, 2]
        with pytest.raises(InvalidSpec):
            spec_from_dict(d)


class TestSpecSerialization:
    def test_round_trip_preserves_generation(self):
        spec = default_spec()
        clone = spec_from_dict(json.loads(json.dumps(spec_to_dict(spec))))
        assert clone == spec
        assert generate(clone, 25, seed=9) == generate(spec, 25, seed=9)

    def test_partial_overlay_keeps_defaults(self):
        spec = spec_from_dict({"keyword_prob": 0.5})
        base = default_spec()
        assert spec.keyword_prob == 0.5
        assert spec.classes == base.classes
        assert spec.event_terms == base.event_terms

    def test_partial_class_overlay(self):
        spec = spec_from_dict(
            {"classes": [{"proportion": 0.4}, {}, {"proportion": 0.2}, {}]}
        )
        base = default_spec()
        assert spec.classes[0].proportion == 0.4
        assert spec.classes[2].proportion == 0.2
        assert spec.classes[1].proportion == base.classes[1].proportion
        assert spec.classes[0].bio_pool == base.classes[0].bio_pool

    def test_different_class_count_replaces_defaults(self):
        half = {"proportion": 0.5}
        spec = spec_from_dict({"classes": [half, half]})
        assert len(spec.classes) == 2
        lines, labels = generate(spec, 10, seed=1)
        assert {cls for _, cls in labels} == {0, 1}
        assert lines

    def test_unknown_field_rejected(self):
        with pytest.raises(InvalidSpec):
            spec_from_dict({"classes": [{"sparkle": 1}, {}, {}, {}]})

    def test_malformed_structure_rejected(self):
        with pytest.raises(InvalidSpec):
            spec_from_dict({"classes": [{"friends": [1]}, {}, {}, {}]})
