import json
import random

import pytest

from orgmetrics.errors import RangeError, SchemaError, UnknownCategoryError
from orgmetrics.metrics import (
    ProfileSource,
    dump_weight_profile,
    load_weight_profile,
    rating_histogram,
    score,
    set_included,
    set_weight,
)


def make_profile(entries):
    return load_weight_profile({"source": "officers", "entries": entries})


def test_constant_ratings_mean():
    profile = make_profile({"c": {"ratings": [64, 64, 64], "weight": None, "included": True}})
    assert profile.entries["c"].weight == 64.0
    assert profile.version == 1


def test_mean_rating_becomes_initial_weight():
    # ratings averaging exactly 64, like a drug-abuse-style category
    ratings = [60, 62, 64, 66, 68, 64]
    profile = make_profile({"drug_abuse": {"ratings": ratings, "weight": None}})
    assert profile.entries["drug_abuse"].weight == pytest.approx(64.0)


def test_rating_out_of_range_rejected():
    with pytest.raises(RangeError):
        make_profile({"c": {"ratings": [50, 101], "weight": None}})


def test_explicit_weight_overrides_mean():
    profile = make_profile({"c": {"ratings": [10, 20], "weight": 90}})
    assert profile.entries["c"].weight == 90.0


def test_entry_without_ratings_or_weight_rejected():
    with pytest.raises(SchemaError):
        make_profile({"c": {"ratings": [], "weight": None}})


def test_unknown_source_rejected():
    with pytest.raises(SchemaError):
        load_weight_profile({"source": "martians", "entries": {}})


def test_load_from_json_text():
    doc = json.dumps({"source": "citizens", "entries": {"c": {"ratings": [5], "weight": None}}})
    profile = load_weight_profile(doc)
    assert profile.source is ProfileSource.CITIZENS
    assert profile.entries["c"].weight == 5.0


def test_dump_round_trips():
    profile = make_profile({"b": {"ratings": [1, 2], "weight": None}, "a": {"weight": 7.5, "ratings": []}})
    again = load_weight_profile(dump_weight_profile(profile))
    assert again.entries == profile.entries
    assert again.source == profile.source


def test_set_weight_new_version_same_content():
    profile = make_profile({"c": {"ratings": [64], "weight": None}})
    edited = set_weight(profile, "c", 64.0)
    assert edited.version == 2
    assert edited.entries == profile.entries
    assert profile.version == 1  # input untouched


def test_set_weight_read_back_exact():
    profile = make_profile({"c": {"ratings": [64], "weight": None}})
    assert set_weight(profile, "c", 33.25).entries["c"].weight == 33.25


def test_versions_strictly_increase():
    profile = make_profile({"c": {"ratings": [64], "weight": None}})
    versions = [profile.version]
    for w in (10, 20, 30):
        profile = set_weight(profile, "c", w)
        versions.append(profile.version)
    assert versions == sorted(set(versions))


def test_set_weight_bounds():
    profile = make_profile({"c": {"ratings": [64], "weight": None}})
    with pytest.raises(RangeError):
        set_weight(profile, "c", -0.5)
    with pytest.raises(RangeError):
        set_weight(profile, "c", 100.5)
    with pytest.raises(UnknownCategoryError):
        set_weight(profile, "nope", 50)


def test_exclude_then_reinclude_is_lossless():
    profile = make_profile({"c": {"ratings": [10, 20, 30], "weight": None}})
    excluded = set_included(profile, "c", False)
    assert excluded.weight_of("c") == 0.0
    assert excluded.entries["c"].weight == 20.0  # stored weight retained
    back = set_included(excluded, "c", True)
    assert back.weight_of("c") == 20.0
    assert back.entries == profile.entries


def test_weight_of_unknown_category_is_zero():
    profile = make_profile({"c": {"ratings": [10], "weight": None}})
    assert profile.weight_of("other") == 0.0


def test_histogram_empty_ratings():
    profile = make_profile({"c": {"ratings": [], "weight": 5}})
    hist = rating_histogram(profile, "c")
    assert hist.counts == (0,) * 101
    assert hist.mean is None


def test_histogram_extremes():
    profile = make_profile({"c": {"ratings": [0, 100], "weight": None}})
    hist = rating_histogram(profile, "c")
    assert hist.counts[0] == 1 and hist.counts[100] == 1
    assert sum(hist.counts) == 2
    assert hist.mean == 50.0


def test_histogram_recount_matches_profile(synthetic):
    _employees, _records, profile = synthetic
    for cid, entry in profile.entries.items():
        hist = rating_histogram(profile, cid)
        assert sum(hist.counts) == len(entry.ratings)
        # independent recount per bin
        for value in set(entry.ratings):
            assert hist.counts[value] == sum(1 for r in entry.ratings if r == value)


def test_score_zero_cases():
    rng = random.Random(7)
    for _ in range(20):
        assert score(0, rng.uniform(0, 100)) == 0.0
        assert score(rng.randrange(1000), 0.0) == 0.0


def test_score_hand_multiplication():
    assert score(36, 64) == 2304


def test_score_weight_bounds():
    with pytest.raises(RangeError):
        score(1, 100.001)
