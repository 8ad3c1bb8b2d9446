"""Weight profiles and the hybrid weighted score.

A profile holds, per job category, the survey rating distribution and the
current weight on a 0-100 scale.  Weights default to the mean rating and can
be adjusted; every edit produces a new immutable profile with a strictly
larger version number.
"""

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Optional, Union

from .errors import RangeError, SchemaError, UnknownCategoryError


class ProfileSource(Enum):
    OFFICERS = "officers"
    CITIZENS = "citizens"
    CUSTOM = "custom"


@dataclass(frozen=True)
class WeightEntry:
    ratings: tuple  # integers in [0, 100]
    weight: float  # [0, 100]
    included: bool = True


@dataclass(frozen=True)
class WeightProfile:
    version: int
    source: ProfileSource
    entries: Mapping  # category_id -> WeightEntry

    def weight_of(self, category_id: str) -> float:
        """Effective weight used in scoring: 0 for excluded or unknown categories."""
        entry = self.entries.get(category_id)
        if entry is None or not entry.included:
            return 0.0
        return entry.weight

    def categories(self) -> list:
        return sorted(self.entries)


@dataclass(frozen=True)
class RatingHistogram:
    category_id: str
    counts: tuple  # 101 bins for scores 0..100
    mean: Optional[float]  # None when there are no ratings


def _check_weight(weight: float) -> float:
    weight = float(weight)
    if not 0.0 <= weight <= 100.0:
        raise RangeError(f"weight {weight} outside [0, 100]")
    return weight


def _check_ratings(category_id: str, ratings) -> tuple:
    out = []
    for r in ratings:
        if not isinstance(r, int) or isinstance(r, bool):
            raise SchemaError(f"category {category_id!r}: ratings must be integers")
        if not 0 <= r <= 100:
            raise RangeError(f"category {category_id!r}: rating {r} outside [0, 100]")
        out.append(r)
    return tuple(out)


def load_weight_profile(document: Union[str, bytes, Mapping]) -> WeightProfile:
    """Load a profile from its JSON document (or an equivalent mapping).

    Document shape:
        {"source": "officers"|"citizens"|"custom",
         "entries": {"<category_id>": {"ratings": [int...],
                                       "weight": number|null,
                                       "included": bool}}}

    A null (or missing) weight means "use the mean of the ratings".
    The loaded profile is version 1.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(document, Mapping):
        raise SchemaError("profile document must be a JSON object")
    try:
        source = ProfileSource(document.get("source", "custom"))
    except ValueError:
        raise SchemaError(f"unknown source {document.get('source')!r}") from None
    raw_entries = document.get("entries")
    if not isinstance(raw_entries, Mapping):
        raise SchemaError("profile document must have an 'entries' object")

    entries = {}
    for category_id, raw in raw_entries.items():
        if not isinstance(raw, Mapping):
            raise SchemaError(f"category {category_id!r}: entry must be an object")
        ratings = _check_ratings(category_id, raw.get("ratings", []))
        weight = raw.get("weight")
        if weight is None:
            if not ratings:
                raise SchemaError(
                    f"category {category_id!r}: needs ratings or an explicit weight"
                )
            weight = sum(ratings) / len(ratings)
        entries[category_id] = WeightEntry(
            ratings=ratings,
            weight=_check_weight(weight),
            included=bool(raw.get("included", True)),
        )
    return WeightProfile(version=1, source=source, entries=entries)


def dump_weight_profile(profile: WeightProfile) -> str:
    """Serialize a profile back to its JSON document form."""
    doc = {
        "source": profile.source.value,
        "entries": {
            cid: {
                "ratings": list(e.ratings),
                "weight": e.weight,
                "included": e.included,
            }
            for cid, e in sorted(profile.entries.items())
        },
    }
    return json.dumps(doc, indent=2)


def _edit(profile: WeightProfile, category_id: str, **changes) -> WeightProfile:
    entry = profile.entries.get(category_id)
    if entry is None:
        raise UnknownCategoryError(f"unknown category {category_id!r}")
    entries = dict(profile.entries)
    entries[category_id] = replace(entry, **changes)
    return WeightProfile(version=profile.version + 1, source=profile.source, entries=entries)


def set_weight(profile: WeightProfile, category_id: str, weight: float) -> WeightProfile:
    """Return a new profile version with the category's weight replaced."""
    return _edit(profile, category_id, weight=_check_weight(weight))


def set_included(profile: WeightProfile, category_id: str, included: bool) -> WeightProfile:
    """Return a new profile version with the category included or excluded.

    Excluded categories contribute zero to every downstream score; their
    ratings and stored weight are kept so re-inclusion is lossless.
    """
    return _edit(profile, category_id, included=bool(included))


def rating_histogram(profile: WeightProfile, category_id: str) -> RatingHistogram:
    """Histogram of the survey ratings for one category (101 bins, 0..100)."""
    entry = profile.entries.get(category_id)
    if entry is None:
        raise UnknownCategoryError(f"unknown category {category_id!r}")
    counts = [0] * 101
    for r in entry.ratings:
        counts[r] += 1
    total = len(entry.ratings)
    mean = sum(entry.ratings) / total if total else None
    return RatingHistogram(category_id=category_id, counts=tuple(counts), mean=mean)


def score(count: int, weight: float) -> float:
    """Weighted score of one cell: job count times category weight."""
    if not 0.0 <= weight <= 100.0:
        raise RangeError(f"weight {weight} outside [0, 100]")
    return count * weight
