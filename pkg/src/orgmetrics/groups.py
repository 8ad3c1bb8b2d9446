"""Group aggregation and radial-glyph geometry specs.

Groups come either from team assignments (shift/district) or from cluster
labels.  The dandelion spec shares one axis list across all groups (union of
each group's top-k categories) so glyphs are directly comparable; the stacked
radar spec carries per-member contribution fractions along those axes.

Axis lengths are log-scaled while ribbon fractions within an axis are linear;
compositing the two is deliberately left to the renderer.
"""

from dataclasses import dataclass
from math import log1p, pi
from typing import Iterable, Literal, Mapping, Optional

from .errors import CoverageError
from .ingest import ActivityRecord, Employee

GroupKey = Literal["shift", "district"]
Transform = Literal["log", "linear"]

UNASSIGNED = "unassigned"

# Small rotation so equal axis lengths do not read as a symmetric shape.
ROTATION_OFFSET = pi / 8

# Radial glyphs stay legible up to roughly a dozen axes.
MAX_RECOMMENDED_AXES = 12

DEFAULT_TOP_K = 5
DEFAULT_INNER_RADIUS_FRACTION = 0.15


@dataclass(frozen=True)
class GroupSummary:
    group_id: str
    member_ids: tuple
    category_counts: Mapping  # category_id -> count
    top_categories: tuple  # nonzero categories, descending count, ties by id

    @property
    def total(self) -> int:
        return sum(self.category_counts.values())


@dataclass(frozen=True)
class DandelionSpec:
    axes: tuple  # shared across groups, descending combined totals
    axis_lengths: Mapping  # group_id -> {category_id: length}
    axis_counts: Mapping  # group_id -> {category_id: raw count}
    rotation_offset: float
    transform: Transform


@dataclass(frozen=True)
class StackedRadarSpec:
    group_id: str
    axes: tuple
    member_order: tuple  # descending member total over the axes, ties by id
    fractions: Mapping  # member_id -> {category_id: fraction in [0, 1]}
    counts: Mapping  # member_id -> {category_id: raw count}
    axis_totals: Mapping  # category_id -> group total on that axis
    inner_radius_fraction: float = DEFAULT_INNER_RADIUS_FRACTION


def _rank_categories(counts: Mapping) -> tuple:
    nonzero = [(c, n) for c, n in counts.items() if n > 0]
    nonzero.sort(key=lambda item: (-item[1], item[0]))
    return tuple(c for c, _ in nonzero)


def _summarize(group_id: str, member_ids, records) -> GroupSummary:
    members = set(member_ids)
    counts = {}
    for r in records:
        if r.employee_id in members:
            counts[r.category_id] = counts.get(r.category_id, 0) + 1
    return GroupSummary(
        group_id=group_id,
        member_ids=tuple(sorted(members)),
        category_counts=counts,
        top_categories=_rank_categories(counts),
    )


def group_by_assignment(
    records: Iterable[ActivityRecord],
    employees: Iterable[Employee],
    key: GroupKey,
) -> list:
    """Group employees by shift or district; missing assignments pool under "unassigned".

    Every employee lands in exactly one group.  Counts are aggregated from
    the given (already context-filtered) records.
    """
    if key not in ("shift", "district"):
        raise ValueError(f"unknown grouping key {key!r}")
    records = list(records)
    members = {}
    for e in employees:
        group_id = getattr(e, key) or UNASSIGNED
        members.setdefault(group_id, []).append(e.employee_id)
    return [
        _summarize(group_id, ids, records) for group_id, ids in sorted(members.items())
    ]


def group_by_clusters(cluster_result, records, employees) -> list:
    """One group per cluster label; every employee must carry a label."""
    records = list(records)
    members = {}
    for e in employees:
        label = cluster_result.assignments.get(e.employee_id)
        if label is None:
            raise CoverageError(f"employee {e.employee_id!r} has no cluster label")
        members.setdefault(f"cluster_{label}", []).append(e.employee_id)
    return [
        _summarize(group_id, ids, records) for group_id, ids in sorted(members.items())
    ]


def top_categories(group: GroupSummary, k: int) -> tuple:
    """First min(k, nonzero categories) categories by descending count, ties by id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return group.top_categories[:k]


def build_dandelion(
    groups: Iterable[GroupSummary],
    k: int = DEFAULT_TOP_K,
    transform: Transform = "log",
) -> DandelionSpec:
    """Shared-axis dandelion spec for a set of groups.

    Axes are the union of each group's top-k categories, ordered by combined
    count across groups (descending, ties by id).  Lengths are ln(1+count)
    under the log transform so zero counts sit at the origin.
    """
    groups = list(groups)
    if not groups:
        raise ValueError("need at least one group")
    if transform not in ("log", "linear"):
        raise ValueError(f"unknown transform {transform!r}")

    union = set()
    for g in groups:
        union.update(top_categories(g, k))
    combined = {c: sum(g.category_counts.get(c, 0) for g in groups) for c in union}
    axes = tuple(sorted(union, key=lambda c: (-combined[c], c)))

    axis_counts = {}
    axis_lengths = {}
    for g in groups:
        counts = {c: g.category_counts.get(c, 0) for c in axes}
        axis_counts[g.group_id] = counts
        if transform == "log":
            axis_lengths[g.group_id] = {c: log1p(n) for c, n in counts.items()}
        else:
            axis_lengths[g.group_id] = {c: float(n) for c, n in counts.items()}
    return DandelionSpec(
        axes=axes,
        axis_lengths=axis_lengths,
        axis_counts=axis_counts,
        rotation_offset=ROTATION_OFFSET,
        transform=transform,
    )


def build_stacked_radar(
    group: GroupSummary,
    per_member_counts: Mapping,
    axes: Iterable[str],
    inner_radius_fraction: float = DEFAULT_INNER_RADIUS_FRACTION,
) -> StackedRadarSpec:
    """Per-member contribution ribbons for one group along shared axes.

    fraction(member, axis) = member count / group total on that axis; axes
    with zero group total get all-zero fractions.  Members are ordered by
    their total count over the axes, descending, ties by id.
    """
    axes = tuple(axes)
    if not 0.0 < inner_radius_fraction < 1.0:
        raise ValueError("inner_radius_fraction must be in (0, 1)")
    members = group.member_ids
    counts = {
        m: {c: int(per_member_counts.get(m, {}).get(c, 0)) for c in axes} for m in members
    }
    axis_totals = {c: sum(counts[m][c] for m in members) for c in axes}
    fractions = {
        m: {
            c: (counts[m][c] / axis_totals[c]) if axis_totals[c] > 0 else 0.0
            for c in axes
        }
        for m in members
    }
    member_totals = {m: sum(counts[m].values()) for m in members}
    member_order = tuple(sorted(members, key=lambda m: (-member_totals[m], m)))
    return StackedRadarSpec(
        group_id=group.group_id,
        axes=axes,
        member_order=member_order,
        fractions=fractions,
        counts=counts,
        axis_totals=axis_totals,
        inner_radius_fraction=inner_radius_fraction,
    )


def per_member_counts(records: Iterable[ActivityRecord], member_ids: Iterable[str]) -> dict:
    """Per-employee per-category counts restricted to the given members."""
    members = set(member_ids)
    out = {m: {} for m in members}
    for r in records:
        if r.employee_id in members:
            bucket = out[r.employee_id]
            bucket[r.category_id] = bucket.get(r.category_id, 0) + 1
    return out


def dandelion_view_model(spec: DandelionSpec) -> dict:
    return {
        "axes": list(spec.axes),
        "rotation_offset": spec.rotation_offset,
        "transform": spec.transform,
        "groups": {
            gid: {
                "lengths": {c: spec.axis_lengths[gid][c] for c in spec.axes},
                "counts": {c: spec.axis_counts[gid][c] for c in spec.axes},
            }
            for gid in spec.axis_lengths
        },
    }


def radar_view_model(spec: StackedRadarSpec) -> dict:
    return {
        "group_id": spec.group_id,
        "axes": list(spec.axes),
        "member_order": list(spec.member_order),
        "fractions": {m: dict(spec.fractions[m]) for m in spec.member_order},
        "counts": {m: dict(spec.counts[m]) for m in spec.member_order},
        "axis_totals": dict(spec.axis_totals),
        "inner_radius_fraction": spec.inner_radius_fraction,
        "rotation_offset": ROTATION_OFFSET,
    }


def group_view_model(groups: Iterable[GroupSummary]) -> list:
    return [
        {
            "group_id": g.group_id,
            "member_ids": list(g.member_ids),
            "category_counts": dict(g.category_counts),
            "top_categories": list(g.top_categories),
            "total": g.total,
        }
        for g in groups
    ]
