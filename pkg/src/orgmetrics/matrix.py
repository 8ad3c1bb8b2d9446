"""The employees x categories performance matrix, its orderings, and color scale.

Rows are job categories, columns are employees (matching the on-screen
layout).  Cell scores are count * category weight; excluded categories score
zero.  Matrices are immutable snapshots tied to the context and profile
version they were built from.
"""

from bisect import bisect_right
from dataclasses import dataclass
from math import log1p
from typing import Iterable, Literal, Optional

import numpy as np

from .errors import (
    DegenerateScaleError,
    UnknownEmployeeError,
    UnknownKeyError,
    VersionMismatchError,
)
from .ingest import ActivityRecord, Employee, EvaluationContext
from .metrics import WeightProfile

Axis = Literal["employees", "categories"]
Direction = Literal["ascending", "descending"]

# 9-class sequential greens, light to dark.
GREENS_9 = (
    "#f7fcf5",
    "#e5f5e0",
    "#c7e9c0",
    "#a1d99b",
    "#74c476",
    "#41ab5d",
    "#238b45",
    "#006d2c",
    "#00441b",
)

# Reserved class for zero cells so absence is distinguishable from small-positive.
BLANK_BIN = -1


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    employees: tuple  # ordered employee ids (columns)
    categories: tuple  # ordered category ids (rows)
    counts: np.ndarray  # int, |categories| x |employees|
    scores: np.ndarray  # float, same shape
    weights: np.ndarray  # effective weight per category (0 when excluded)
    employee_totals: np.ndarray
    category_totals: np.ndarray
    context: Optional[EvaluationContext]
    profile_version: int

    def __post_init__(self):
        object.__setattr__(self, "_erow", {e: i for i, e in enumerate(self.employees)})
        object.__setattr__(self, "_crow", {c: i for i, c in enumerate(self.categories)})

    @property
    def grand_total(self) -> float:
        return float(self.employee_totals.sum())

    def employee_index(self, employee_id: str) -> int:
        try:
            return self._erow[employee_id]
        except KeyError:
            raise UnknownKeyError(f"unknown employee {employee_id!r}") from None

    def category_index(self, category_id: str) -> int:
        try:
            return self._crow[category_id]
        except KeyError:
            raise UnknownKeyError(f"unknown category {category_id!r}") from None


@dataclass(frozen=True)
class MatrixOrdering:
    employee_order: tuple
    category_order: tuple
    pinned: tuple = ()


@dataclass(frozen=True)
class ColorScale:
    """9-class binning of positive scores in ln(1+v) space.

    Zero scores map to BLANK_BIN.  When every positive score is equal the
    scale is degenerate and all positive cells fall into the darkest-but-one
    bin (index 7).
    """

    bin_boundaries: tuple  # 8 boundaries in transformed space
    palette: tuple = GREENS_9
    method: str = "equal_interval"  # or "quantile"
    degenerate: bool = False

    def bin_of(self, value: float) -> int:
        if value <= 0:
            return BLANK_BIN
        if self.degenerate:
            return 7
        return min(bisect_right(self.bin_boundaries, log1p(value)), 8)


def build_matrix(
    records: Iterable[ActivityRecord],
    employees: Iterable[Employee],
    profile: WeightProfile,
    ctx: Optional[EvaluationContext] = None,
) -> ScoreMatrix:
    """Aggregate pre-filtered records into the score matrix.

    Every rostered employee gets a column even with zero records.  Rows are
    the union of profile categories and categories present in the records;
    categories without a profile entry carry weight zero.
    """
    if ctx is not None and ctx.weight_profile_version is not None:
        if ctx.weight_profile_version != profile.version:
            raise VersionMismatchError(ctx.weight_profile_version, profile.version)

    records = list(records)
    employee_ids = tuple(sorted({e.employee_id for e in employees}))
    categories = tuple(sorted(set(profile.entries) | {r.category_id for r in records}))
    erow = {e: i for i, e in enumerate(employee_ids)}
    crow = {c: i for i, c in enumerate(categories)}

    counts = np.zeros((len(categories), len(employee_ids)), dtype=np.int64)
    for r in records:
        if r.employee_id not in erow:
            raise UnknownEmployeeError(
                f"record {r.record_id!r} references employee {r.employee_id!r} not in roster"
            )
        counts[crow[r.category_id], erow[r.employee_id]] += 1

    weights = np.array([profile.weight_of(c) for c in categories], dtype=np.float64)
    scores = counts * weights[:, None]
    return ScoreMatrix(
        employees=employee_ids,
        categories=categories,
        counts=counts,
        scores=scores,
        weights=weights,
        employee_totals=scores.sum(axis=0),
        category_totals=scores.sum(axis=1),
        context=ctx,
        profile_version=profile.version,
    )


def identity_ordering(matrix: ScoreMatrix) -> MatrixOrdering:
    return MatrixOrdering(employee_order=matrix.employees, category_order=matrix.categories)


def _apply_pins(order, pinned):
    pinned = tuple(pinned)
    if not pinned:
        return tuple(order)
    pin_set = set(pinned)
    return pinned + tuple(e for e in order if e not in pin_set)


def _sorted_ids(ids, values, direction: Direction):
    # Ties always break by id ascending, whatever the direction.
    if direction == "descending":
        return tuple(sorted(ids, key=lambda i: (-values[i], i)))
    if direction == "ascending":
        return tuple(sorted(ids, key=lambda i: (values[i], i)))
    raise ValueError(f"unknown direction {direction!r}")


def sort_by_total(
    matrix: ScoreMatrix,
    axis: Axis,
    direction: Direction = "descending",
    base: Optional[MatrixOrdering] = None,
) -> MatrixOrdering:
    """Order one axis by its total scores; the other axis is left unchanged.

    Pinned employees from the base ordering stay leftmost.
    """
    base = base or identity_ordering(matrix)
    if axis == "employees":
        totals = {e: matrix.employee_totals[matrix.employee_index(e)] for e in matrix.employees}
        order = _sorted_ids(matrix.employees, totals, direction)
        return MatrixOrdering(
            employee_order=_apply_pins(order, base.pinned),
            category_order=base.category_order,
            pinned=base.pinned,
        )
    if axis == "categories":
        totals = {c: matrix.category_totals[matrix.category_index(c)] for c in matrix.categories}
        return MatrixOrdering(
            employee_order=base.employee_order,
            category_order=_sorted_ids(matrix.categories, totals, direction),
            pinned=base.pinned,
        )
    raise ValueError(f"unknown axis {axis!r}")


def sort_by_key(
    matrix: ScoreMatrix,
    axis: Axis,
    key_id: str,
    direction: Direction = "descending",
    base: Optional[MatrixOrdering] = None,
) -> MatrixOrdering:
    """Order one axis by the score values of a key on the opposite axis.

    Sorting employees takes a category key (who scores highest in it);
    sorting categories takes an employee key (what that employee does most).
    """
    base = base or identity_ordering(matrix)
    if axis == "employees":
        row = matrix.scores[matrix.category_index(key_id), :]
        values = {e: row[matrix.employee_index(e)] for e in matrix.employees}
        order = _sorted_ids(matrix.employees, values, direction)
        return MatrixOrdering(
            employee_order=_apply_pins(order, base.pinned),
            category_order=base.category_order,
            pinned=base.pinned,
        )
    if axis == "categories":
        col = matrix.scores[:, matrix.employee_index(key_id)]
        values = {c: col[matrix.category_index(c)] for c in matrix.categories}
        return MatrixOrdering(
            employee_order=base.employee_order,
            category_order=_sorted_ids(matrix.categories, values, direction),
            pinned=base.pinned,
        )
    raise ValueError(f"unknown axis {axis!r}")


def pin_selection(ordering: MatrixOrdering, selected: Iterable[str]) -> MatrixOrdering:
    """Move the selected employees to the leftmost positions, in selection order.

    Remaining employees keep their prior relative order.  An empty selection
    clears the pins.
    """
    selected = tuple(selected)
    known = set(ordering.employee_order)
    for e in selected:
        if e not in known:
            raise UnknownEmployeeError(f"cannot pin unknown employee {e!r}")
    base = tuple(e for e in ordering.employee_order if e not in set(selected))
    return MatrixOrdering(
        employee_order=selected + base,
        category_order=ordering.category_order,
        pinned=selected,
    )


def build_color_scale(matrix: ScoreMatrix, method: str = "equal_interval") -> ColorScale:
    """Build the 9-class scale over the matrix's positive scores.

    Canonical method is equal-interval binning on ln(1+score); "quantile"
    places the boundaries at the 1/9..8/9 quantiles of the transformed
    positive scores instead.  Raises DegenerateScaleError when the matrix has
    no positive score at all.
    """
    positive = matrix.scores[matrix.scores > 0]
    if positive.size == 0:
        raise DegenerateScaleError("matrix has no positive scores")
    transformed = np.log1p(positive)
    lo = float(transformed.min())
    hi = float(transformed.max())
    if lo == hi:
        return ColorScale(bin_boundaries=(lo,) * 8, method=method, degenerate=True)
    if method == "equal_interval":
        boundaries = tuple(lo + i * (hi - lo) / 9.0 for i in range(1, 9))
    elif method == "quantile":
        boundaries = tuple(
            float(q) for q in np.quantile(transformed, [i / 9.0 for i in range(1, 9)])
        )
    else:
        raise ValueError(f"unknown binning method {method!r}")
    return ColorScale(bin_boundaries=boundaries, method=method)


def cell_detail(matrix: ScoreMatrix, category_id: str, employee_id: str) -> dict:
    """Exact stored values behind one cell (tooltip payload)."""
    ci = matrix.category_index(category_id)
    ei = matrix.employee_index(employee_id)
    return {
        "score": float(matrix.scores[ci, ei]),
        "count": int(matrix.counts[ci, ei]),
        "weight": float(matrix.weights[ci]),
    }


def to_view_model(
    matrix: ScoreMatrix,
    ordering: Optional[MatrixOrdering] = None,
    scale: Optional[ColorScale] = None,
) -> dict:
    """Serializable matrix view model: id arrays plus sparse nonzero-count cells."""
    ordering = ordering or identity_ordering(matrix)
    if scale is None and bool((matrix.scores > 0).any()):
        scale = build_color_scale(matrix)
    cells = []
    for ci, cid in enumerate(matrix.categories):
        for ei in np.nonzero(matrix.counts[ci])[0]:
            score = float(matrix.scores[ci, ei])
            cells.append(
                {
                    "category_id": cid,
                    "employee_id": matrix.employees[ei],
                    "count": int(matrix.counts[ci, ei]),
                    "score": score,
                    "bin": scale.bin_of(score) if scale else BLANK_BIN,
                }
            )
    return {
        "employees": list(ordering.employee_order),
        "categories": list(ordering.category_order),
        "pinned": list(ordering.pinned),
        "employee_totals": {
            e: float(matrix.employee_totals[matrix.employee_index(e)]) for e in matrix.employees
        },
        "category_totals": {
            c: float(matrix.category_totals[matrix.category_index(c)]) for c in matrix.categories
        },
        "grand_total": matrix.grand_total,
        "cells": cells,
        "color": None
        if scale is None
        else {
            "boundaries": list(scale.bin_boundaries),
            "palette": list(scale.palette),
            "degenerate": scale.degenerate,
            "blank_bin": BLANK_BIN,
        },
        "profile_version": matrix.profile_version,
    }
