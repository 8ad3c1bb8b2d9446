import math
import random

import numpy as np
import pytest

from orgmetrics.errors import DegenerateScaleError, UnknownEmployeeError, UnknownKeyError
from orgmetrics.ingest import Employee
from orgmetrics.matrix import (
    BLANK_BIN,
    GREENS_9,
    build_color_scale,
    build_matrix,
    cell_detail,
    identity_ordering,
    pin_selection,
    sort_by_key,
    sort_by_total,
    to_view_model,
)
from orgmetrics.metrics import load_weight_profile

from conftest import make_record


def profile_of(weights: dict):
    return load_weight_profile(
        {
            "source": "custom",
            "entries": {c: {"ratings": [], "weight": w, "included": True} for c, w in weights.items()},
        }
    )


def employees_of(*ids):
    return [Employee(e, e.upper()) for e in ids]


def random_dataset(rng, n_records=200, n_employees=8, n_categories=5):
    ids = [f"e{i}" for i in range(n_employees)]
    cats = [f"c{i}" for i in range(n_categories)]
    records = [
        make_record(f"r{i}", employee_id=rng.choice(ids), category_id=rng.choice(cats))
        for i in range(n_records)
    ]
    profile = profile_of({c: rng.randrange(101) for c in cats})
    return employees_of(*ids), records, profile


def test_empty_matrix():
    m = build_matrix([], employees_of("e1", "e2"), profile_of({"burglary": 50}))
    assert m.counts.shape == (1, 2)
    assert not m.counts.any()
    assert m.grand_total == 0.0


def test_single_record_matrix():
    m = build_matrix(
        [make_record("r1", employee_id="e1", category_id="burglary")],
        employees_of("e1"),
        profile_of({"burglary": 50}),
    )
    assert m.counts[0, 0] == 1
    assert m.scores[0, 0] == 50.0
    assert m.employee_totals[0] == 50.0
    assert m.category_totals[0] == 50.0


def test_unknown_employee_rejected():
    with pytest.raises(UnknownEmployeeError):
        build_matrix([make_record("r1", employee_id="ghost")], employees_of("e1"), profile_of({}))


def test_zero_record_employee_gets_zero_column():
    m = build_matrix(
        [make_record("r1", employee_id="e1", category_id="burglary")],
        employees_of("e1", "e2"),
        profile_of({"burglary": 50}),
    )
    e2 = m.employee_index("e2")
    assert m.counts[:, e2].sum() == 0
    assert m.employee_totals[e2] == 0.0


def test_totals_match_brute_force_group_by():
    rng = random.Random(42)
    employees, records, profile = random_dataset(rng)
    m = build_matrix(records, employees, profile)

    # independent oracle: plain dict aggregation over raw records
    per_employee = {e.employee_id: 0.0 for e in employees}
    per_category = {c: 0.0 for c in m.categories}
    for r in records:
        w = profile.entries[r.category_id].weight
        per_employee[r.employee_id] += w
        per_category[r.category_id] += w
    for e in m.employees:
        assert m.employee_totals[m.employee_index(e)] == pytest.approx(per_employee[e], rel=1e-12)
    for c in m.categories:
        assert m.category_totals[m.category_index(c)] == pytest.approx(per_category[c], rel=1e-12)


def test_grand_total_conservation(synthetic):
    employees, records, profile = synthetic
    m = build_matrix(records, employees, profile)
    assert m.employee_totals.sum() == pytest.approx(m.category_totals.sum(), rel=1e-9)
    assert m.counts.sum() == len(records)


def test_excluded_category_scores_zero():
    from orgmetrics.metrics import set_included

    profile = profile_of({"a": 10, "b": 20})
    records = [make_record("r1", category_id="a"), make_record("r2", category_id="b")]
    m = build_matrix(records, employees_of("e1"), set_included(profile, "a", False))
    assert m.scores[m.category_index("a"), 0] == 0.0
    assert m.counts[m.category_index("a"), 0] == 1
    assert m.employee_totals[0] == 20.0


def test_category_missing_from_profile_counts_but_scores_zero():
    profile = profile_of({"a": 10})
    m = build_matrix([make_record("r1", category_id="mystery")], employees_of("e1"), profile)
    ci = m.category_index("mystery")
    assert m.counts[ci, 0] == 1
    assert m.scores[ci, 0] == 0.0


def _matrix_with_totals():
    # e1 > e2 > e3 by construction: 88, 74, 67 records of one category
    records = []
    for e, n in (("e1", 88), ("e2", 74), ("e3", 67)):
        for i in range(n):
            records.append(make_record(f"{e}-{i}", employee_id=e, category_id="cases"))
    return build_matrix(records, employees_of("e1", "e2", "e3"), profile_of({"cases": 64}))


def test_sort_by_total_descending_counts():
    m = _matrix_with_totals()
    ordering = sort_by_total(m, "employees", "descending")
    assert ordering.employee_order == ("e1", "e2", "e3")
    assert [m.counts[0, m.employee_index(e)] for e in ordering.employee_order] == [88, 74, 67]


def test_sort_all_ties_falls_back_to_id():
    records = [make_record(f"r{i}", employee_id=e, category_id="c")
               for i, e in enumerate(["e3", "e1", "e2"])]
    m = build_matrix(records, employees_of("e3", "e1", "e2"), profile_of({"c": 5}))
    assert sort_by_total(m, "employees", "descending").employee_order == ("e1", "e2", "e3")
    assert sort_by_total(m, "employees", "ascending").employee_order == ("e1", "e2", "e3")


def test_sorting_twice_is_idempotent():
    m = _matrix_with_totals()
    once = sort_by_total(m, "employees")
    twice = sort_by_total(m, "employees", base=once)
    assert once == twice


def test_sort_by_key_orders_by_category_scores():
    records = []
    for e, n in (("e1", 36), ("e2", 33), ("e3", 15)):
        for i in range(n):
            records.append(make_record(f"{e}-{i}", employee_id=e, category_id="drug_abuse"))
    m = build_matrix(records, employees_of("e1", "e2", "e3"), profile_of({"drug_abuse": 64}))
    ordering = sort_by_key(m, "employees", "drug_abuse")
    assert ordering.employee_order == ("e1", "e2", "e3")


def test_sort_by_key_zero_row_ties_to_id_order():
    m = build_matrix(
        [make_record("r1", employee_id="e2", category_id="a")],
        employees_of("e2", "e1", "e3"),
        profile_of({"a": 10, "b": 10}),
    )
    assert sort_by_key(m, "employees", "b").employee_order == ("e1", "e2", "e3")


def test_sort_by_key_unknown_key():
    m = _matrix_with_totals()
    with pytest.raises(UnknownKeyError):
        sort_by_key(m, "employees", "nope")


def test_sort_matches_comparison_sort_oracle():
    rng = random.Random(99)
    for _ in range(20):
        employees, records, profile = random_dataset(rng, n_records=60, n_employees=6)
        m = build_matrix(records, employees, profile)
        key = rng.choice(m.categories)
        ordering = sort_by_key(m, "employees", key, "descending")
        row = {e: m.scores[m.category_index(key), m.employee_index(e)] for e in m.employees}
        expected = sorted(m.employees, key=lambda e: (-row[e], e))
        assert list(ordering.employee_order) == expected

        ordering = sort_by_total(m, "categories", "ascending")
        totals = {c: m.category_totals[m.category_index(c)] for c in m.categories}
        expected = sorted(m.categories, key=lambda c: (totals[c], c))
        assert list(ordering.category_order) == expected


def test_orderings_stay_permutations():
    rng = random.Random(5)
    employees, records, profile = random_dataset(rng)
    m = build_matrix(records, employees, profile)
    ordering = identity_ordering(m)
    for _ in range(30):
        op = rng.randrange(3)
        if op == 0:
            ordering = sort_by_total(m, rng.choice(["employees", "categories"]),
                                     rng.choice(["ascending", "descending"]), base=ordering)
        elif op == 1:
            axis = rng.choice(["employees", "categories"])
            key = rng.choice(m.employees if axis == "categories" else m.categories)
            ordering = sort_by_key(m, axis, key, base=ordering)
        else:
            picks = rng.sample(m.employees, rng.randrange(len(m.employees)))
            ordering = pin_selection(ordering, picks)
        assert sorted(ordering.employee_order) == sorted(m.employees)
        assert sorted(ordering.category_order) == sorted(m.categories)
        assert ordering.employee_order[: len(ordering.pinned)] == ordering.pinned


def test_pin_empty_selection_keeps_order():
    m = _matrix_with_totals()
    ordering = sort_by_total(m, "employees")
    assert pin_selection(ordering, []).employee_order == ordering.employee_order


def test_pin_already_leftmost_is_noop():
    m = _matrix_with_totals()
    ordering = sort_by_total(m, "employees")
    pinned = pin_selection(ordering, ["e1"])
    assert pinned.employee_order == ordering.employee_order
    assert pinned.pinned == ("e1",)


def test_pin_last_employee_moves_front():
    m = _matrix_with_totals()
    ordering = sort_by_total(m, "employees")  # e1 e2 e3
    pinned = pin_selection(ordering, ["e3"])
    assert pinned.employee_order == ("e3", "e1", "e2")


def test_pin_unknown_employee():
    m = _matrix_with_totals()
    with pytest.raises(UnknownEmployeeError):
        pin_selection(identity_ordering(m), ["ghost"])


def test_pins_survive_resort():
    m = _matrix_with_totals()
    pinned = pin_selection(sort_by_total(m, "employees"), ["e3"])
    resorted = sort_by_total(m, "employees", "descending", base=pinned)
    assert resorted.employee_order == ("e3", "e1", "e2")
    assert resorted.pinned == ("e3",)


def test_two_value_color_scale():
    # two distinct positive scores: extremes land in the outermost bins
    records = [make_record("r1", employee_id="e1", category_id="a"),
               make_record("r2", employee_id="e1", category_id="a"),
               make_record("r3", employee_id="e2", category_id="a")]
    m = build_matrix(records, employees_of("e1", "e2"), profile_of({"a": 10}))
    scale = build_color_scale(m)
    assert not scale.degenerate
    assert scale.bin_of(10.0) == 0
    assert scale.bin_of(20.0) == 8
    assert scale.bin_of(0.0) == BLANK_BIN


def test_uniform_scores_use_degenerate_fallback():
    records = [make_record(f"r{i}", employee_id=e, category_id="a") for i, e in enumerate(["e1", "e2"])]
    m = build_matrix(records, employees_of("e1", "e2"), profile_of({"a": 10}))
    scale = build_color_scale(m)
    assert scale.degenerate
    assert scale.bin_of(10.0) == 7
    assert scale.bin_of(0.0) == BLANK_BIN


def test_all_zero_matrix_has_no_scale():
    m = build_matrix([], employees_of("e1"), profile_of({"a": 10}))
    with pytest.raises(DegenerateScaleError):
        build_color_scale(m)


def test_color_bin_monotone():
    rng = random.Random(11)
    employees, records, profile = random_dataset(rng)
    m = build_matrix(records, employees, profile)
    scale = build_color_scale(m)
    values = sorted(rng.uniform(0, float(m.scores.max())) for _ in range(200))
    bins = [scale.bin_of(v) for v in values]
    assert bins == sorted(bins)


def test_bin_indices_match_straight_line_oracle():
    rng = random.Random(123)
    employees, records, profile = random_dataset(rng, n_records=500, n_employees=12, n_categories=8)
    m = build_matrix(records, employees, profile)
    scale = build_color_scale(m)

    # independent re-implementation: loop and compare against explicit edges
    positive = [float(v) for row in m.scores for v in row if v > 0]
    lo = min(math.log1p(v) for v in positive)
    hi = max(math.log1p(v) for v in positive)
    for row in m.scores:
        for v in row:
            v = float(v)
            if v <= 0:
                expected = BLANK_BIN
            else:
                t = math.log1p(v)
                expected = 0
                for i in range(1, 9):
                    if t >= lo + i * (hi - lo) / 9.0:
                        expected = i
            assert scale.bin_of(v) == expected


def test_quantile_binning_is_monotone_and_bounded():
    rng = random.Random(3)
    employees, records, profile = random_dataset(rng)
    m = build_matrix(records, employees, profile)
    scale = build_color_scale(m, method="quantile")
    values = sorted(float(v) for row in m.scores for v in row if v > 0)
    bins = [scale.bin_of(v) for v in values]
    assert bins == sorted(bins)
    assert all(0 <= b <= 8 for b in bins)


def test_palette_has_nine_greens():
    assert len(GREENS_9) == 9
    assert GREENS_9[0] == "#f7fcf5" and GREENS_9[-1] == "#00441b"


def test_cell_detail_zero_cell():
    m = build_matrix(
        [make_record("r1", employee_id="e1", category_id="a")],
        employees_of("e1", "e2"),
        profile_of({"a": 7}),
    )
    assert cell_detail(m, "a", "e2") == {"score": 0.0, "count": 0, "weight": 7.0}


def test_cell_detail_hand_multiplication():
    records = [make_record(f"r{i}", employee_id="e1", category_id="drug_abuse") for i in range(22)]
    m = build_matrix(records, employees_of("e1"), profile_of({"drug_abuse": 64}))
    assert cell_detail(m, "drug_abuse", "e1") == {"score": 1408.0, "count": 22, "weight": 64.0}


def test_cell_detail_consistent_with_matrix():
    rng = random.Random(8)
    employees, records, profile = random_dataset(rng)
    m = build_matrix(records, employees, profile)
    for c in m.categories:
        for e in m.employees:
            detail = cell_detail(m, c, e)
            assert detail["score"] == m.scores[m.category_index(c), m.employee_index(e)]
            assert detail["score"] == detail["count"] * detail["weight"]


def test_weight_update_propagates_to_rebuilt_matrix():
    from orgmetrics.metrics import set_weight

    rng = random.Random(21)
    employees, records, profile = random_dataset(rng)
    before = build_matrix(records, employees, profile)
    target = before.categories[2]
    after = build_matrix(records, employees, set_weight(profile, target, 99.0))
    ci = after.category_index(target)
    assert np.array_equal(after.counts, before.counts)
    assert np.array_equal(after.scores[ci], after.counts[ci] * 99.0)
    mask = np.arange(len(after.categories)) != ci
    assert np.array_equal(after.scores[mask], before.scores[mask])


def test_view_model_sparse_cells():
    m = build_matrix(
        [make_record("r1", employee_id="e1", category_id="a")],
        employees_of("e1", "e2"),
        profile_of({"a": 10, "b": 20}),
    )
    vm = to_view_model(m)
    assert len(vm["cells"]) == 1
    cell = vm["cells"][0]
    assert cell["employee_id"] == "e1" and cell["category_id"] == "a"
    assert cell["count"] == 1 and cell["score"] == 10.0
    assert vm["grand_total"] == 10.0


def test_view_model_zero_weight_cells_are_blank():
    from orgmetrics.metrics import set_weight

    profile = profile_of({"a": 10})
    records = [make_record("r1", employee_id="e1", category_id="a"),
               make_record("r2", employee_id="e1", category_id="a")]
    m = build_matrix(records, employees_of("e1"), set_weight(profile, "a", 0.0))
    vm = to_view_model(m)
    assert vm["cells"][0]["bin"] == BLANK_BIN
    assert vm["color"] is None
