"""Deterministic synthetic dataset: roster, activity records, weight profile.

Shapes the data after a mid-sized patrol agency: four shifts (AD/AN/BD/BN)
plus a few unassigned floaters, four districts, ~30 job categories with
skewed frequencies, and a calls-for-service category that dwarfs everything
else.  Everything is derived from one seed so tests and demos are stable.

Run as a module to write the CSV/JSON files:

    python -m orgmetrics.datagen --out data --seed 20170701
"""

import argparse
import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from .ingest import (
    CALLS_FOR_SERVICE,
    ActivityRecord,
    Behavior,
    Employee,
    RecordType,
    write_activity_csv,
)
from .metrics import load_weight_profile

DEFAULT_SEED = 20170701

SHIFTS = ["AD", "AN", "BD", "BN"]
DISTRICTS = ["D1", "D2", "D3", "D4"]

# (category, base severity rating, relative frequency)
CATEGORIES = [
    (CALLS_FOR_SERVICE, 30, 30.0),
    ("all_other_offenses", 40, 18.0),
    ("traffic_hazard", 35, 8.0),
    ("trespass", 45, 6.0),
    ("drug_abuse", 64, 6.0),
    ("larceny", 55, 5.5),
    ("disorderly_conduct", 42, 5.0),
    ("suspicious_activity", 38, 4.5),
    ("owi", 60, 4.0),
    ("domestic_disturbance", 58, 4.0),
    ("assault", 70, 3.5),
    ("vandalism", 45, 3.0),
    ("burglary", 72, 3.0),
    ("noise_complaint", 25, 2.5),
    ("harassment", 48, 2.0),
    ("fraud", 55, 2.0),
    ("motor_vehicle_theft", 62, 1.8),
    ("shoplifting", 40, 1.6),
    ("weapons_violation", 68, 1.4),
    ("robbery", 78, 1.2),
    ("missing_person", 57, 1.0),
    ("stolen_property", 52, 1.0),
    ("forgery", 50, 0.8),
    ("liquor_law_violation", 35, 0.8),
    ("juvenile_runaway", 44, 0.7),
    ("sex_offense", 82, 0.5),
    ("gambling", 28, 0.3),
    ("arson", 75, 0.25),
    ("kidnapping", 88, 0.15),
    ("homicide", 95, 0.1),
]


def generate_employees(rng: np.random.Generator, n: int = 60) -> list:
    employees = []
    for i in range(n):
        employee_id = f"{1000 + i}"
        # ~10% of officers float between shifts
        shift = None if rng.random() < 0.1 else SHIFTS[rng.integers(len(SHIFTS))]
        district = None if rng.random() < 0.05 else DISTRICTS[rng.integers(len(DISTRICTS))]
        employees.append(
            Employee(
                employee_id=employee_id,
                label=f"Officer {employee_id}",
                shift=shift,
                district=district,
            )
        )
    return employees


def generate_profile_document(rng: np.random.Generator, ratings_per_category: int = 40) -> dict:
    entries = {}
    for category, base, _freq in CATEGORIES:
        ratings = rng.normal(base, 12, size=ratings_per_category)
        ratings = np.clip(np.rint(ratings), 0, 100).astype(int)
        entries[category] = {
            "ratings": [int(r) for r in ratings],
            "weight": None,
            "included": True,
        }
    return {"source": "officers", "entries": entries}


def generate_records(
    rng: np.random.Generator,
    employees,
    n_records: int = 5000,
    start: datetime = datetime(2017, 7, 1, tzinfo=timezone.utc),
    end: datetime = datetime(2017, 12, 1, tzinfo=timezone.utc),
) -> list:
    names = [c for c, _b, _f in CATEGORIES]
    freq = np.array([f for _c, _b, f in CATEGORIES])
    base_probs = freq / freq.sum()

    # per-employee activity level and category leanings
    activity = rng.lognormal(mean=0.0, sigma=0.5, size=len(employees))
    activity = activity / activity.sum()
    leanings = rng.dirichlet(base_probs * 40, size=len(employees))

    span = (end - start).total_seconds()
    records = []
    emp_idx = rng.choice(len(employees), size=n_records, p=activity)
    offsets = rng.uniform(0, span, size=n_records)
    order = np.argsort(offsets)
    for r, pos in enumerate(order):
        e = employees[emp_idx[pos]]
        category = names[rng.choice(len(names), p=leanings[emp_idx[pos]])]
        if category == CALLS_FOR_SERVICE:
            record_type = RecordType.CALL_FOR_SERVICE
            behavior = Behavior.DISPATCHED if rng.random() < 0.8 else Behavior.SELF_INITIATED
        else:
            record_type = RecordType.INCIDENT
            behavior = Behavior.SELF_INITIATED if rng.random() < 0.45 else Behavior.DISPATCHED
        ts = start + timedelta(seconds=float(offsets[pos]))
        records.append(
            ActivityRecord(
                record_id=f"r{r + 1:05d}",
                employee_id=e.employee_id,
                timestamp=ts.replace(microsecond=0),
                category_id=category,
                behavior=behavior,
                record_type=record_type,
                shift=e.shift,
                district=e.district,
            )
        )
    return records


def generate_dataset(seed: int = DEFAULT_SEED, n_employees: int = 60, n_records: int = 5000):
    """Return (employees, records, profile) for one seed."""
    rng = np.random.default_rng(seed)
    employees = generate_employees(rng, n_employees)
    profile_doc = generate_profile_document(rng)
    records = generate_records(rng, employees, n_records)
    return employees, records, load_weight_profile(profile_doc)


def write_dataset(out_dir, seed: int = DEFAULT_SEED) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    employees = generate_employees(rng)
    profile_doc = generate_profile_document(rng)
    records = generate_records(rng, employees)

    (out / "records.csv").write_text(write_activity_csv(records))
    lines = ["employee_id,label,shift,district"]
    for e in employees:
        lines.append(f"{e.employee_id},{e.label},{e.shift or ''},{e.district or ''}")
    (out / "employees.csv").write_text("\n".join(lines) + "\n")
    (out / "weights.json").write_text(json.dumps(profile_doc, indent=2))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Write the synthetic demo dataset")
    parser.add_argument("--out", default="data", help="output directory")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = parser.parse_args(argv)
    write_dataset(args.out, seed=args.seed)
    print(f"wrote records.csv, employees.csv, weights.json to {args.out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
