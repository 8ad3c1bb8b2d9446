"""Parsing, validation, and filtering of activity-record datasets.

Activity records are one row per event or incident per responding employee;
events involving several employees appear once per employee.  All operations
here are pure functions over immutable inputs.
"""

import csv
import io
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import IO, Iterable, Optional, Union

from .errors import DuplicateIdError, RowError, SchemaError

CALLS_FOR_SERVICE = "calls_for_service"

ACTIVITY_HEADER = [
    "record_id",
    "employee_id",
    "timestamp",
    "category_id",
    "behavior",
    "record_type",
    "shift",
    "district",
]

EMPLOYEE_HEADER = ["employee_id", "label", "shift", "district"]


class Behavior(Enum):
    SELF_INITIATED = "self_initiated"
    DISPATCHED = "dispatched"


class RecordType(Enum):
    INCIDENT = "incident"
    CALL_FOR_SERVICE = "call_for_service"


@dataclass(frozen=True)
class ActivityRecord:
    record_id: str
    employee_id: str
    timestamp: datetime
    category_id: str
    behavior: Behavior
    record_type: RecordType
    shift: Optional[str] = None
    district: Optional[str] = None


@dataclass(frozen=True)
class Employee:
    employee_id: str
    label: str
    shift: Optional[str] = None
    district: Optional[str] = None


@dataclass(frozen=True)
class EvaluationContext:
    """Filter state for one evaluation pass.

    The time range is half-open [start, end) so adjacent ranges
    (e.g. consecutive months) never overlap.
    """

    start: datetime
    end: datetime
    behaviors: frozenset = frozenset(Behavior)
    record_types: frozenset = frozenset(RecordType)
    weight_profile_version: Optional[int] = None

    def __post_init__(self):
        if self.start >= self.end:
            raise ValueError("context start must be strictly before end")
        if not self.behaviors:
            raise ValueError("context behaviors must be non-empty")
        if not self.record_types:
            raise ValueError("context record_types must be non-empty")
        object.__setattr__(self, "behaviors", frozenset(self.behaviors))
        object.__setattr__(self, "record_types", frozenset(self.record_types))


@dataclass(frozen=True)
class ValidationFinding:
    kind: str  # dangling_employee | duplicate_record_id | category_mismatch | unweighted_category
    message: str
    record_id: Optional[str] = None


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.findings


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 timestamp into an aware UTC datetime.

    Naive timestamps are taken as UTC; anything with an offset is converted.
    """
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    ts = datetime.fromisoformat(raw)
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _open_text(stream: Union[bytes, str, IO]) -> Iterable[str]:
    if isinstance(stream, bytes):
        return io.StringIO(stream.decode("utf-8"))
    if isinstance(stream, str):
        return io.StringIO(stream)
    data = stream.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return io.StringIO(data)


def _check_header(actual, expected):
    if actual is None:
        raise SchemaError("missing header row")
    actual = [h.strip() for h in actual]
    missing = [h for h in expected if h not in actual]
    unknown = [h for h in actual if h not in expected]
    if missing:
        raise SchemaError(f"missing columns: {', '.join(missing)}")
    if unknown:
        raise SchemaError(f"unknown columns: {', '.join(unknown)}")
    return actual


def parse_activity_csv(stream: Union[bytes, str, IO]) -> list:
    """Parse an activity-record CSV into ActivityRecords, preserving row order.

    Raises SchemaError for a bad header, RowError for an unparseable row,
    DuplicateIdError for a repeated record_id.
    """
    reader = csv.reader(_open_text(stream))
    header = _check_header(next(reader, None), ACTIVITY_HEADER)
    idx = {name: header.index(name) for name in ACTIVITY_HEADER}

    records = []
    seen = set()
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise RowError(row_no, f"expected {len(header)} fields, got {len(row)}")
        get = lambda name: row[idx[name]].strip()
        record_id = get("record_id")
        if not record_id:
            raise RowError(row_no, "empty record_id")
        if record_id in seen:
            raise DuplicateIdError(f"duplicate record_id {record_id!r} at row {row_no}")
        seen.add(record_id)
        try:
            timestamp = parse_timestamp(get("timestamp"))
        except ValueError:
            raise RowError(row_no, f"unparseable timestamp {get('timestamp')!r}") from None
        try:
            behavior = Behavior(get("behavior"))
        except ValueError:
            raise RowError(row_no, f"unknown behavior {get('behavior')!r}") from None
        try:
            record_type = RecordType(get("record_type"))
        except ValueError:
            raise RowError(row_no, f"unknown record_type {get('record_type')!r}") from None
        records.append(
            ActivityRecord(
                record_id=record_id,
                employee_id=get("employee_id"),
                timestamp=timestamp,
                category_id=get("category_id"),
                behavior=behavior,
                record_type=record_type,
                shift=get("shift") or None,
                district=get("district") or None,
            )
        )
    return records


def write_activity_csv(records: Iterable[ActivityRecord]) -> str:
    """Serialize records back to the canonical CSV format."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(ACTIVITY_HEADER)
    for r in records:
        writer.writerow(
            [
                r.record_id,
                r.employee_id,
                format_timestamp(r.timestamp),
                r.category_id,
                r.behavior.value,
                r.record_type.value,
                r.shift or "",
                r.district or "",
            ]
        )
    return out.getvalue()


def parse_employees_csv(stream: Union[bytes, str, IO]) -> list:
    """Parse the employee roster CSV."""
    reader = csv.reader(_open_text(stream))
    header = _check_header(next(reader, None), EMPLOYEE_HEADER)
    idx = {name: header.index(name) for name in EMPLOYEE_HEADER}

    employees = []
    seen = set()
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise RowError(row_no, f"expected {len(header)} fields, got {len(row)}")
        employee_id = row[idx["employee_id"]].strip()
        if not employee_id:
            raise RowError(row_no, "empty employee_id")
        if employee_id in seen:
            raise DuplicateIdError(f"duplicate employee_id {employee_id!r} at row {row_no}")
        seen.add(employee_id)
        employees.append(
            Employee(
                employee_id=employee_id,
                label=row[idx["label"]].strip() or employee_id,
                shift=row[idx["shift"]].strip() or None,
                district=row[idx["district"]].strip() or None,
            )
        )
    return employees


def filter_records(records: Iterable[ActivityRecord], ctx: EvaluationContext) -> list:
    """Keep records inside the context's time range, behaviors, and record types.

    Relative order is preserved; filtering is idempotent.
    """
    return [
        r
        for r in records
        if ctx.start <= r.timestamp < ctx.end
        and r.behavior in ctx.behaviors
        and r.record_type in ctx.record_types
    ]


def validate_dataset(records, employees, profile=None) -> ValidationReport:
    """Cross-check a dataset; the report is empty iff the dataset is consistent.

    When a weight profile is given, categories present in the records but
    absent from the profile are reported as findings too (they would score
    zero everywhere).
    """
    findings = []
    roster = {e.employee_id for e in employees}
    seen_record_ids = set()
    for r in records:
        if r.record_id in seen_record_ids:
            findings.append(
                ValidationFinding(
                    kind="duplicate_record_id",
                    message=f"record_id {r.record_id!r} appears more than once",
                    record_id=r.record_id,
                )
            )
        seen_record_ids.add(r.record_id)
        if r.employee_id not in roster:
            findings.append(
                ValidationFinding(
                    kind="dangling_employee",
                    message=f"record {r.record_id!r} references unknown employee {r.employee_id!r}",
                    record_id=r.record_id,
                )
            )
        if r.record_type is RecordType.CALL_FOR_SERVICE and r.category_id != CALLS_FOR_SERVICE:
            findings.append(
                ValidationFinding(
                    kind="category_mismatch",
                    message=(
                        f"record {r.record_id!r} is a call-for-service event but is "
                        f"categorized as {r.category_id!r}"
                    ),
                    record_id=r.record_id,
                )
            )
    if profile is not None:
        known = set(profile.entries)
        for cid in sorted({r.category_id for r in records} - known):
            findings.append(
                ValidationFinding(
                    kind="unweighted_category",
                    message=f"category {cid!r} has no weight profile entry",
                )
            )
    return ValidationReport(findings=tuple(findings))
