from datetime import datetime, timezone

import pytest

from orgmetrics.datagen import generate_dataset
from orgmetrics.ingest import ActivityRecord, Behavior, Employee, EvaluationContext, RecordType


def ts(text: str) -> datetime:
    return datetime.fromisoformat(text).replace(tzinfo=timezone.utc)


def make_record(
    record_id,
    employee_id="e1",
    when="2017-07-02T10:00:00",
    category_id="burglary",
    behavior=Behavior.SELF_INITIATED,
    record_type=RecordType.INCIDENT,
    shift=None,
    district=None,
) -> ActivityRecord:
    return ActivityRecord(
        record_id=record_id,
        employee_id=employee_id,
        timestamp=ts(when),
        category_id=category_id,
        behavior=behavior,
        record_type=record_type,
        shift=shift,
        district=district,
    )


def full_context(**overrides) -> EvaluationContext:
    defaults = dict(start=ts("2017-01-01T00:00:00"), end=ts("2018-01-01T00:00:00"))
    defaults.update(overrides)
    return EvaluationContext(**defaults)


@pytest.fixture(scope="session")
def synthetic():
    """The bundled synthetic dataset: (employees, records, profile)."""
    return generate_dataset()


@pytest.fixture
def roster():
    return [
        Employee("e1", "One", shift="AD", district="D1"),
        Employee("e2", "Two", shift="AD", district="D2"),
        Employee("e3", "Three", shift="BN", district="D1"),
    ]
