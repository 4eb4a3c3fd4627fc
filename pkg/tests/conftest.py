import datetime as dt

import pytest

from litkg.backends import available_backends, get_backend
from litkg.graph import EntityId, Predication, RelationId


def make_pred(
    subject,
    predicate,
    obj,
    date="2015-06-01",
    pmid="100",
    subject_type="dsyn",
    object_type="dsyn",
    sentence="",
):
    """Terse predication builder for graph-level tests."""
    return Predication(
        subject=EntityId(subject, subject.lower(), subject_type),
        predicate=RelationId(predicate),
        object=EntityId(obj, obj.lower(), object_type),
        pmid=pmid,
        sentence=sentence,
        pub_date=dt.date.fromisoformat(date),
    )


@pytest.fixture(params=available_backends())
def backend(request):
    """Run the test once per available kernel backend."""
    return get_backend(request.param)
