from __future__ import annotations

import os

import pytest

from homokinetics import set_default_threads
from homokinetics.tracing import set_trace_processors

from .testing_processor import SPAN_PROCESSOR_TESTING


@pytest.fixture(scope="session", autouse=True)
def install_memory_processor():
    set_trace_processors([SPAN_PROCESSOR_TESTING])


@pytest.fixture(autouse=True)
def fresh_spans():
    SPAN_PROCESSOR_TESTING.clear()


@pytest.fixture(autouse=True)
def default_threads():
    yield
    set_default_threads(None)


def pytest_collection_modifyitems(config, items):
    if os.environ.get("HOMOKINETICS_ACCEPTANCE") == "1":
        return
    skip = pytest.mark.skip(reason="set HOMOKINETICS_ACCEPTANCE=1 to run exponent reproductions")
    for item in items:
        if "acceptance" in item.keywords:
            item.add_marker(skip)
