from __future__ import annotations

import logging

import pytest

from homokinetics.tracing import (
    AssemblySpanData,
    FitSpanData,
    LoggingSpanProcessor,
    ReplicaSpanData,
    TracingProcessor,
    assembly_span,
    fit_span,
    get_current_span,
    replica_span,
)
from homokinetics.tracing.processors import SynchronousMultiSpanProcessor
from homokinetics.tracing.spans import Span

from .testing_processor import (
    assert_no_spans,
    fetch_events,
    fetch_normalized_spans,
    fetch_ordered_spans,
)


def test_span_records_data():
    with replica_span(ReplicaSpanData("shear", 2, 100)) as span:
        span.span_data.rows = 11
        span.span_data.collisions = 40

    assert fetch_normalized_spans() == [
        {
            "type": "replica",
            "data": {
                "scenario": "shear",
                "replica": 2,
                "particles": 100,
                "rows": 11,
                "steps": 0,
                "collisions": 40,
            },
        }
    ]
    assert fetch_events() == ["span_start", "span_end"]


def test_nested_spans_link_parents():
    assert get_current_span() is None
    with assembly_span(AssemblySpanData(0.0, "constant", 10)) as outer:
        assert get_current_span() is outer
        with fit_span(FitSpanData("beta", "t")) as inner:
            assert get_current_span() is inner
        assert get_current_span() is outer
    assert get_current_span() is None

    spans = fetch_ordered_spans()
    assert [s.span_data.type for s in spans] == ["assembly", "fit"]
    assert spans[0].parent_id is None
    assert spans[1].parent_id == spans[0].span_id


def test_exception_is_recorded_on_span():
    with pytest.raises(ValueError):
        with fit_span(FitSpanData("beta", "tau")):
            raise ValueError("bad window")

    (span,) = fetch_normalized_spans()
    assert span["error"] == {"message": "bad window", "data": {"type": "ValueError"}}


def test_no_spans_without_work():
    assert_no_spans()


def test_span_cannot_finish_twice(caplog):
    span = fit_span(FitSpanData("beta", "t"))
    span.start()
    span.finish()
    with caplog.at_level(logging.WARNING, logger="homokinetics"):
        span.finish()
    assert "already finished" in caplog.text
    assert len(fetch_ordered_spans()) == 1


def test_logging_processor_levels(caplog):
    processor = LoggingSpanProcessor()
    ok: Span[FitSpanData] = Span(None, processor, FitSpanData("beta", "t"))
    failed: Span[FitSpanData] = Span(None, processor, FitSpanData("T", "t"))
    failed.set_error({"message": "boom", "data": None})
    with caplog.at_level(logging.DEBUG, logger="homokinetics"):
        ok.start()
        ok.finish()
        failed.start()
        failed.finish()
    levels = [record.levelno for record in caplog.records]
    assert levels == [logging.DEBUG, logging.WARNING]
    assert "boom" in caplog.records[1].getMessage()


class ExplodingProcessor(TracingProcessor):
    def on_span_start(self, span):
        raise RuntimeError("start")

    def on_span_end(self, span):
        raise RuntimeError("end")

    def shutdown(self):
        pass

    def force_flush(self):
        pass


def test_multi_processor_isolates_failures(caplog, mocker):
    healthy = mocker.Mock(spec=TracingProcessor)
    multi = SynchronousMultiSpanProcessor()
    multi.set_processors([ExplodingProcessor(), healthy])
    span: Span[FitSpanData] = Span(None, multi, FitSpanData("beta", "t"))
    with caplog.at_level(logging.ERROR, logger="homokinetics"):
        span.start()
        span.finish()
    healthy.on_span_start.assert_called_once_with(span)
    healthy.on_span_end.assert_called_once_with(span)
    assert len(caplog.records) == 2
