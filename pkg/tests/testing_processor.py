from __future__ import annotations

import threading
from typing import Any, Literal

from homokinetics.tracing import Span, TracingProcessor

SpanEvent = Literal["span_start", "span_end"]


class InMemorySpanProcessor(TracingProcessor):
    """Keeps finished spans for assertions. Replica spans end on worker threads, hence the lock."""

    def __init__(self) -> None:
        self._guard = threading.Lock()
        self._finished: list[Span[Any]] = []
        self._log: list[SpanEvent] = []

    def on_span_start(self, span: Span[Any]) -> None:
        with self._guard:
            self._log.append("span_start")

    def on_span_end(self, span: Span[Any]) -> None:
        with self._guard:
            self._log.append("span_end")
            self._finished.append(span)

    def spans(self) -> list[Span[Any]]:
        with self._guard:
            return sorted(self._finished, key=lambda s: s.started_at or "")

    def events(self) -> list[SpanEvent]:
        with self._guard:
            return list(self._log)

    def clear(self) -> None:
        with self._guard:
            self._finished = []
            self._log = []

    def shutdown(self) -> None:
        pass

    def force_flush(self) -> None:
        pass


SPAN_PROCESSOR_TESTING = InMemorySpanProcessor()


def fetch_ordered_spans() -> list[Span[Any]]:
    return SPAN_PROCESSOR_TESTING.spans()


def fetch_events() -> list[SpanEvent]:
    return SPAN_PROCESSOR_TESTING.events()


def fetch_normalized_spans() -> list[dict[str, Any]]:
    """Finished spans in start order as {"type", "data"[, "error"]}, without ids and timestamps."""
    normalized: list[dict[str, Any]] = []
    for span in fetch_ordered_spans():
        exported = span.export()
        assert exported is not None
        assert exported["object"] == "span"
        assert exported["id"].startswith("span_")
        assert exported["started_at"] and exported["ended_at"]
        data = dict(exported["span_data"])
        entry: dict[str, Any] = {"type": data.pop("type"), "data": data}
        if exported["error"] is not None:
            entry["error"] = exported["error"]
        normalized.append(entry)
    return normalized


def assert_no_spans() -> None:
    finished = fetch_ordered_spans()
    assert not finished, f"Expected no spans, got {[s.span_data.type for s in finished]}"
