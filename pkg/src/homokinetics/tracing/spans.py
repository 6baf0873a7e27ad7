from __future__ import annotations

import contextvars
import time
import uuid
from datetime import datetime, timezone
from typing import Any, Generic, TypeVar

from typing_extensions import TypedDict

from ..logger import logger
from .processor_interface import TracingProcessor
from .span_data import SpanData

TSpanData = TypeVar("TSpanData", bound=SpanData)

_active: contextvars.ContextVar[Span[Any] | None] = contextvars.ContextVar(
    "homokinetics_active_span", default=None
)


class SpanError(TypedDict):
    """Failure attached to a span: the exception text and, optionally, structured context."""

    message: str
    data: dict[str, Any] | None


def active_span() -> Span[Any] | None:
    """The innermost span entered in the current context (thread or task)."""
    return _active.get()


class Span(Generic[TSpanData]):
    """A timed operation (a replica run, an operator assembly, a fit) with typed data.

    Use spans as context managers: entering marks the span active and notifies the processor,
    leaving records the end time and hands the finished span over.

    ```python
    with replica_span(ReplicaSpanData("simple_shear", 0, 20_000)) as span:
        span.span_data.rows = 201
    ```
    """

    __slots__ = (
        "span_id",
        "parent_id",
        "span_data",
        "started_at",
        "ended_at",
        "error",
        "_clock",
        "_elapsed",
        "_sink",
        "_token",
    )

    def __init__(self, parent_id: str | None, processor: TracingProcessor, span_data: TSpanData):
        self.span_id = f"span_{uuid.uuid4().hex[:24]}"
        self.parent_id = parent_id
        self.span_data: TSpanData = span_data
        self.started_at: str | None = None
        self.ended_at: str | None = None
        self.error: SpanError | None = None
        self._clock = 0.0
        self._elapsed: float | None = None
        self._sink = processor
        self._token: contextvars.Token[Span[Any] | None] | None = None

    @property
    def elapsed(self) -> float | None:
        """Wall time in seconds between start and finish."""
        return self._elapsed

    def start(self, mark_as_current: bool = False) -> None:
        if self.started_at is not None:
            logger.warning(f"Span {self.span_id} already started")
            return
        self.started_at = datetime.now(timezone.utc).isoformat()
        self._clock = time.perf_counter()
        self._sink.on_span_start(self)
        if mark_as_current:
            self._token = _active.set(self)

    def finish(self, reset_current: bool = False) -> None:
        if self.ended_at is not None:
            logger.warning(f"Span {self.span_id} already finished")
            return
        self._elapsed = time.perf_counter() - self._clock
        self.ended_at = datetime.now(timezone.utc).isoformat()
        self._sink.on_span_end(self)
        if reset_current and self._token is not None:
            _active.reset(self._token)
            self._token = None

    def set_error(self, error: SpanError) -> None:
        self.error = error

    def __enter__(self) -> Span[TSpanData]:
        self.start(mark_as_current=True)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        if exc_val is not None and self.error is None:
            self.set_error({"message": str(exc_val), "data": {"type": type(exc_val).__name__}})
        # a generator closed in another context cannot reset the token it never set
        self.finish(reset_current=exc_type is not GeneratorExit)

    def export(self) -> dict[str, Any] | None:
        return {
            "object": "span",
            "id": self.span_id,
            "parent_id": self.parent_id,
            "started_at": self.started_at,
            "ended_at": self.ended_at,
            "elapsed": self._elapsed,
            "span_data": self.span_data.export(),
            "error": self.error,
        }
