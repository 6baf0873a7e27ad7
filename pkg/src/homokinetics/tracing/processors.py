from __future__ import annotations

import json
import threading
from typing import Any

from ..logger import logger
from .processor_interface import TracingProcessor
from .spans import Span


class LoggingSpanProcessor(TracingProcessor):
    """Forwards every finished span to the package logger as one JSON line at DEBUG.

    Spans that carry an error are logged at WARNING instead.
    """

    def on_span_start(self, span: Span[Any]) -> None:
        pass

    def on_span_end(self, span: Span[Any]) -> None:
        exported = span.export()
        if exported is None:
            return
        if span.error is not None:
            logger.warning(f"Span {span.span_data.type} failed: {json.dumps(exported, default=str)}")
        else:
            logger.debug(f"Span {span.span_data.type}: {json.dumps(exported, default=str)}")

    def shutdown(self) -> None:
        pass

    def force_flush(self) -> None:
        pass


class SynchronousMultiSpanProcessor(TracingProcessor):
    """
    Forwards all calls to a list of TracingProcessors, in order of registration.
    """

    def __init__(self) -> None:
        # Using a tuple to avoid race conditions when iterating over processors
        self._processors: tuple[TracingProcessor, ...] = ()
        self._lock = threading.Lock()

    def add_tracing_processor(self, tracing_processor: TracingProcessor) -> None:
        with self._lock:
            self._processors += (tracing_processor,)

    def set_processors(self, processors: list[TracingProcessor]) -> None:
        with self._lock:
            self._processors = tuple(processors)

    def on_span_start(self, span: Span[Any]) -> None:
        for processor in self._processors:
            try:
                processor.on_span_start(span)
            except Exception as e:
                logger.error(f"Error in span processor {processor} during on_span_start: {e}")

    def on_span_end(self, span: Span[Any]) -> None:
        for processor in self._processors:
            try:
                processor.on_span_end(span)
            except Exception as e:
                logger.error(f"Error in span processor {processor} during on_span_end: {e}")

    def shutdown(self) -> None:
        for processor in self._processors:
            logger.debug(f"Shutting down span processor {processor}")
            try:
                processor.shutdown()
            except Exception as e:
                logger.error(f"Error shutting down span processor {processor}: {e}")

    def force_flush(self) -> None:
        for processor in self._processors:
            try:
                processor.force_flush()
            except Exception as e:
                logger.error(f"Error flushing span processor {processor}: {e}")
