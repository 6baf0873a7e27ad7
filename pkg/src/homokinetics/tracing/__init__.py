from __future__ import annotations

import atexit
from typing import Any

from .processor_interface import TracingProcessor
from .processors import LoggingSpanProcessor, SynchronousMultiSpanProcessor
from .span_data import AssemblySpanData, FitSpanData, ReplicaSpanData, SpanData
from .spans import Span, SpanError, TSpanData, active_span

__all__ = [
    "add_trace_processor",
    "assembly_span",
    "fit_span",
    "get_current_span",
    "replica_span",
    "set_trace_processors",
    "AssemblySpanData",
    "FitSpanData",
    "LoggingSpanProcessor",
    "ReplicaSpanData",
    "Span",
    "SpanData",
    "SpanError",
    "TracingProcessor",
]

_multi_processor = SynchronousMultiSpanProcessor()
_multi_processor.add_tracing_processor(LoggingSpanProcessor())
atexit.register(_multi_processor.shutdown)


def add_trace_processor(span_processor: TracingProcessor) -> None:
    """
    Adds a new trace processor. This processor will receive all spans.
    """
    _multi_processor.add_tracing_processor(span_processor)


def set_trace_processors(processors: list[TracingProcessor]) -> None:
    """
    Set the list of trace processors. This will replace the current list of processors.
    """
    _multi_processor.set_processors(processors)


def get_current_span() -> Span[Any] | None:
    return active_span()


def _create_span(span_data: TSpanData) -> Span[TSpanData]:
    current = active_span()
    parent_id = current.span_id if current is not None else None
    return Span(parent_id=parent_id, processor=_multi_processor, span_data=span_data)


def replica_span(span_data: ReplicaSpanData) -> Span[ReplicaSpanData]:
    """Create a span around one replica of a particle run."""
    return _create_span(span_data)


def assembly_span(span_data: AssemblySpanData) -> Span[AssemblySpanData]:
    """Create a span around the assembly of a linearized operator."""
    return _create_span(span_data)


def fit_span(span_data: FitSpanData) -> Span[FitSpanData]:
    return _create_span(span_data)
