import abc
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .spans import Span


class TracingProcessor(abc.ABC):
    """Receives notifications when spans start and end.

    Processors collect, log or export span data. All methods should be thread-safe, since replicas
    finish their spans from worker threads, and should return quickly.
    """

    @abc.abstractmethod
    def on_span_start(self, span: "Span[Any]") -> None:
        """Called synchronously when a span starts."""
        pass

    @abc.abstractmethod
    def on_span_end(self, span: "Span[Any]") -> None:
        """Called synchronously when a span finishes, with its data complete."""
        pass

    @abc.abstractmethod
    def shutdown(self) -> None:
        """Called when the application stops."""
        pass

    @abc.abstractmethod
    def force_flush(self) -> None:
        """Forces an immediate flush of all queued spans."""
        pass
