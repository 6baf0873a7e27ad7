from __future__ import annotations

import os

from .logger import logger

_default_threads: int | None = None


def _threads_from_env() -> int:
    raw = os.getenv("HOMOKINETICS_THREADS")
    fallback = os.cpu_count() or 1
    if raw is None:
        return fallback
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer HOMOKINETICS_THREADS={raw!r}")
        return fallback
    if value < 1:
        logger.warning(f"Ignoring HOMOKINETICS_THREADS={value}, must be >= 1")
        return fallback
    return value


def set_default_threads(threads: int | None) -> None:
    """Cap the number of replicas simulated concurrently. `None` restores the environment default."""
    global _default_threads
    if threads is not None and threads < 1:
        raise ValueError("threads must be >= 1")
    _default_threads = threads


def get_default_threads() -> int:
    if _default_threads is not None:
        return _default_threads
    return _threads_from_env()
