from __future__ import annotations

import re

from pydantic import TypeAdapter, ValidationError
from typing_extensions import TypeVar

from ..exceptions import ConfigError
from ..logger import logger
from ..tracing import SpanError, get_current_span

T = TypeVar("T")


def _line_of(json_str: str, key: str | int | None) -> int | None:
    if not isinstance(key, str):
        return None
    match = re.search(rf'"{re.escape(key)}"\s*:', json_str)
    if match is None:
        return None
    return json_str.count("\n", 0, match.start()) + 1


def validate_json(json_str: str, type_adapter: TypeAdapter[T]) -> T:
    """Validate `json_str` against `type_adapter`, reporting the first problem as a ConfigError.

    The error names the dotted field path and, when the key appears in the text, its line number.
    """
    try:
        return type_adapter.validate_json(json_str)
    except ValidationError as e:
        first = e.errors()[0]
        location = [str(part) for part in first["loc"]]
        field = ".".join(location) or None
        line = _line_of(json_str, first["loc"][-1] if first["loc"] else None)
        span = get_current_span()
        if span is not None:
            span.set_error(
                SpanError(message="Invalid scenario JSON", data={"field": field, "line": line})
            )
        else:
            logger.debug(f"Invalid scenario JSON at {field} (line {line})")
        raise ConfigError(first["msg"], field=field, line=line) from e
