"""This module contains the JSON parsers and encoders used by the API and the CLI."""
from typing import Any

import orjson
from django.http import HttpRequest
from ninja.parser import Parser
from ninja.renderers import BaseRenderer

# sorted keys and fixed indentation keep repeated runs byte-identical
ORJSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2


def dumps(data: Any) -> bytes:  # noqa: ANN401
    """Encode data as deterministic JSON with a trailing newline."""
    return orjson.dumps(data, option=ORJSON_OPTIONS | orjson.OPT_APPEND_NEWLINE)


def loads(raw: bytes | str) -> Any:  # noqa: ANN401
    """Decode JSON, raising orjson.JSONDecodeError on malformed input."""
    return orjson.loads(raw)


class ORJSONParser(Parser):
    """The JSON parser for the monoforge API based on orjson."""

    def parse_body(self, request: HttpRequest) -> dict[str, Any]:
        """Parse and return the request body."""
        return orjson.loads(request.body)  # type: ignore[no-any-return]


class ORJSONRenderer(BaseRenderer):
    """The JSON renderer for the monoforge API based on orjson."""

    media_type = "application/json"

    def render(self, request: HttpRequest, data: dict[str, Any], *, response_status: int) -> bytes:
        """Encode the body as JSON and return."""
        return orjson.dumps(data, option=ORJSON_OPTIONS)
