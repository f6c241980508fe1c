"""API related utility functions."""
from typing import Any
from typing import TypeAlias

from .schema import ApiMessageSchema

# type aliases to make API return types more readable
ApiResponseType: TypeAlias = tuple[int, ApiMessageSchema | dict[str, Any]]


def api_response(result: Any, message: str = "OK") -> ApiResponseType:  # noqa: ANN401
    """Wrap a computed result in the standard response envelope."""
    return 200, {"message": message, "monoforge_response": result}
