"""The error base class shared by every monoforge app."""
from typing import Any


class MonoForgeError(Exception):
    """Base class for all domain errors.

    Subclasses live in the errors module of the app raising them, and the
    app label becomes part of the error name shown to users.
    """

    def __init__(self, message: str, **details: Any) -> None:  # noqa: ANN401
        """Keep the message and any structured details."""
        super().__init__(message)
        self.message = message
        self.details = details

    @property
    def error_name(self) -> str:
        """The module qualified error name, like series.NotDivisibleError."""
        app = type(self).__module__.split(".")[0]
        return f"{app}.{type(self).__name__}"

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON friendly representation of this error."""
        return {"error": self.error_name, "message": self.message, "details": self.details}

    def __str__(self) -> str:
        """Show the name before the message."""
        return f"{self.error_name}: {self.message}"
