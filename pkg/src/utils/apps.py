"""AppConfig for the utils app, home of the plumbing shared by every monoforge app."""
from django.apps import AppConfig


class UtilsConfig(AppConfig):
    """Shared plumbing: the error base class, the JSON codec, common schemas and the thread pool."""

    default_auto_field = "django.db.models.BigAutoField"
    name = "utils"
