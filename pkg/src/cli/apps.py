"""AppConfig for the cli app."""
from django.apps import AppConfig


class CliConfig(AppConfig):
    """AppConfig for the cli app."""

    default_auto_field = "django.db.models.BigAutoField"
    name = "cli"
