"""AppConfig for the series app."""
from django.apps import AppConfig


class SeriesConfig(AppConfig):
    """AppConfig for the series app."""

    default_auto_field = "django.db.models.BigAutoField"
    name = "series"
