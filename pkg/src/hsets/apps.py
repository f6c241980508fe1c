"""AppConfig for the hsets app."""
from django.apps import AppConfig


class HsetsConfig(AppConfig):
    """AppConfig for the hsets app."""

    default_auto_field = "django.db.models.BigAutoField"
    name = "hsets"
