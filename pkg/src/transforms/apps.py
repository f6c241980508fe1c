"""AppConfig for the transforms app."""
from django.apps import AppConfig


class TransformsConfig(AppConfig):
    """AppConfig for the transforms app."""

    default_auto_field = "django.db.models.BigAutoField"
    name = "transforms"
