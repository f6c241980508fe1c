"""AppConfig for the fibergeom app."""
from django.apps import AppConfig


class FibergeomConfig(AppConfig):
    """AppConfig for the fibergeom app."""

    default_auto_field = "django.db.models.BigAutoField"
    name = "fibergeom"
