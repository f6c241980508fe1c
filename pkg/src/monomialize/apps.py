"""AppConfig for the monomialize app."""
from django.apps import AppConfig


class MonomializeConfig(AppConfig):
    """AppConfig for the monomialize app."""

    default_auto_field = "django.db.models.BigAutoField"
    name = "monomialize"
