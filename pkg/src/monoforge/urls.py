"""monoforge URL Configuration."""
from django.urls import path

from .api import api_v1_json

urlpatterns = [
    path("api/v1/json/", api_v1_json.urls),
]
