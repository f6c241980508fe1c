"""API definition and error handlers."""
import logging

from django.http import HttpRequest
from django.http import HttpResponse
from fibergeom.api import router as fibergeom_router
from hsets.api import router as hsets_router
from monomialize.api import router as monomialize_router
from ninja import NinjaAPI
from ninja.errors import ValidationError
from series.api import router as series_router
from utils.errors import MonoForgeError
from utils.parser import ORJSONParser
from utils.parser import ORJSONRenderer

logger = logging.getLogger("monoforge")

# define the v1 api for JSON
api_v1_json = NinjaAPI(
    version="1",
    parser=ORJSONParser(),
    renderer=ORJSONRenderer(),
    urls_namespace="api-v1-json",
)

api_v1_json.add_router("/series/", series_router, tags=["series"])
api_v1_json.add_router("/monomialize/", monomialize_router, tags=["monomialize"])
api_v1_json.add_router("/hsets/", hsets_router, tags=["hsets"])
api_v1_json.add_router("/fibergeom/", fibergeom_router, tags=["fibergeom"])


@api_v1_json.exception_handler(ValidationError)
def custom_validation_errors(request: HttpRequest, exc: ValidationError) -> HttpResponse:
    """Error handler for validation errors."""
    logger.warning(f"ninja validation error: {exc.errors}")
    return api_v1_json.create_response(
        request,
        {"message": "validation error", "error": "validation", "details": {"errors": exc.errors}},
        status=422,
    )


@api_v1_json.exception_handler(MonoForgeError)
def custom_domain_errors(request: HttpRequest, exc: MonoForgeError) -> HttpResponse:
    """Error handler for errors raised by the computations."""
    logger.warning(f"{exc.error_name}: {exc.message}")
    return api_v1_json.create_response(
        request,
        {"message": exc.message, "error": exc.error_name, "details": exc.details},
        status=400,
    )
