"""The series API."""
import logging

from django.http import HttpRequest
from ninja import Router
from utils.api import ApiResponseType
from utils.api import api_response
from utils.schema import ApiMessageSchema
from utils.schema import ApiResponseSchema

from .normality import is_normal
from .schema import SeriesSchema
from .schema import normality_to_dict

logger = logging.getLogger("monoforge")

# initialise API router
router = Router()


@router.post(
    "/normalize/",
    response={200: ApiResponseSchema, 400: ApiMessageSchema, 422: ApiMessageSchema},
    summary="Decide whether a series is normal and return its certificate.",
)
def normalize(request: HttpRequest, payload: SeriesSchema) -> ApiResponseType:
    """API endpoint returning the normality verdict."""
    return api_response(normality_to_dict(is_normal(payload.to_series()), payload.vars))
