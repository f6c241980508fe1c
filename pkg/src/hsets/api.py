"""The hsets API."""
import logging

from django.http import HttpRequest
from ninja import Router
from utils.api import ApiResponseType
from utils.api import api_response
from utils.schema import ApiMessageSchema
from utils.schema import ApiResponseSchema

from .parametrize import parametrize
from .schema import ParametrizeRequestSchema
from .schema import SignRequestSchema
from .schema import parametrize_result_to_dict
from .signs import sign_on_quadrant

logger = logging.getLogger("monoforge")

# initialise API router
router = Router()


@router.post(
    "/sign/",
    response={200: ApiResponseSchema, 400: ApiMessageSchema, 422: ApiMessageSchema},
    summary="The sign of a normal germ on a sub-quadrant.",
)
def sign(request: HttpRequest, payload: SignRequestSchema) -> ApiResponseType:
    """API endpoint returning +, − or 0."""
    quadrant = payload.to_quadrant()
    result = sign_on_quadrant(payload.to_certificate(), quadrant)
    return api_response({"quadrant": quadrant.describe(), "sign": result.label})


@router.post(
    "/parametrize/",
    response={200: ApiResponseSchema, 400: ApiMessageSchema, 422: ApiMessageSchema},
    summary="Charts parametrizing an H-basic set near the origin.",
)
def parametrize_set(request: HttpRequest, payload: ParametrizeRequestSchema) -> ApiResponseType:
    """API endpoint returning the charts and the coverage report."""
    result = parametrize(payload.hset.to_set(), payload.config.to_parametrize_config())
    logger.info(f"parametrize request gave {len(result.charts)} chart(s)")
    return api_response(parametrize_result_to_dict(result))
