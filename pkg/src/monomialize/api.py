"""The monomialize API."""
import logging

from django.http import HttpRequest
from ninja import Router
from utils.api import ApiResponseType
from utils.api import api_response
from utils.schema import ApiMessageSchema
from utils.schema import ApiResponseSchema

from .algorithm import monomialize
from .export import tree_summary
from .schema import MonomializeRequestSchema

logger = logging.getLogger("monoforge")

# initialise API router
router = Router()


@router.post(
    "/run/",
    response={200: ApiResponseSchema, 400: ApiMessageSchema, 422: ApiMessageSchema},
    summary="Build the admissible tree for a tuple of targets.",
)
def run(request: HttpRequest, payload: MonomializeRequestSchema) -> ApiResponseType:
    """API endpoint running the monomialization and its checks."""
    targets = [t.to_series() for t in payload.targets]
    root = monomialize(targets, payload.config.to_config())
    logger.info(f"monomialize request with {len(targets)} target(s) done")
    return api_response(tree_summary(root, payload.targets[0].vars))
