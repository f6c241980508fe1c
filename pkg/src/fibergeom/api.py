"""The fibergeom API."""
import logging

from django.http import HttpRequest
from ninja import Router
from utils.api import ApiResponseType
from utils.api import api_response
from utils.schema import ApiMessageSchema
from utils.schema import ApiResponseSchema

from .appendix import appendix_demo
from .cutting import fiber_cut
from .schema import FiberCutRequestSchema
from .schema import fiber_cut_to_dict

logger = logging.getLogger("monoforge")

# initialise API router
router = Router()


@router.post(
    "/fibercut/",
    response={200: ApiResponseSchema, 400: ApiMessageSchema, 422: ApiMessageSchema},
    summary="Cut a manifold down to the fiberwise critical locus of φ.",
)
def fibercut(request: HttpRequest, payload: FiberCutRequestSchema) -> ApiResponseType:
    """API endpoint returning the critical set equations and the sampled checks."""
    report = fiber_cut(
        payload.to_manifold(),
        grid=payload.grid,
        halvings=payload.halvings,
        sweep_grid=payload.sweep_grid,
    )
    return api_response(fiber_cut_to_dict(report, payload.names))


@router.get(
    "/appendix/",
    response={200: ApiResponseSchema, 400: ApiMessageSchema},
    summary="The exact empty germ computation for M = {y > x}.",
)
def appendix(request: HttpRequest) -> ApiResponseType:
    """API endpoint returning the appendix report."""
    return api_response(appendix_demo().as_dict())
