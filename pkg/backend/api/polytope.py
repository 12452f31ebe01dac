from fastapi import APIRouter, HTTPException
import logging

from models.records import LPOutcomeRecord
from models.requests import ClassifyRequest
from models.responses import VertexCheckResponse, ClassificationResponse
from nonlocality.exceptions import (
    DimensionMismatch,
    InvalidState,
    NumericalFailure,
    SignalingDistribution,
)
from nonlocality.polytope import bilocal_ns_vertices, classify_detailed, vertex_inequality_maxima

logger = logging.getLogger(__name__)
router = APIRouter()

VERTEX_TOL = 1e-12


@router.post("/classify", response_model=ClassificationResponse)
def classify(request: ClassifyRequest) -> ClassificationResponse:
    """Local, nonlocal-but-bilocal or genuinely nonlocal, with the deciding LP outcome"""
    try:
        label, outcome = classify_detailed(request.distribution.to_distribution())
        return ClassificationResponse(
            label=label.value, outcome=LPOutcomeRecord.from_outcome(outcome)
        )
    except (InvalidState, DimensionMismatch, SignalingDistribution) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except NumericalFailure as e:
        logger.error(f"Classification failed: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@router.get("/vertex-check", response_model=VertexCheckResponse)
def vertex_check() -> VertexCheckResponse:
    """Maxima of both inequalities over every bilocal non-signaling vertex"""
    maxima = vertex_inequality_maxima()
    holds = max(maxima.values()) <= VERTEX_TOL
    return VertexCheckResponse(
        vertex_count=len(bilocal_ns_vertices()),
        maxima=maxima,
        holds=holds,
        message=None if holds else "An inequality is violated by a bilocal vertex",
    )
