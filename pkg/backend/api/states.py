from fastapi import APIRouter, HTTPException
import logging

from models.records import to_pairs
from models.requests import ClosestProductRequest, EntanglementRequest
from models.responses import ClosestProductResponse, EntanglementResponse
from nonlocality.exceptions import InvalidState, DimensionMismatch, NonlocalityException
from nonlocality.qstate import closest_product_state, to_magic_basis, weakest_cut

logger = logging.getLogger(__name__)
router = APIRouter()


@router.post("/entanglement", response_model=EntanglementResponse)
def check_entanglement(request: EntanglementRequest) -> EntanglementResponse:
    """Genuine entanglement verdict from the weakest bipartition"""
    try:
        psi = request.state.to_state()
        cut, second = weakest_cut(psi)
        return EntanglementResponse(
            entangled=second > request.eps, weakest_cut=str(cut), second_schmidt=second
        )
    except (InvalidState, DimensionMismatch) as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/closest-product", response_model=ClosestProductResponse)
def closest_product(request: ClosestProductRequest) -> ClosestProductResponse:
    """Closest product state of a symmetric state and its magic-basis coefficients"""
    try:
        s = request.state.to_state()
        ray, overlap = closest_product_state(s)
        magic, _ = to_magic_basis(s)
        return ClosestProductResponse(
            ray=to_pairs(ray), overlap=overlap, magic_h=to_pairs(magic.h)
        )
    except (InvalidState, DimensionMismatch) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except NonlocalityException as e:
        logger.error(f"Closest product search failed: {e}")
        raise HTTPException(status_code=500, detail=str(e))
