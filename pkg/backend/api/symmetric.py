from fastapi import APIRouter, HTTPException
import logging

from models.records import SolutionRecord, to_complex
from models.requests import SymmetricSolveRequest
from nonlocality.exceptions import (
    DegenerateX,
    DimensionMismatch,
    IdenticallyZeroF,
    IdenticallyZeroPolynomial,
    InvalidState,
    NonlocalityException,
    NotEntangled,
    SingularDenominator,
)
from nonlocality.qstate import SymmetricState
from nonlocality.symmetric import solve_auto, solve_settings

logger = logging.getLogger(__name__)
router = APIRouter()


def _requested_state(request: SymmetricSolveRequest) -> SymmetricState:
    given = [request.state is not None, request.ghz is not None, request.w is not None]
    if sum(given) != 1:
        raise InvalidState("Give exactly one of state, ghz or w")
    if request.ghz is not None:
        return SymmetricState.ghz(request.ghz.n, request.ghz.theta)
    if request.w is not None:
        return SymmetricState.w(request.w)
    return request.state.to_state()


@router.post("/solve", response_model=SolutionRecord)
def solve(request: SymmetricSolveRequest) -> SolutionRecord:
    """Closed-form Hardy settings; automatic x unless one is given"""
    try:
        s = _requested_state(request)
        if request.x is None:
            solution = solve_auto(s)
        else:
            solution = solve_settings(s, to_complex(request.x))
        return SolutionRecord.from_solution(solution)
    except (InvalidState, DimensionMismatch) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except (
        NotEntangled,
        DegenerateX,
        SingularDenominator,
        IdenticallyZeroPolynomial,
        IdenticallyZeroF,
    ) as e:
        raise HTTPException(status_code=422, detail=str(e))
    except NonlocalityException as e:
        logger.error(f"Symmetric solver failed: {e}")
        raise HTTPException(status_code=500, detail=str(e))
