from fastapi import APIRouter, HTTPException
import logging

from models.records import DistributionRecord, HardyReportRecord
from models.requests import DistributionRequest, HardyReportRequest
from nonlocality.exceptions import NonlocalityException
from nonlocality.hardy import hardy_conditions
from nonlocality.measure import born_distribution

logger = logging.getLogger(__name__)
router = APIRouter()


@router.post("/report", response_model=HardyReportRecord)
def hardy_report(request: HardyReportRequest) -> HardyReportRecord:
    """Evaluate the Hardy conditions and both inequalities on a distribution"""
    try:
        d = request.distribution.to_distribution()
        report = hardy_conditions(
            d,
            pivot=request.pivot,
            eps_zero=request.eps_zero,
            delta_pos=request.delta_pos,
            variant=request.variant,
        )
        return HardyReportRecord.from_report(report, d)
    except (NonlocalityException, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/distribution", response_model=DistributionRecord)
def distribution(request: DistributionRequest) -> DistributionRecord:
    """Born-rule table of a state under the given settings"""
    try:
        d = born_distribution(request.state.to_state(), request.settings.to_settings())
        return DistributionRecord.from_distribution(d)
    except NonlocalityException as e:
        raise HTTPException(status_code=400, detail=str(e))
