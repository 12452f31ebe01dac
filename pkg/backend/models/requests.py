from pydantic import BaseModel, Field
from typing import Optional

from .records import ComplexPair, DistributionRecord, SettingsRecord, StateRecord, SymmetricRecord


class EntanglementRequest(BaseModel):
    state: StateRecord
    eps: float = Field(1e-8, gt=0)


class ClosestProductRequest(BaseModel):
    state: SymmetricRecord


class HardyReportRequest(BaseModel):
    distribution: DistributionRecord
    pivot: int = Field(1, ge=1)
    eps_zero: Optional[float] = None
    delta_pos: Optional[float] = None
    variant: str = "genuine"  # "genuine", "standard"


class DistributionRequest(BaseModel):
    state: StateRecord
    settings: SettingsRecord


class GhzSpec(BaseModel):
    n: int
    theta: float


class SymmetricSolveRequest(BaseModel):
    state: Optional[SymmetricRecord] = None
    ghz: Optional[GhzSpec] = None
    w: Optional[int] = None  # party count of the W state
    x: Optional[ComplexPair] = None


class ClassifyRequest(BaseModel):
    distribution: DistributionRecord
