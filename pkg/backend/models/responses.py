from pydantic import BaseModel
from typing import Dict, List, Optional

from .records import ComplexPair, LPOutcomeRecord


class EntanglementResponse(BaseModel):
    entangled: bool
    weakest_cut: str
    second_schmidt: float


class ClosestProductResponse(BaseModel):
    ray: List[ComplexPair]
    overlap: float
    magic_h: List[ComplexPair]


class ClassificationResponse(BaseModel):
    label: str
    outcome: LPOutcomeRecord


class VertexCheckResponse(BaseModel):
    vertex_count: int
    maxima: Dict[str, float]
    holds: bool
    message: Optional[str] = None
