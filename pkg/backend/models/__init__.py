from .records import (
    StateRecord,
    SymmetricRecord,
    RayRecord,
    SettingsRecord,
    DistributionRecord,
    HardyReportRecord,
    SolutionRecord,
    LPOutcomeRecord,
    VertexColumn,
    VertexSetRecord,
    ExperimentRow,
    ExperimentSummaryRecord,
    RunManifest,
)
from .requests import (
    EntanglementRequest,
    ClosestProductRequest,
    HardyReportRequest,
    DistributionRequest,
    GhzSpec,
    SymmetricSolveRequest,
    ClassifyRequest,
)
from .responses import (
    EntanglementResponse,
    ClosestProductResponse,
    ClassificationResponse,
    VertexCheckResponse,
)

__all__ = [
    # File records
    "StateRecord",
    "SymmetricRecord",
    "RayRecord",
    "SettingsRecord",
    "DistributionRecord",
    "HardyReportRecord",
    "SolutionRecord",
    "LPOutcomeRecord",
    "VertexColumn",
    "VertexSetRecord",
    "ExperimentRow",
    "ExperimentSummaryRecord",
    "RunManifest",
    # Request models
    "EntanglementRequest",
    "ClosestProductRequest",
    "HardyReportRequest",
    "DistributionRequest",
    "GhzSpec",
    "SymmetricSolveRequest",
    "ClassifyRequest",
    # Response models
    "EntanglementResponse",
    "ClosestProductResponse",
    "ClassificationResponse",
    "VertexCheckResponse",
]
