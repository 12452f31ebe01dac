from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from nonlocality.exceptions import DimensionMismatch
from nonlocality.hardy import HardyReport, inequality1, inequality2
from nonlocality.measure import JointDistribution, MeasurementSettings, Ray
from nonlocality.polytope import LPOutcome, ModelVertexSet
from nonlocality.qstate import PureState, SymmetricState
from nonlocality.search import ExperimentRecord, ExperimentSummary
from nonlocality.symmetric import SymmetricSolution

ComplexPair = Tuple[float, float]


def to_pairs(values: Sequence[complex]) -> List[ComplexPair]:
    return [(float(np.real(v)), float(np.imag(v))) for v in values]


def to_complex(pair: Sequence[float]) -> complex:
    return complex(pair[0], pair[1])


def from_pairs(pairs: Sequence[Sequence[float]]) -> np.ndarray:
    return np.array([to_complex(p) for p in pairs], dtype=complex)


class StateRecord(BaseModel):
    n: int
    amplitudes: List[ComplexPair]

    @classmethod
    def from_state(cls, psi: PureState) -> "StateRecord":
        return cls(n=psi.n, amplitudes=to_pairs(psi.amplitudes))

    def to_state(self) -> PureState:
        return PureState.from_amplitudes(from_pairs(self.amplitudes), self.n)


class SymmetricRecord(BaseModel):
    n: int
    h: List[ComplexPair]

    @classmethod
    def from_state(cls, s: SymmetricState) -> "SymmetricRecord":
        return cls(n=s.n, h=to_pairs(s.h))

    def to_state(self) -> SymmetricState:
        state = SymmetricState.from_coefficients(from_pairs(self.h))
        if state.n != self.n:
            raise DimensionMismatch(f"dimension mismatch: {len(self.h)} coefficients for n={self.n}")
        return state


class RayRecord(BaseModel):
    a: Tuple[ComplexPair, ComplexPair]
    b: Tuple[ComplexPair, ComplexPair]


class SettingsRecord(BaseModel):
    n: int
    rays: List[RayRecord]

    @classmethod
    def from_settings(cls, settings: MeasurementSettings) -> "SettingsRecord":
        return cls(
            n=settings.n,
            rays=[
                RayRecord(a=to_pairs(a.vector()), b=to_pairs(b.vector()))
                for a, b in settings.pairs
            ],
        )

    def to_settings(self) -> MeasurementSettings:
        return MeasurementSettings(
            self.n,
            tuple(
                (Ray.from_vector(from_pairs(r.a)), Ray.from_vector(from_pairs(r.b)))
                for r in self.rays
            ),
        )


class DistributionRecord(BaseModel):
    n: int
    p: List[List[float]]

    @classmethod
    def from_distribution(cls, d: JointDistribution) -> "DistributionRecord":
        return cls(n=d.n, p=d.clamped().tolist())

    def to_distribution(self) -> JointDistribution:
        return JointDistribution(self.n, np.array(self.p, dtype=float))


class HardyReportRecord(BaseModel):
    pivot: int
    p_success: float
    zero_residuals: List[float]
    passed: bool
    ineq1: float
    ineq2: float
    variant: str = "genuine"

    @classmethod
    def from_report(cls, report: HardyReport, d: JointDistribution) -> "HardyReportRecord":
        return cls(
            pivot=report.pivot,
            p_success=report.p_success,
            zero_residuals=list(report.zero_residuals),
            passed=report.passed,
            ineq1=inequality1(d, report.pivot),
            ineq2=inequality2(d),
            variant=report.variant,
        )


class SolutionRecord(BaseModel):
    x: ComplexPair
    y1: ComplexPair
    y: ComplexPair
    x1: ComplexPair
    p_success: float
    excluded_x: List[float] = []
    residual: Optional[float] = None
    settings: Optional[SettingsRecord] = None

    @classmethod
    def from_solution(cls, solution: SymmetricSolution) -> "SolutionRecord":
        x, y1, y, x1 = to_pairs([solution.x, solution.y1, solution.y, solution.x1])
        return cls(
            x=x,
            y1=y1,
            y=y,
            x1=x1,
            p_success=solution.p_success,
            excluded_x=list(solution.excluded_x),
            residual=solution.residual,
            settings=SettingsRecord.from_settings(solution.settings),
        )


class LPOutcomeRecord(BaseModel):
    feasible: bool
    weights: Optional[List[float]] = None
    certificate: Optional[List[List[float]]] = None
    margin: float
    model: str = ""

    @classmethod
    def from_outcome(cls, outcome: LPOutcome) -> "LPOutcomeRecord":
        return cls(
            feasible=outcome.feasible,
            weights=None if outcome.weights is None else outcome.weights.tolist(),
            certificate=None if outcome.certificate is None else outcome.certificate.tolist(),
            margin=outcome.margin,
            model=outcome.model,
        )


class VertexColumn(BaseModel):
    bipartition: Optional[List[List[int]]] = None
    p: List[List[float]]


class VertexSetRecord(BaseModel):
    model: str
    n: int
    columns: List[VertexColumn]

    @classmethod
    def from_vertex_set(cls, vs: ModelVertexSet) -> "VertexSetRecord":
        tags = vs.tags or (None,) * len(vs)
        return cls(
            model=vs.model,
            n=vs.n,
            columns=[
                VertexColumn(
                    bipartition=None if tag is None else [list(tag.alpha), list(tag.complement)],
                    p=column.tolist(),
                )
                for tag, column in zip(tags, vs.columns)
            ],
        )


class ExperimentRow(BaseModel):
    index: int
    seed: int
    passed: bool
    p_success: float
    max_residual: float
    iterations: int
    lp_checked: bool
    lp_infeasible: Optional[bool] = None
    lp_margin: Optional[float] = None

    @classmethod
    def from_record(cls, record: ExperimentRecord) -> "ExperimentRow":
        return cls(**record.__dict__)


class ExperimentSummaryRecord(BaseModel):
    n: int
    count: int
    seed: int
    passed: int
    failed: int
    lp_checked: int
    lp_infeasible: int
    records: List[ExperimentRow]

    @classmethod
    def from_summary(cls, summary: ExperimentSummary) -> "ExperimentSummaryRecord":
        return cls(
            n=summary.n,
            count=summary.count,
            seed=summary.seed,
            passed=summary.passed,
            failed=summary.failed,
            lp_checked=summary.lp_checked,
            lp_infeasible=summary.lp_infeasible,
            records=[ExperimentRow.from_record(r) for r in summary.records],
        )


class RunManifest(BaseModel):
    command: str
    parameters: Dict[str, Any]
    seed: Optional[int] = None
    version: str
    inputs: Dict[str, str] = Field(default_factory=dict)
    outputs: Dict[str, str] = Field(default_factory=dict)
    created: datetime = Field(default_factory=datetime.utcnow)
