"""
Linear-programming membership of joint distributions in the fully-local set and
in the set of bilocal non-signaling models, with Farkas certificates on failure.

Both sets are convex hulls of finitely many columns: products of deterministic
single-party boxes, and (for three parties) products of a deterministic box on
one side of a cut with an extreme two-party non-signaling box on the other.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from .exceptions import DimensionMismatch, NumericalFailure, SignalingDistribution
from .hardy import inequality1, inequality2
from .measure import JointDistribution, marginal, ns_residual, party_mask
from .qstate import Bipartition, all_bipartitions
from .simplex import phase_one

logger = logging.getLogger(__name__)

FULLY_LOCAL = "fully-local"
BILOCAL_NS = "bilocal-ns"
NS_BIPARTITE = "ns-bipartite"

DETERMINISTIC = "deterministic"
PR_BOX = "pr-box"

MAX_LOCAL_PARTIES = 4


class Classification(str, Enum):
    LOCAL = "local"
    BILOCAL = "nonlocal-but-bilocal"
    GENUINE = "genuinely-nonlocal"


@dataclass(frozen=True, eq=False)
class BoxVertex:
    """Conditional distribution table[s][r] on `scope`, first party of the scope most significant."""

    scope: Tuple[int, ...]
    table: np.ndarray
    kind: str = DETERMINISTIC


@dataclass(frozen=True, eq=False)
class ModelVertexSet:
    model: str
    n: int
    columns: np.ndarray
    tags: Tuple[Optional[Bipartition], ...] = ()

    def __len__(self) -> int:
        return len(self.columns)

    def matrix(self) -> np.ndarray:
        """One flattened column per vertex."""
        return self.columns.reshape(len(self.columns), -1).T


@dataclass(frozen=True, eq=False)
class LPOutcome:
    feasible: bool
    margin: float
    weights: Optional[np.ndarray] = None
    certificate: Optional[np.ndarray] = None
    model: str = ""
    pivots: int = field(default=0, compare=False)

    def reconstruction(self, vs: ModelVertexSet) -> np.ndarray:
        return np.tensordot(self.weights, vs.columns, axes=1)


def _single_party_boxes(party: int) -> List[BoxVertex]:
    """The four deterministic strategies (outcome under a, outcome under b)."""
    boxes = []
    for out_a, out_b in product((0, 1), repeat=2):
        table = np.zeros((2, 2))
        table[0, out_a] = 1.0
        table[1, out_b] = 1.0
        boxes.append(BoxVertex((party,), table))
    return boxes


def compose_boxes(n: int, boxes: Sequence[BoxVertex]) -> np.ndarray:
    """Full n-party table of a product of boxes on disjoint scopes covering 1..n."""
    parties = [p for box in boxes for p in box.scope]
    if sorted(parties) != list(range(1, n + 1)):
        raise DimensionMismatch(f"dimension mismatch: scopes {parties} do not cover 1..{n}")

    tensor = np.ones(())
    setting_axes, outcome_axes = [], []
    for box in boxes:
        k = len(box.scope)
        offset = tensor.ndim
        tensor = np.multiply.outer(tensor, box.table.reshape((2,) * (2 * k)))
        setting_axes += [(p, offset + i) for i, p in enumerate(box.scope)]
        outcome_axes += [(p, offset + k + i) for i, p in enumerate(box.scope)]

    order = [axis for _, axis in sorted(setting_axes)] + [axis for _, axis in sorted(outcome_axes)]
    return np.transpose(tensor, order).reshape(2**n, 2**n)


def deterministic_local_vertices(n: int) -> ModelVertexSet:
    if not 2 <= n <= MAX_LOCAL_PARTIES:
        raise DimensionMismatch(f"Fully-local vertex sets are built for 2..{MAX_LOCAL_PARTIES} parties")
    per_party = [_single_party_boxes(k) for k in range(1, n + 1)]
    columns = np.array([compose_boxes(n, choice) for choice in product(*per_party)])
    return ModelVertexSet(FULLY_LOCAL, n, columns, tuple(None for _ in columns))


def _pr_box(alpha: int, beta: int, gamma: int, scope: Tuple[int, int]) -> BoxVertex:
    table = np.zeros((4, 4))
    for x, y, a, b in product((0, 1), repeat=4):
        if a ^ b == (x * y) ^ (alpha * x) ^ (beta * y) ^ gamma:
            table[x * 2 + y, a * 2 + b] = 0.5
    return BoxVertex(scope, table, PR_BOX)


def ns_bipartite_vertices(scope: Tuple[int, int] = (1, 2)) -> List[BoxVertex]:
    """16 deterministic two-party boxes followed by the 8 PR-box variants."""
    deterministic = [
        BoxVertex(scope, compose_boxes(2, pair))
        for pair in product(_single_party_boxes(1), _single_party_boxes(2))
    ]
    pr_boxes = [_pr_box(*bits, scope) for bits in product((0, 1), repeat=3)]
    return deterministic + pr_boxes


@lru_cache(maxsize=1)
def bilocal_ns_vertices() -> ModelVertexSet:
    """Columns for every cut {k}|{i,j}: 4 deterministic boxes on k times 24 NS boxes on {i,j}."""
    columns, tags = [], []
    for cut in all_bipartitions(3):
        single = cut.alpha
        pair = cut.complement
        for det in _single_party_boxes(single[0]):
            for box in ns_bipartite_vertices(pair):
                columns.append(compose_boxes(3, (det, box)))
                tags.append(cut)
    columns = np.array(columns)
    columns.setflags(write=False)
    return ModelVertexSet(BILOCAL_NS, 3, columns, tuple(tags))


def _certificate(
    dual: np.ndarray, d: JointDistribution, vs: ModelVertexSet
) -> Tuple[np.ndarray, float]:
    """Fold the normalization multiplier into the entries, rescale, and shift onto the columns."""
    dim = 2**d.n
    functional = dual[:-1].reshape(dim, dim) + dual[-1] / dim
    functional = functional / np.max(np.abs(functional))

    column_values = np.einsum("jsr,sr->j", vs.columns, functional)
    shift = float(column_values.max())
    if shift > 0:
        if shift > settings.CERT_TOL:
            logger.warning(f"Certificate shifted by {shift:.3e} to stay nonpositive on every column")
        # every column has entry sum 2^n
        functional = functional - shift / dim
    column_values = np.einsum("jsr,sr->j", vs.columns, functional)
    margin = float(np.sum(functional * d.table))

    if column_values.max() > settings.CERT_TOL or margin <= 0:
        raise NumericalFailure(
            f"Certificate failed validation (max column value {column_values.max():.3e}, margin {margin:.3e})"
        )
    return functional, margin


def lp_membership(
    d: JointDistribution, vs: ModelVertexSet, tol: Optional[float] = None
) -> LPOutcome:
    """
    Is d a convex combination of the columns of vs? Returns validated weights when
    it is and a validated separating functional when it is not.
    """
    tol = settings.LP_TOL if tol is None else tol
    if d.n != vs.n:
        raise DimensionMismatch(f"dimension mismatch: distribution n={d.n}, vertex set n={vs.n}")
    residual = ns_residual(d)
    if residual > settings.NS_TOL:
        raise SignalingDistribution(f"Distribution signals (residual {residual:.3e})")

    a = np.vstack([vs.matrix(), np.ones(len(vs))])
    b = np.concatenate([d.table.ravel(), [1.0]])
    result = phase_one(a, b, tol=tol)

    if result.feasible:
        weights = result.x / result.x.sum()
        error = float(np.max(np.abs(np.tensordot(weights, vs.columns, axes=1) - d.table)))
        if error > tol:
            raise NumericalFailure(f"Feasible weights reproduce P only to {error:.3e}")
        logger.debug(f"{vs.model}: feasible, {np.count_nonzero(weights)} columns in support")
        return LPOutcome(
            feasible=True, margin=0.0, weights=weights, model=vs.model, pivots=result.iterations
        )

    certificate, margin = _certificate(result.dual, d, vs)
    logger.debug(f"{vs.model}: infeasible, certificate margin {margin:.3e}")
    return LPOutcome(
        feasible=False,
        margin=margin,
        certificate=certificate,
        model=vs.model,
        pivots=result.iterations,
    )


def classify_detailed(d: JointDistribution) -> Tuple[Classification, LPOutcome]:
    """Label of a three-party distribution together with the deciding LP outcome."""
    if d.n != 3:
        raise DimensionMismatch(f"dimension mismatch: classification needs n=3, got n={d.n}")
    local = lp_membership(d, deterministic_local_vertices(3))
    if local.feasible:
        label, outcome = Classification.LOCAL, local
    else:
        bilocal = lp_membership(d, bilocal_ns_vertices())
        if bilocal.feasible:
            label, outcome = Classification.BILOCAL, bilocal
        else:
            label, outcome = Classification.GENUINE, bilocal
    logger.info(f"Classified distribution as {label.value}")
    return label, outcome


def classify(d: JointDistribution) -> Classification:
    label, _ = classify_detailed(d)
    return label


def _pair_table(d: JointDistribution, pair: Tuple[int, int]) -> np.ndarray:
    """Two-party marginal table with every other party measuring a."""
    first, second = pair
    n = d.n
    table = np.zeros((4, 4))
    for x, y, a, b in product((0, 1), repeat=4):
        s = party_mask([first], n) * x | party_mask([second], n) * y
        r = party_mask([first], n) * a | party_mask([second], n) * b
        table[x * 2 + y, a * 2 + b] = marginal(d, pair, s, r)
    return table


def chsh_value(box, pair: Optional[Tuple[int, int]] = None) -> float:
    """
    sum_{xy} (-1)^{xy} E(x, y) for a two-party box (4x4 table) or for the
    marginal of `pair` in a JointDistribution. Local models reach at most 2.
    """
    if isinstance(box, JointDistribution):
        table = box.table if box.n == 2 and pair is None else _pair_table(box, pair or (1, 2))
    elif isinstance(box, BoxVertex):
        table = box.table
    else:
        table = np.asarray(box, dtype=float)
    parity = np.array([1.0, -1.0, -1.0, 1.0])
    correlators = table @ parity
    return float(correlators[0] + correlators[1] + correlators[2] - correlators[3])


def verify_extremality(boxes: Optional[Sequence[BoxVertex]] = None) -> List[bool]:
    """For every box, whether it lies outside the convex hull of the others."""
    boxes = list(ns_bipartite_vertices()) if boxes is None else list(boxes)
    tables = np.array([box.table for box in boxes])
    extreme = []
    for index, box in enumerate(boxes):
        others = ModelVertexSet(NS_BIPARTITE, 2, np.delete(tables, index, axis=0))
        outcome = lp_membership(JointDistribution(2, box.table), others)
        extreme.append(not outcome.feasible)
    return extreme


def vertex_inequality_maxima() -> Dict[str, float]:
    """Maxima of both inequality left-hand sides over every bilocal non-signaling vertex."""
    distributions = [JointDistribution(3, column) for column in bilocal_ns_vertices().columns]
    maxima = {
        f"inequality1_pivot{pivot}": max(inequality1(d, pivot) for d in distributions)
        for pivot in (1, 2, 3)
    }
    maxima["inequality2"] = max(inequality2(d) for d in distributions)
    logger.info(f"Vertex maxima: {maxima}")
    return maxima
