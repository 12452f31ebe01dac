"""
Hardy-type test of genuine multipartite nonlocality.

For a fixed pivot party k' the test asks for

    P(0_I | a_I) > 0,
    P(0_I | b_k a_rest) = 0                    for every party k,
    P(1_k' 1_k 0_rest | b_k' b_k a_rest) = 0   for every k != k'.

No mixture over bipartitions of products of non-signaling boxes meets all of
them, so a distribution that does is n-way nonlocal.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from config.settings import settings
from .exceptions import (
    DegenerateSettings,
    DimensionMismatch,
    InvalidState,
    NonUniqueSolution,
    VanishingSuccess,
)
from .measure import JointDistribution, MeasurementSettings, born_distribution, party_mask
from .qstate import DensityMatrix, PureState

logger = logging.getLogger(__name__)

GENUINE = "genuine"
STANDARD = "standard"

INDEPENDENCE_TOL = 1e-10
NULL_TOL = 1e-10
SUCCESS_FLOOR = 1e-24


@dataclass(frozen=True)
class HardyReport:
    pivot: int
    p_success: float
    zero_residuals: Tuple[float, ...]
    passed: bool
    eps_zero: float
    delta_pos: float
    variant: str = GENUINE

    @property
    def max_residual(self) -> float:
        return max(self.zero_residuals) if self.zero_residuals else 0.0


def _check_pivot(n: int, pivot: int):
    if not 1 <= pivot <= n:
        raise InvalidState(f"Pivot {pivot} is not a party of 1..{n}")


def _single_b_terms(d: JointDistribution) -> list[float]:
    n = d.n
    return [d.p(party_mask([k], n), 0) for k in range(1, n + 1)]


def _pair_term(d: JointDistribution, first: int, second: int) -> float:
    """P(1_first 1_second 0_rest | b_first b_second a_rest)."""
    mask = party_mask([first, second], d.n)
    return d.p(mask, mask)


def hardy_conditions(
    d: JointDistribution,
    pivot: int = 1,
    eps_zero: Optional[float] = None,
    delta_pos: Optional[float] = None,
    variant: str = GENUINE,
) -> HardyReport:
    """
    Evaluate the 2n Hardy conditions for `pivot`.

    With variant="standard" the pairwise conditions are replaced by the single
    condition P(1_I | b_I) = 0, the usual multipartite Hardy test.
    """
    eps_zero = settings.EPS_ZERO if eps_zero is None else eps_zero
    delta_pos = settings.DELTA_POS if delta_pos is None else delta_pos
    n = d.n
    _check_pivot(n, pivot)

    residuals = _single_b_terms(d)
    if variant == GENUINE:
        residuals += [_pair_term(d, pivot, k) for k in range(1, n + 1) if k != pivot]
    elif variant == STANDARD:
        all_b = 2**n - 1
        residuals.append(d.p(all_b, all_b))
    else:
        raise ValueError(f"Unknown Hardy variant '{variant}'")

    p_success = d.p(0, 0)
    passed = p_success > delta_pos and max(residuals) < eps_zero
    return HardyReport(
        pivot=pivot,
        p_success=p_success,
        zero_residuals=tuple(residuals),
        passed=passed,
        eps_zero=eps_zero,
        delta_pos=delta_pos,
        variant=variant,
    )


def inequality1(d: JointDistribution, pivot: int = 1) -> float:
    """Left-hand side of the pivot-based Bell-type inequality (<= 0 for bilocal NS models)."""
    _check_pivot(d.n, pivot)
    pairs = sum(_pair_term(d, pivot, k) for k in range(1, d.n + 1) if k != pivot)
    return d.p(0, 0) - sum(_single_b_terms(d)) - pairs


def inequality2(d: JointDistribution) -> float:
    """Left-hand side of the symmetrized inequality; the double sum runs over ordered pairs."""
    n = d.n
    pairs = sum(
        _pair_term(d, first, second)
        for first in range(1, n + 1)
        for second in range(1, n + 1)
        if first != second
    )
    return d.p(0, 0) - sum(_single_b_terms(d)) - pairs / (n - 1)


@dataclass(frozen=True, eq=False)
class HardySubspace:
    """
    Span of |a_I>, the n vectors |b_k a_rest> and the n-1 vectors
    |bbar_pivot bbar_k a_rest>, with the unique state phi of the span that is
    orthogonal to every vector but the first.
    """

    settings: MeasurementSettings
    pivot: int
    basis_vectors: np.ndarray
    phi: PureState
    report: HardyReport = field(compare=False)

    @property
    def constraint_vectors(self) -> np.ndarray:
        return self.basis_vectors[:, 1:]

    def orthonormal_basis(self) -> np.ndarray:
        q, _ = np.linalg.qr(self.basis_vectors)
        return q


def hardy_vectors(settings: MeasurementSettings, pivot: int = 1, variant: str = GENUINE) -> np.ndarray:
    """Columns: |a_I>, then the normalized product vectors of every zero condition."""
    n = settings.n
    _check_pivot(n, pivot)
    columns = [settings.product_vector(0, 0)]
    columns += [settings.product_vector(party_mask([k], n), 0) for k in range(1, n + 1)]
    if variant == GENUINE:
        for k in range(1, n + 1):
            if k != pivot:
                mask = party_mask([pivot, k], n)
                columns.append(settings.product_vector(mask, mask))
    else:
        all_b = 2**n - 1
        columns.append(settings.product_vector(all_b, all_b))
    return np.column_stack(columns)


def construct_hardy_state(
    settings: MeasurementSettings, pivot: int = 1, variant: str = GENUINE
) -> HardySubspace:
    """The unique pure state of the Hardy subspace satisfying every zero condition."""
    settings.check_non_parallel()
    basis = hardy_vectors(settings, pivot, variant)
    singular = np.linalg.svd(basis, compute_uv=False)
    if singular.min() <= INDEPENDENCE_TOL:
        raise DegenerateSettings(
            f"Hardy vectors are dependent (smallest singular value {singular.min():.3e})"
        )

    constraints = basis[:, 1:]
    gram = constraints.conj().T @ basis
    _, values, vh = np.linalg.svd(gram, full_matrices=True)
    values = np.concatenate([values, np.zeros(gram.shape[1] - values.size)])
    null = np.flatnonzero(values < NULL_TOL)
    if null.size != 1:
        raise NonUniqueSolution(
            f"Constraint null space has dimension {null.size}, expected 1"
        )
    vector = basis @ vh[null[0]].conj()
    vector /= np.linalg.norm(vector)

    success = abs(np.vdot(basis[:, 0], vector)) ** 2
    if success <= SUCCESS_FLOOR:
        raise VanishingSuccess(f"<a_I|phi> vanishes ({success:.3e})")

    phi = PureState(settings.n, vector)
    report = hardy_conditions(born_distribution(phi, settings), pivot, variant=variant)
    logger.debug(
        f"Hardy state built: p_success={report.p_success:.6g}, "
        f"max residual={report.max_residual:.3e}"
    )
    return HardySubspace(
        settings=settings, pivot=pivot, basis_vectors=basis, phi=phi, report=report
    )


def mixed_state_check(rho: DensityMatrix, sub: HardySubspace, tol: float = 1e-10) -> bool:
    """
    True when the projection of rho onto the Hardy subspace is proportional to
    |phi><phi|, which makes rho satisfy every zero condition. Positivity of
    <a_I|rho|a_I> is a separate check.
    """
    if rho.n != sub.phi.n:
        raise DimensionMismatch(
            f"dimension mismatch: rho has n={rho.n}, subspace n={sub.phi.n}"
        )
    q = sub.orthonormal_basis()
    projected = q.conj().T @ rho.entries @ q
    values = np.linalg.eigvalsh(projected)[::-1]
    if values[1] > tol:
        return False
    phi_coords = q.conj().T @ sub.phi.amplitudes
    weight = np.vdot(phi_coords, projected @ phi_coords).real
    residual = projected - weight * np.outer(phi_coords, phi_coords.conj())
    return float(np.max(np.abs(residual))) <= tol


def success_probability(state: PureState, settings: MeasurementSettings) -> float:
    """|<a_I|psi>|^2 with normalized rays."""
    return float(abs(np.vdot(settings.product_vector(0, 0), state.amplitudes)) ** 2)
