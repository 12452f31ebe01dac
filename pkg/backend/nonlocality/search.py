"""
Numerical search for Hardy settings of arbitrary pure states, and the
random-state experiment built on it.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import least_squares, minimize
from tqdm import tqdm

from config.settings import settings
from .exceptions import InvalidState, NonlocalityException, NumericalFailure
from .hardy import HardyReport, construct_hardy_state, hardy_conditions
from .measure import MeasurementSettings, Ray, born_distribution
from .polytope import bilocal_ns_vertices, lp_membership
from .qstate import PureState, bloch_ray, genuine_entanglement_check, haar_random_pure

logger = logging.getLogger(__name__)

PIVOT = 1
ANGLES_PER_PARTY = 4
POLISH_TOL = 1e-15


class SearchConfig(BaseModel):
    multistarts: int = Field(default_factory=lambda: settings.SEARCH_MULTISTARTS, gt=0)
    max_iters: int = Field(default_factory=lambda: settings.SEARCH_MAX_ITERS, gt=0)
    penalty: float = Field(default_factory=lambda: settings.SEARCH_PENALTY, gt=0)
    eps_zero: float = Field(default_factory=lambda: settings.SEARCH_EPS_ZERO, gt=0)
    delta_pos: float = Field(default_factory=lambda: settings.SEARCH_DELTA_POS, gt=0)
    seed: int = Field(default_factory=lambda: settings.SEED, ge=0)


@dataclass(frozen=True, eq=False)
class SettingsFound:
    settings: MeasurementSettings
    report: HardyReport
    start: int
    iterations: int

    @property
    def p_success(self) -> float:
        return self.report.p_success


@dataclass(frozen=True)
class NoSettingsFound:
    """Every start failed; carries the closest miss."""

    best_residual: float
    best_p_success: float
    iterations: int


@dataclass(frozen=True)
class ExperimentRecord:
    index: int
    seed: int
    passed: bool
    p_success: float
    max_residual: float
    iterations: int
    lp_checked: bool = False
    lp_infeasible: Optional[bool] = None
    lp_margin: Optional[float] = None


@dataclass(frozen=True)
class ExperimentSummary:
    n: int
    count: int
    seed: int
    records: Tuple[ExperimentRecord, ...] = field(default=())

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.records)

    @property
    def failed(self) -> int:
        return self.count - self.passed

    @property
    def lp_checked(self) -> int:
        return sum(r.lp_checked for r in self.records)

    @property
    def lp_infeasible(self) -> int:
        return sum(bool(r.lp_infeasible) for r in self.records)


def settings_from_angles(n: int, angles: np.ndarray) -> MeasurementSettings:
    """Four Bloch angles (theta_a, phi_a, theta_b, phi_b) per party."""
    angles = np.asarray(angles).reshape(n, ANGLES_PER_PARTY)
    return MeasurementSettings(
        n,
        tuple(
            (Ray.from_vector(bloch_ray(ta, pa)), Ray.from_vector(bloch_ray(tb, pb)))
            for ta, pa, tb, pb in angles
        ),
    )


def _orthogonal(ray: np.ndarray) -> np.ndarray:
    return np.array([-np.conj(ray[1]), np.conj(ray[0])])


def _overlap(tensor: np.ndarray, rays: List[np.ndarray]) -> complex:
    """<r_1 ... r_n|psi> contracted one party at a time."""
    for ray in rays:
        tensor = np.tensordot(ray.conj(), tensor, axes=([0], [0]))
    return complex(tensor)


def _overlaps(tensor: np.ndarray, n: int, angles: np.ndarray) -> Tuple[complex, np.ndarray]:
    """<a_I|psi> and the overlaps with the 2n-1 constraint vectors for pivot 1."""
    angles = angles.reshape(n, ANGLES_PER_PARTY)
    a = [bloch_ray(ta, pa) for ta, pa, _, _ in angles]
    b = [bloch_ray(tb, pb) for _, _, tb, pb in angles]

    constraints = []
    for k in range(n):
        constraints.append(_overlap(tensor, a[:k] + [b[k]] + a[k + 1 :]))
    for k in range(1, n):
        rays = list(a)
        rays[0] = _orthogonal(b[0])
        rays[k] = _orthogonal(b[k])
        constraints.append(_overlap(tensor, rays))
    return _overlap(tensor, a), np.array(constraints)


def _polish(tensor: np.ndarray, n: int, angles: np.ndarray, max_nfev: int) -> np.ndarray:
    """Drive the constraint overlaps to zero from a penalty optimum."""

    def residual(x):
        _, constraints = _overlaps(tensor, n, x)
        return np.concatenate([constraints.real, constraints.imag])

    result = least_squares(
        residual,
        angles,
        method="trf",
        xtol=POLISH_TOL,
        ftol=POLISH_TOL,
        gtol=POLISH_TOL,
        max_nfev=max_nfev,
    )
    return result.x


def find_settings(
    psi: PureState, cfg: Optional[SearchConfig] = None, rng: Optional[np.random.Generator] = None
) -> Union[SettingsFound, NoSettingsFound]:
    """
    Multistart Nelder-Mead on sum_j |<v_j|psi>|^2 - penalty * |<a_I|psi>|^2 over the
    Bloch angles of every ray, a least-squares polish of the zero conditions, and
    a fresh Born-rule verification of every candidate.
    """
    cfg = cfg or SearchConfig()
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    n = psi.n
    tensor = psi.tensor
    scale = np.tile([np.pi, 2 * np.pi, np.pi, 2 * np.pi], n)

    def objective(x):
        success, constraints = _overlaps(tensor, n, x)
        return float(np.sum(np.abs(constraints) ** 2) - cfg.penalty * abs(success) ** 2)

    best_residual, best_success, iterations = np.inf, 0.0, 0
    for start in range(cfg.multistarts):
        x0 = rng.uniform(0.0, 1.0, size=n * ANGLES_PER_PARTY) * scale
        result = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"maxiter": cfg.max_iters, "xatol": 1e-10, "fatol": 1e-14},
        )
        iterations += result.nit
        angles = _polish(tensor, n, result.x, cfg.max_iters)

        success, constraints = _overlaps(tensor, n, angles)
        residual = float(np.sum(np.abs(constraints) ** 2))
        p_success = abs(success) ** 2
        if residual < best_residual:
            best_residual, best_success = residual, p_success
        if residual >= cfg.eps_zero or p_success <= cfg.delta_pos:
            logger.debug(
                f"Start {start}: residual {residual:.3e}, p_success {p_success:.3e}, rejected"
            )
            continue

        found = settings_from_angles(n, angles)
        report = hardy_conditions(
            born_distribution(psi, found),
            pivot=PIVOT,
            eps_zero=cfg.eps_zero,
            delta_pos=cfg.delta_pos,
        )
        if report.passed:
            return SettingsFound(settings=found, report=report, start=start, iterations=iterations)
        logger.warning(f"Start {start}: candidate failed Born-rule verification")

    return NoSettingsFound(
        best_residual=float(best_residual),
        best_p_success=float(best_success),
        iterations=iterations,
    )


def derive_seed(seed: int, index: int) -> int:
    """Per-state seed, independent of worker count and execution order."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _run_one(n: int, index: int, seed: int, cfg: SearchConfig, lp_check: bool) -> ExperimentRecord:
    sub_seed = derive_seed(seed, index)
    rng = np.random.default_rng(sub_seed)
    psi = haar_random_pure(n, rng)
    while not genuine_entanglement_check(psi, eps=settings.ENTANGLEMENT_EPS):
        psi = haar_random_pure(n, rng)

    outcome = find_settings(psi, cfg, rng)
    if isinstance(outcome, NoSettingsFound):
        logger.warning(f"State {index}: no settings found (best residual {outcome.best_residual:.3e})")
        return ExperimentRecord(
            index=index,
            seed=sub_seed,
            passed=False,
            p_success=outcome.best_p_success,
            max_residual=outcome.best_residual,
            iterations=outcome.iterations,
        )

    lp_infeasible, lp_margin = None, None
    if lp_check:
        try:
            lp = lp_membership(born_distribution(psi, outcome.settings), bilocal_ns_vertices())
            lp_infeasible, lp_margin = not lp.feasible, lp.margin
        except NonlocalityException as e:
            logger.error(f"State {index}: LP cross-check failed: {e}")
            lp_infeasible = False
        if not lp_infeasible:
            logger.error(f"State {index}: Hardy pass but the bilocal LP did not reject it")

    return ExperimentRecord(
        index=index,
        seed=sub_seed,
        passed=True,
        p_success=outcome.p_success,
        max_residual=outcome.report.max_residual,
        iterations=outcome.iterations,
        lp_checked=lp_check,
        lp_infeasible=lp_infeasible,
        lp_margin=lp_margin,
    )


def random_experiment(
    n: int,
    count: int,
    seed: int,
    cfg: Optional[SearchConfig] = None,
    lp_subsample: Optional[int] = None,
    jobs: Optional[int] = None,
    progress: Optional[bool] = None,
) -> ExperimentSummary:
    """
    Haar-random genuinely entangled states, each searched for Hardy settings. For
    three parties the first `lp_subsample` states are also checked against the
    bilocal non-signaling polytope.
    """
    if n not in (3, 4):
        raise InvalidState(f"Random experiments run for n=3 or n=4, got n={n}")
    if count < 1:
        raise InvalidState("count must be at least 1")
    cfg = cfg or SearchConfig()
    lp_subsample = settings.LP_SUBSAMPLE if lp_subsample is None else lp_subsample
    jobs = settings.JOBS if jobs is None else jobs
    progress = settings.PROGRESS if progress is None else progress

    arguments = [
        (n, index, seed, cfg, n == 3 and index < lp_subsample) for index in range(count)
    ]
    logger.info(f"Random experiment: n={n}, count={count}, seed={seed}, jobs={jobs}")

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_run_one, *zip(*arguments))
            records = list(tqdm(results, total=count, disable=not progress, desc=f"n={n}"))
    else:
        records = [
            _run_one(*args) for args in tqdm(arguments, disable=not progress, desc=f"n={n}")
        ]

    summary = ExperimentSummary(n=n, count=count, seed=seed, records=tuple(records))
    logger.info(
        f"Random experiment done: {summary.passed}/{count} passed, "
        f"{summary.lp_infeasible}/{summary.lp_checked} LP-infeasible"
    )
    return summary


@dataclass(frozen=True, eq=False)
class HardyOptimum:
    p_success: float
    settings: MeasurementSettings
    state: PureState


def hardy_two_qubit_optimum(cfg: Optional[SearchConfig] = None) -> HardyOptimum:
    """Largest success probability of the two-qubit Hardy test over all settings."""
    cfg = cfg or SearchConfig()
    rng = np.random.default_rng(cfg.seed)
    scale = np.tile([np.pi, 2 * np.pi, np.pi, 2 * np.pi], 2)

    def success(x) -> float:
        try:
            return construct_hardy_state(settings_from_angles(2, x)).report.p_success
        except NonlocalityException:
            return 0.0

    best_value, best_angles = -1.0, None
    for _ in range(cfg.multistarts):
        result = minimize(
            lambda x: -success(x),
            rng.uniform(0.0, 1.0, size=2 * ANGLES_PER_PARTY) * scale,
            method="Nelder-Mead",
            options={"maxiter": cfg.max_iters, "xatol": 1e-10, "fatol": 1e-14},
        )
        if -result.fun > best_value:
            best_value, best_angles = -result.fun, result.x

    if best_angles is None or best_value <= 0:
        raise NumericalFailure("No start produced a Hardy state")
    found = settings_from_angles(2, best_angles)
    sub = construct_hardy_state(found)
    logger.info(f"Two-qubit Hardy optimum: {sub.report.p_success:.7f}")
    return HardyOptimum(p_success=sub.report.p_success, settings=found, state=sub.phi)
