"""
Closed-form Hardy settings for permutation-symmetric states.

Parties 2..n share |a> = |0> + x*|1>, |b> = |0> + y*|1>; party 1 uses
|a_1> = |0> + x1*|1>, |b_1> = |0> + y1*|1>. Projecting parties 3..n onto <a|
leaves the two-qubit vector c0|00> + c1(|01> + |10>) + c2|11> on which the
Hardy conditions reduce to four equations solved by y1, y and x1.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import comb

from .exceptions import (
    DegenerateX,
    IdenticallyZeroF,
    IdenticallyZeroPolynomial,
    InvalidState,
    NotEntangled,
    SingularDenominator,
)
from .hardy import HardyReport, hardy_conditions
from .measure import MeasurementSettings, Ray, born_distribution
from .qstate import SymmetricState, dicke_expand, genuine_entanglement_check, to_magic_basis

logger = logging.getLogger(__name__)

COEFF_TRIM = 1e-12
ROOT_IMAG_TOL = 1e-7
F_ROOT_TOL = 1e-8
EXCLUSION_TOL = 1e-6
DENOMINATOR_TOL = 1e-12
SCAN_MARGIN = 0.05
SOLUTION_RESIDUAL = 1e-10
AUTO_RESIDUAL = 1e-8
MIN_SUCCESS = 1e-10


@dataclass(frozen=True)
class CCoeffs:
    c0: complex
    c1: complex
    c2: complex

    def matrix(self) -> np.ndarray:
        return np.array([[self.c0, self.c1], [self.c1, self.c2]])


@dataclass(frozen=True, eq=False)
class SymmetricSolution:
    x: complex
    y1: complex
    y: complex
    x1: complex
    settings: MeasurementSettings
    p_success: float
    residual: float
    excluded_x: Tuple[float, ...] = ()
    rotation: Optional[np.ndarray] = field(default=None, compare=False)
    report: Optional[HardyReport] = field(default=None, compare=False)


def _coefficient_polys(s: SymmetricState) -> List[np.ndarray]:
    """Coefficient arrays (ascending powers of x) of c0, c1, c2."""
    m = s.n - 2
    weights = comb(m, np.arange(m + 1), exact=False)
    return [s.h[i : i + m + 1] * weights for i in range(3)]


def c_coeffs(s: SymmetricState, x: complex) -> CCoeffs:
    """c_i = sum_k h_{k+i} C(n-2, k) x^k, evaluated by Horner's rule."""
    c0, c1, c2 = (complex(P.polyval(x, poly)) for poly in _coefficient_polys(s))
    return CCoeffs(c0, c1, c2)


def _trim(poly: np.ndarray) -> np.ndarray:
    return P.polytrim(np.asarray(poly), tol=COEFF_TRIM)


def _is_zero(poly: np.ndarray) -> bool:
    return poly.size == 1 and abs(poly[0]) <= COEFF_TRIM


def degenerate_x_roots(s: SymmetricState) -> np.ndarray:
    """Roots of c1(x)^2 - c0(x) c2(x), where the projected two-qubit vector is product or zero."""
    c0, c1, c2 = _coefficient_polys(s)
    poly = _trim(P.polysub(P.polymul(c1, c1), P.polymul(c0, c2)))
    if _is_zero(poly):
        raise IdenticallyZeroPolynomial(
            "c1^2 - c0 c2 vanishes identically: the state is a product state"
        )
    if poly.size == 1:
        return np.array([], dtype=complex)
    return P.polyroots(poly)


def _conj_poly(poly: np.ndarray, phase: complex) -> np.ndarray:
    """Coefficients in t of conj(c(t e^{iw})) given those of c in x."""
    powers = phase ** np.arange(poly.size)
    return np.conj(poly * powers)


def f_polynomial(s: SymmetricState, w: float) -> np.ndarray:
    """F(x, x*) at x = t e^{iw} as a complex polynomial in real t >= 0."""
    phase = np.exp(1j * w)
    c = [poly * phase ** np.arange(poly.size) for poly in _coefficient_polys(s)]
    cc = [_conj_poly(poly, phase) for poly in _coefficient_polys(s)]
    t = np.array([0.0, 1.0])
    terms = [
        P.polymul(c[1], cc[2]),
        P.polymul(c[0], cc[1]),
        P.polymul(P.polysub(P.polymul(c[2], cc[2]), P.polymul(c[0], cc[0])), phase * t),
        -P.polymul(
            P.polyadd(P.polymul(cc[1], c[2]), P.polymul(cc[0], c[1])),
            phase**2 * P.polymul(t, t),
        ),
    ]
    total = np.zeros(1, dtype=complex)
    for term in terms:
        total = P.polyadd(total, term)
    return total


def _real_nonnegative_roots(poly: np.ndarray) -> np.ndarray:
    poly = _trim(poly)
    if poly.size <= 1:
        return np.array([])
    roots = P.polyroots(poly)
    keep = np.abs(roots.imag) <= ROOT_IMAG_TOL * np.maximum(1.0, np.abs(roots))
    real = roots[keep].real
    return np.clip(real[real >= -ROOT_IMAG_TOL], 0.0, None)


def f_poly_roots(s: SymmetricState, w: float) -> np.ndarray:
    """Moduli t >= 0 at which F(t e^{iw}, t e^{-iw}) = 0."""
    poly = f_polynomial(s, w)
    real_part, imag_part = _trim(poly.real), _trim(poly.imag)
    if _is_zero(real_part) and _is_zero(imag_part):
        raise IdenticallyZeroF(f"F vanishes identically at phase w={w:.6f}")

    candidates = np.concatenate(
        [_real_nonnegative_roots(part) for part in (real_part, imag_part) if not _is_zero(part)]
    )
    scale = max(1.0, float(np.max(np.abs(poly))))
    roots = []
    for t in np.sort(candidates):
        if abs(P.polyval(t, poly)) <= F_ROOT_TOL * scale * max(1.0, t) ** (poly.size - 1):
            if not roots or abs(t - roots[-1]) > 1e-9:
                roots.append(float(t))
    return np.array(roots)


def phase_diagnostics(s: SymmetricState, w: float) -> dict:
    """Both readings of the phase admissibility condition at w."""
    h0, h2 = s.h[0], s.h[2]
    first = np.conj(h0) * h2 * np.exp(-1j * w)
    second = h0 * np.conj(h2) * np.exp(-2j * w)
    return {
        "single_phase_value": complex(first),
        "single_phase_admissible": abs(first.imag) > COEFF_TRIM,
        "double_phase_value": complex(second),
        "double_phase_admissible": abs(second.imag) > COEFF_TRIM,
    }


def phase_pick(s: SymmetricState) -> float:
    """A phase w with h0 h2* e^{-2iw} non-real (pi/2 when h2 = 0) and F not identically zero."""
    if abs(s.h[2]) <= COEFF_TRIM:
        w = np.pi / 2
    else:
        w = (np.angle(s.h[0] * np.conj(s.h[2])) + np.pi / 2) / 2
    for shift in range(16):
        candidate = float(np.mod(w + shift * np.pi / 8, 2 * np.pi))
        poly = f_polynomial(s, candidate)
        if not (_is_zero(_trim(poly.real)) and _is_zero(_trim(poly.imag))):
            return candidate
    raise IdenticallyZeroF("No admissible phase found; the state is not entangled")


def _setting_parameters(c: CCoeffs, x: complex) -> Tuple[complex, complex, complex]:
    d1 = c.c1 + x * c.c2
    if abs(d1) <= DENOMINATOR_TOL:
        raise SingularDenominator(f"c1 + x c2 vanishes at x={x}")
    y1 = -(c.c0 + x * c.c1) / d1
    d2 = np.conj(c.c1) - y1 * np.conj(c.c0)
    if abs(d2) <= DENOMINATOR_TOL:
        raise SingularDenominator(f"c1* - y1 c0* vanishes at x={x}")
    y = (np.conj(c.c2) - y1 * np.conj(c.c1)) / d2
    d3 = c.c1 + y * c.c2
    if abs(d3) <= DENOMINATOR_TOL:
        raise SingularDenominator(f"c1 + y c2 vanishes at x={x}")
    x1 = -(c.c0 + y * c.c1) / d3
    return complex(y1), complex(y), complex(x1)


def excluded_moduli(s: SymmetricState, w: float) -> np.ndarray:
    """Moduli of degenerate roots and of F roots at phase w."""
    try:
        degenerate = np.abs(degenerate_x_roots(s))
    except IdenticallyZeroPolynomial:
        raise NotEntangled("Symmetric state is a product state")
    try:
        f_roots = f_poly_roots(s, w)
    except IdenticallyZeroF:
        f_roots = np.array([])
    return np.unique(np.round(np.concatenate([degenerate, f_roots]), 12))


def _check_x(s: SymmetricState, x: complex):
    if not np.isfinite(x):
        raise DegenerateX("x must be finite")
    try:
        degenerate = degenerate_x_roots(s)
    except IdenticallyZeroPolynomial:
        raise DegenerateX("Every x is degenerate for a product state")
    if degenerate.size and np.min(np.abs(degenerate - x)) < EXCLUSION_TOL:
        raise DegenerateX(f"excluded x: {x} makes the projected state product or zero")
    try:
        f_roots = f_poly_roots(s, float(np.angle(x)))
    except IdenticallyZeroF:
        raise DegenerateX(f"excluded x: F vanishes identically at arg x={np.angle(x):.6f}")
    if f_roots.size and np.min(np.abs(f_roots - abs(x))) < EXCLUSION_TOL:
        raise DegenerateX(f"excluded x: |x|={abs(x):.6g} is a root of F")


def solve_settings(s: SymmetricState, x: complex) -> SymmetricSolution:
    """Assemble the closed-form settings for a given shared parameter x."""
    x = complex(x)
    _check_x(s, x)
    c = c_coeffs(s, x)
    y1, y, x1 = _setting_parameters(c, x)

    n = s.n
    settings = MeasurementSettings(
        n,
        ((Ray.from_param(x1), Ray.from_param(y1)),)
        + tuple((Ray.from_param(x), Ray.from_param(y)) for _ in range(n - 1)),
    )
    amplitude = c.c0 + x * c.c1 + x1 * (c.c1 + x * c.c2)
    p_success = abs(amplitude) ** 2 / ((1 + abs(x1) ** 2) * (1 + abs(x) ** 2) ** (n - 1))
    if p_success <= MIN_SUCCESS:
        raise DegenerateX(f"excluded x: success probability vanishes at x={x}")

    report = hardy_conditions(
        born_distribution(dicke_expand(s), settings),
        pivot=1,
        eps_zero=SOLUTION_RESIDUAL,
        delta_pos=MIN_SUCCESS,
    )
    return SymmetricSolution(
        x=x,
        y1=y1,
        y=y,
        x1=x1,
        settings=settings,
        p_success=float(p_success),
        residual=report.max_residual,
        report=report,
    )


def ghz_closed_form(n: int, theta: float, x: complex) -> float:
    """|<a_I|G_n(theta)>|^2 / prod ||a_k||^2 for the GHZ settings at x."""
    if n < 3 or not 0 < theta < np.pi / 2 or x == 0:
        raise InvalidState("GHZ closed form needs n >= 3, 0 < theta < pi/2, x != 0")
    modulus = abs(x)
    x1 = -1 / (np.tan(theta) ** 3 * modulus ** (2 * n - 4) * x ** (n - 1))
    numerator = np.cos(theta) ** 2 * (1 - 1 / (np.tan(theta) ** 2 * modulus ** (2 * n - 4))) ** 2
    return float(numerator / ((1 + abs(x1) ** 2) * (1 + modulus**2) ** (n - 1)))


def ghz_parameters(n: int, theta: float, x: complex) -> Tuple[complex, complex, complex]:
    """(y1, y, x1) of the GHZ closed form."""
    cot = 1 / np.tan(theta)
    y1 = -cot / x ** (n - 1)
    y = x ** (n - 1) * np.conj(x) ** (n - 2) * np.tan(theta) ** 2
    x1 = -1 / (np.tan(theta) ** 3 * abs(x) ** (2 * n - 4) * x ** (n - 1))
    return complex(y1), complex(y), complex(x1)


def w_parameters(n: int, x: complex) -> Tuple[complex, complex, complex]:
    """(y1, y, x1) of the W-state closed form."""
    y1 = -x * (n - 1)
    y = x * (n - 1) / (1 + (n - 1) * (n - 2) * abs(x) ** 2)
    x1 = -x * (n - 2) - y
    return complex(y1), complex(y), complex(x1)


def w_closed_form(n: int, x: complex) -> float:
    if n < 3:
        raise InvalidState("W closed form needs n >= 3")
    _, y, x1 = w_parameters(n, x)
    return float(
        abs(x - y) ** 2 / (n * (1 + abs(x1) ** 2) * (1 + abs(x) ** 2) ** (n - 1))
    )


def _modulus_scan(limit: float = 5.0) -> Iterator[float]:
    """1, 1.1, 0.9, 1.2, 0.8, ... then upward once the downward side is exhausted."""
    step = 1
    yield 1.0
    while 1.0 + 0.1 * step <= limit:
        yield round(1.0 + 0.1 * step, 10)
        if step < 10:
            yield round(1.0 - 0.1 * step, 10)
        step += 1


def solve_auto(s: SymmetricState) -> SymmetricSolution:
    """
    Settings passing the Hardy test for any entangled symmetric state: magic-basis
    rotation, admissible phase, first modulus in the scan that keeps a margin from
    every excluded value, then rotation of the settings back to the original basis.
    """
    psi = dicke_expand(s)
    if not genuine_entanglement_check(psi, eps=1e-8):
        raise NotEntangled("Symmetric state is not entangled")

    magic, rotation = to_magic_basis(s)
    w = phase_pick(magic)
    excluded = excluded_moduli(magic, w)

    for modulus in _modulus_scan():
        if excluded.size and np.min(np.abs(excluded - modulus)) < SCAN_MARGIN:
            logger.debug(f"|x|={modulus} rejected, too close to an excluded value")
            continue
        x = modulus * np.exp(1j * w)
        try:
            solution = solve_settings(magic, x)
        except (DegenerateX, SingularDenominator) as e:
            logger.debug(f"|x|={modulus} rejected: {e}")
            continue

        original = solution.settings.rotated(rotation.conj().T)
        report = hardy_conditions(
            born_distribution(psi, original),
            pivot=1,
            eps_zero=AUTO_RESIDUAL,
            delta_pos=MIN_SUCCESS,
        )
        if not report.passed:
            logger.debug(f"|x|={modulus} failed verification on the original state")
            continue

        logger.info(
            f"Symmetric solver: n={s.n}, |x|={modulus}, w={w:.4f}, "
            f"p_success={report.p_success:.6g}"
        )
        return SymmetricSolution(
            x=solution.x,
            y1=solution.y1,
            y=solution.y,
            x1=solution.x1,
            settings=original,
            p_success=report.p_success,
            residual=report.max_residual,
            excluded_x=tuple(float(v) for v in excluded),
            rotation=rotation,
            report=report,
        )

    raise DegenerateX("No admissible |x| found in the scan range")


def scan_p_success(
    s: SymmetricState, moduli: np.ndarray, w: Optional[float] = None
) -> List[Tuple[float, float, float]]:
    """(|x|, arg x, p_success) over a modulus grid, skipping excluded values."""
    w = phase_pick(s) if w is None else w
    rows = []
    for modulus in moduli:
        try:
            solution = solve_settings(s, modulus * np.exp(1j * w))
        except (DegenerateX, SingularDenominator):
            continue
        rows.append((float(modulus), float(w), solution.p_success))
    return rows
