import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import settings
from .exceptions import DegenerateSettings, DimensionMismatch, InvalidState, SignalingDistribution
from .qstate import DensityMatrix, PureState

logger = logging.getLogger(__name__)

NEGATIVE_FLOOR = -1e-12
ROW_SUM_TOL = 1e-10
PARALLEL_TOL = 1e-12

SETTING_A = 0
SETTING_B = 1


def party_bit(value: int, party: int, n: int) -> int:
    """Bit of `party` (1-based, party 1 most significant) in an n-bit index."""
    return (value >> (n - party)) & 1


def party_mask(parties: Sequence[int], n: int) -> int:
    mask = 0
    for party in parties:
        mask |= 1 << (n - party)
    return mask


@dataclass(frozen=True)
class Ray:
    """Unnormalized single-qubit vector c0|0> + c1|1>."""

    c0: complex
    c1: complex

    def __post_init__(self):
        if abs(self.c0) ** 2 + abs(self.c1) ** 2 <= 0:
            raise InvalidState("Ray must be a nonzero vector")

    @classmethod
    def from_param(cls, x: complex) -> "Ray":
        """The ray |0> + x*|1>."""
        return cls(1.0 + 0j, complex(np.conj(x)))

    @classmethod
    def infinity(cls) -> "Ray":
        """The limit x -> infinity, i.e. |1>."""
        return cls(0j, 1.0 + 0j)

    @classmethod
    def from_vector(cls, vector: Sequence[complex]) -> "Ray":
        return cls(complex(vector[0]), complex(vector[1]))

    @property
    def norm_sq(self) -> float:
        return abs(self.c0) ** 2 + abs(self.c1) ** 2

    def vector(self) -> np.ndarray:
        return np.array([self.c0, self.c1], dtype=complex)

    def normalized(self) -> np.ndarray:
        return self.vector() / np.sqrt(self.norm_sq)

    def orthogonal(self) -> "Ray":
        return Ray(-np.conj(self.c1), np.conj(self.c0))

    def projector_ray(self, outcome: int) -> np.ndarray:
        """Normalized ray of outcome 0 (this ray) or outcome 1 (its complement)."""
        return self.normalized() if outcome == 0 else self.orthogonal().normalized()

    def rotated(self, u: np.ndarray) -> "Ray":
        return Ray.from_vector(np.asarray(u) @ self.vector())


@dataclass(frozen=True)
class MeasurementSettings:
    """Two alternative projective measurements (a_k, b_k) for each party k."""

    n: int
    pairs: Tuple[Tuple[Ray, Ray], ...]

    def __post_init__(self):
        if len(self.pairs) != self.n:
            raise DimensionMismatch(
                f"dimension mismatch: {len(self.pairs)} setting pairs for n={self.n}"
            )
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))

    @classmethod
    def uniform(cls, n: int, a: Ray, b: Ray) -> "MeasurementSettings":
        return cls(n, tuple((a, b) for _ in range(n)))

    @classmethod
    def from_params(
        cls, a_params: Sequence[complex], b_params: Sequence[complex]
    ) -> "MeasurementSettings":
        """Settings |a_k> = |0> + x_k*|1>, |b_k> = |0> + y_k*|1>."""
        return cls(
            len(a_params),
            tuple(
                (Ray.from_param(x), Ray.from_param(y))
                for x, y in zip(a_params, b_params)
            ),
        )

    def ray(self, party: int, setting: int) -> Ray:
        return self.pairs[party - 1][setting]

    def projector_ray(self, party: int, setting: int, outcome: int) -> np.ndarray:
        return self.ray(party, setting).projector_ray(outcome)

    def product_vector(self, setting_bits: int, outcome_bits: int) -> np.ndarray:
        vector = np.ones(1, dtype=complex)
        for party in range(1, self.n + 1):
            vector = np.kron(
                vector,
                self.projector_ray(
                    party,
                    party_bit(setting_bits, party, self.n),
                    party_bit(outcome_bits, party, self.n),
                ),
            )
        return vector

    def bra_matrix(self, party: int, setting: int) -> np.ndarray:
        """Rows <outcome 0|, <outcome 1| of one party's measurement."""
        return np.array(
            [self.projector_ray(party, setting, r).conj() for r in (0, 1)]
        )

    def max_parallel_overlap(self) -> float:
        return max(
            abs(np.vdot(a.normalized(), b.normalized())) for a, b in self.pairs
        )

    def check_non_parallel(self):
        if self.max_parallel_overlap() >= 1 - PARALLEL_TOL:
            raise DegenerateSettings("Settings a_k and b_k are parallel for some party")

    def rotated(self, u: np.ndarray) -> "MeasurementSettings":
        """Apply u to every ray; pairs with a state transformed by u^{(x)n}."""
        return MeasurementSettings(
            self.n, tuple((a.rotated(u), b.rotated(u)) for a, b in self.pairs)
        )


def rotate_settings(settings: MeasurementSettings, u: np.ndarray) -> MeasurementSettings:
    """Born tables satisfy P(u^{(x)n} psi, rotate_settings(S, u)) = P(psi, S)."""
    return settings.rotated(u)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """
    Table P[s][r]: s the setting bits (0 = a, 1 = b), r the outcome bits,
    party 1 most significant in both.
    """

    n: int
    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=float)
        dim = 2**self.n
        if table.shape != (dim, dim):
            raise DimensionMismatch(
                f"dimension mismatch: table shape {table.shape} for n={self.n}"
            )
        if table.min() < NEGATIVE_FLOOR:
            raise InvalidState(f"Negative probability {table.min()}")
        sums = table.sum(axis=1)
        if np.max(np.abs(sums - 1.0)) > ROW_SUM_TOL:
            raise InvalidState("Probabilities do not sum to 1 for every setting")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def uniform(cls, n: int) -> "JointDistribution":
        return cls(n, np.full((2**n, 2**n), 2.0**-n))

    @classmethod
    def mixture(
        cls, weights: Sequence[float], components: Sequence["JointDistribution"]
    ) -> "JointDistribution":
        table = sum(w * c.table for w, c in zip(weights, components))
        return cls(components[0].n, table)

    def p(self, setting_bits: int, outcome_bits: int) -> float:
        return float(self.table[setting_bits, outcome_bits])

    def clamped(self) -> np.ndarray:
        """Table with floating-point negatives set to zero, for emission."""
        return np.clip(self.table, 0.0, None)


def born_distribution(
    state: Union[PureState, DensityMatrix], settings: MeasurementSettings
) -> JointDistribution:
    """Born-rule table P[s][r] = <v|rho|v>, v the product of outcome rays."""
    if state.n != settings.n:
        raise DimensionMismatch(
            f"dimension mismatch: state has n={state.n}, settings n={settings.n}"
        )
    n = state.n
    bras = [[settings.bra_matrix(k, s) for s in (SETTING_A, SETTING_B)] for k in range(1, n + 1)]
    table = np.empty((2**n, 2**n))
    for s in range(2**n):
        kron = np.ones((1, 1), dtype=complex)
        for k in range(1, n + 1):
            kron = np.kron(kron, bras[k - 1][party_bit(s, k, n)])
        if isinstance(state, PureState):
            amplitudes = kron @ state.amplitudes
            table[s] = np.abs(amplitudes) ** 2
        else:
            table[s] = np.einsum("ij,jk,ik->i", kron, state.entries, kron.conj()).real
    return JointDistribution(n, table)


def _as_tensor(d: JointDistribution) -> np.ndarray:
    """Axes (s_1..s_n, r_1..r_n)."""
    return d.table.reshape((2,) * (2 * d.n))


def ns_residual(d: JointDistribution) -> float:
    """Largest change of any party-marginalized table under that party's setting switch."""
    tensor = _as_tensor(d)
    residual = 0.0
    for k in range(d.n):
        summed = tensor.sum(axis=d.n + k)
        diff = np.take(summed, 0, axis=k) - np.take(summed, 1, axis=k)
        residual = max(residual, float(np.max(np.abs(diff))))
    return residual


def marginal(
    d: JointDistribution,
    subset: Sequence[int],
    setting_bits: int,
    outcome_bits: int,
    tol: Optional[float] = None,
) -> float:
    """
    Probability of outcome_bits on `subset` (bits of other parties ignored) under the
    subset's settings taken from setting_bits.
    """
    tol = settings.NS_TOL if tol is None else tol
    subset = sorted(set(subset))
    if not subset:
        raise InvalidState("Marginal needs a nonempty party subset")
    n = d.n
    mask = party_mask(subset, n)
    dim = 2**n
    matching = [r for r in range(dim) if (r & mask) == (outcome_bits & mask)]
    contexts = [s for s in range(dim) if (s & mask) == (setting_bits & mask)]
    values = d.table[np.ix_(contexts, matching)].sum(axis=1)
    spread = float(values.max() - values.min())
    if spread > tol:
        raise SignalingDistribution(
            f"Marginal on parties {subset} varies by {spread:.3e} with outside settings"
        )
    return float(d.table[setting_bits, matching].sum())
