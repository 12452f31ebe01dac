import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize, root
from scipy.special import comb

from config.settings import settings
from .exceptions import InvalidState, OptimizerDidNotConverge

logger = logging.getLogger(__name__)

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10

# Closest product state search
GRID_POINTS = 64
REFINE_CELLS = 5
STATIONARITY_TOL = 1e-8

SeedLike = Union[int, np.random.Generator]


def _check_party_count(n: int):
    if not 2 <= n <= settings.MAX_PARTIES:
        raise InvalidState(
            f"Party count {n} outside supported range [2, {settings.MAX_PARTIES}]"
        )


def popcounts(n: int) -> np.ndarray:
    """Number of excited parties for every basis index of an n-qubit register."""
    return np.array([bin(b).count("1") for b in range(2**n)], dtype=int)


@dataclass(frozen=True, eq=False)
class PureState:
    """
    Dense n-qubit pure state.

    Basis index b = sum_k r_k 2^(n-k), i.e. party 1 is the most significant bit.
    """

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_party_count(self.n)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**self.n:
            raise InvalidState(
                f"Expected {2 ** self.n} amplitudes for n={self.n}, got {amps.size}"
            )
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise InvalidState(f"State is not normalized (norm^2={norm_sq})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(
        cls, amplitudes: Sequence[complex], n: Optional[int] = None
    ) -> "PureState":
        """Build a state from raw amplitudes, normalizing them."""
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if n is None:
            n = amps.size.bit_length() - 1
        if amps.size != 2**n:
            raise InvalidState(f"Amplitude count {amps.size} is not 2^{n}")
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InvalidState("Zero vector is not a state")
        return cls(n, amps / norm)

    @classmethod
    def product(cls, rays: Sequence[Sequence[complex]]) -> "PureState":
        vector = np.ones(1, dtype=complex)
        for ray in rays:
            vector = np.kron(vector, np.asarray(ray, dtype=complex))
        return cls.from_amplitudes(vector, len(rays))

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n)

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.n, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    n: int
    entries: np.ndarray

    def __post_init__(self):
        _check_party_count(self.n)
        rho = np.array(self.entries, dtype=complex)
        dim = 2**self.n
        if rho.shape != (dim, dim):
            raise InvalidState(f"Expected a {dim}x{dim} matrix, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise InvalidState("Density matrix is not Hermitian")
        trace = np.trace(rho).real
        if abs(trace - 1.0) > NORM_TOL:
            raise InvalidState(f"Density matrix trace is {trace}")
        if np.linalg.eigvalsh(rho).min() < EIGENVALUE_FLOOR:
            raise InvalidState("Density matrix has a negative eigenvalue")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)

    @classmethod
    def maximally_mixed(cls, n: int) -> "DensityMatrix":
        return cls(n, np.eye(2**n, dtype=complex) / 2**n)


@dataclass(frozen=True, eq=False)
class SymmetricState:
    """
    Permutation-symmetric n-qubit state in the unnormalized Dicke convention

        |psi> = sum_k h_k sum_{|alpha|=k} |0_{not alpha} 1_alpha>

    so that normalization reads sum_k C(n,k)|h_k|^2 = 1.
    """

    n: int
    h: np.ndarray

    def __post_init__(self):
        _check_party_count(self.n)
        h = np.array(self.h, dtype=complex).reshape(-1)
        if h.size != self.n + 1:
            raise InvalidState(f"Expected {self.n + 1} coefficients, got {h.size}")
        norm_sq = float(np.sum(binomials(self.n) * np.abs(h) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise InvalidState(f"Symmetric state is not normalized (norm^2={norm_sq})")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)

    @classmethod
    def from_coefficients(cls, h: Sequence[complex]) -> "SymmetricState":
        h = np.array(h, dtype=complex).reshape(-1)
        n = h.size - 1
        norm = np.sqrt(np.sum(binomials(n) * np.abs(h) ** 2))
        if norm == 0:
            raise InvalidState("Zero vector is not a state")
        return cls(n, h / norm)

    @classmethod
    def ghz(cls, n: int, theta: float) -> "SymmetricState":
        h = np.zeros(n + 1, dtype=complex)
        h[0] = np.cos(theta)
        h[n] = np.sin(theta)
        return cls.from_coefficients(h)

    @classmethod
    def w(cls, n: int) -> "SymmetricState":
        h = np.zeros(n + 1, dtype=complex)
        h[1] = 1 / np.sqrt(n)
        return cls(n, h)

    @classmethod
    def product(cls, n: int) -> "SymmetricState":
        h = np.zeros(n + 1, dtype=complex)
        h[0] = 1.0
        return cls(n, h)

    def is_magic(self, tol: float = 1e-10) -> bool:
        return abs(self.h[0]) > tol and abs(self.h[1]) <= tol


@dataclass(frozen=True)
class Bipartition:
    """Unordered cut alpha | I minus alpha, stored by its canonical side."""

    n: int
    alpha: Tuple[int, ...]

    @classmethod
    def of(cls, parties: Sequence[int], n: int) -> "Bipartition":
        side = tuple(sorted(set(parties)))
        if not side or len(side) >= n or side[0] < 1 or side[-1] > n:
            raise InvalidState(f"{side} is not a nonempty proper subset of 1..{n}")
        other = tuple(k for k in range(1, n + 1) if k not in side)
        if len(side) != len(other):
            canonical = side if len(side) < len(other) else other
        else:
            canonical = min(side, other)
        return cls(n, canonical)

    @property
    def complement(self) -> Tuple[int, ...]:
        return tuple(k for k in range(1, self.n + 1) if k not in self.alpha)

    def __str__(self):
        left = "".join(map(str, self.alpha))
        right = "".join(map(str, self.complement))
        return f"{left}|{right}"


def all_bipartitions(n: int) -> list[Bipartition]:
    cuts = {
        Bipartition.of(side, n)
        for size in range(1, n // 2 + 1)
        for side in combinations(range(1, n + 1), size)
    }
    return sorted(cuts, key=lambda b: (len(b.alpha), b.alpha))


def binomials(n: int) -> np.ndarray:
    return comb(n, np.arange(n + 1), exact=False)


def dicke_expand(s: SymmetricState) -> PureState:
    """Expand Dicke coefficients into the dense amplitude table."""
    return PureState(s.n, s.h[popcounts(s.n)])


def symmetric_part(psi: PureState) -> SymmetricState:
    """Read h_k back from a dense symmetric state (index with the lowest k bits set)."""
    indices = [(1 << k) - 1 for k in range(psi.n + 1)]
    return SymmetricState.from_coefficients(psi.amplitudes[indices])


def apply_local_unitary(psi: PureState, u: np.ndarray) -> PureState:
    """Apply u to every qubit, i.e. u^{(x)n} |psi>."""
    u = np.asarray(u, dtype=complex)
    tensor = psi.tensor
    for axis in range(psi.n):
        tensor = np.moveaxis(np.tensordot(u, tensor, axes=([1], [axis])), 0, axis)
    return PureState.from_amplitudes(tensor.reshape(-1), psi.n)


def bloch_ray(t: float, phi: float) -> np.ndarray:
    return np.array([np.cos(t / 2), np.exp(1j * phi) * np.sin(t / 2)])


def magic_rotation(ray: np.ndarray) -> np.ndarray:
    """Unitary sending ray to |0> and its orthogonal complement to |1>."""
    ray = np.asarray(ray, dtype=complex)
    ray = ray / np.linalg.norm(ray)
    u = np.array([[ray[0], -ray[1].conj()], [ray[1], ray[0].conj()]])
    return u.conj().T


def _product_overlap(s: SymmetricState, t, phi):
    """<beta^{(x)n}|psi> for beta = cos(t/2)|0> + e^{i phi} sin(t/2)|1>."""
    cos_half = np.cos(np.asarray(t) / 2)
    sin_half = np.exp(-1j * np.asarray(phi)) * np.sin(np.asarray(t) / 2)
    weights = binomials(s.n) * s.h
    return sum(
        weights[k] * cos_half ** (s.n - k) * sin_half**k for k in range(s.n + 1)
    )


def _rotated_h1(s: SymmetricState, t: float, phi: float) -> complex:
    rotated = apply_local_unitary(dicke_expand(s), magic_rotation(bloch_ray(t, phi)))
    return rotated.amplitudes[1]


def _polish_stationary(s: SymmetricState, t: float, phi: float) -> Tuple[float, float]:
    if abs(_rotated_h1(s, t, phi)) <= 1e-10:
        return t, phi

    def residual(p):
        h1 = _rotated_h1(s, p[0], p[1])
        return [h1.real, h1.imag]

    result = root(residual, [t, phi], method="lm", options={"xtol": 1e-15})
    old = abs(_product_overlap(s, t, phi))
    new = abs(_product_overlap(s, *result.x))
    if new < old - 1e-9:
        logger.warning(
            f"Stationarity polish lowered the overlap ({old:.12f} -> {new:.12f}), keeping grid point"
        )
        return t, phi
    return float(result.x[0]), float(result.x[1])


def closest_product_state(s: SymmetricState) -> Tuple[np.ndarray, float]:
    """
    Single-qubit ray beta maximizing |<beta^{(x)n}|psi>|.

    Grid search over Bloch angles, Nelder-Mead refinement of the best cells and a
    final root polish of the stationarity condition h'_1 = 0.
    """
    t_grid = np.linspace(0.0, np.pi, GRID_POINTS)
    phi_grid = np.linspace(0.0, 2 * np.pi, GRID_POINTS, endpoint=False)
    t_mesh, phi_mesh = np.meshgrid(t_grid, phi_grid, indexing="ij")
    values = np.abs(_product_overlap(s, t_mesh, phi_mesh))
    cells = np.argsort(-values.ravel(), kind="stable")[:REFINE_CELLS]

    best_value, best_point = -1.0, None
    for cell in cells:
        i, j = np.unravel_index(cell, values.shape)
        result = minimize(
            lambda p: -abs(_product_overlap(s, p[0], p[1])),
            x0=[t_mesh[i, j], phi_mesh[i, j]],
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000},
        )
        if -result.fun > best_value + 1e-13:
            best_value, best_point = -result.fun, result.x

    t, phi = _polish_stationary(s, *best_point)
    h1 = _rotated_h1(s, t, phi)
    if abs(h1) > STATIONARITY_TOL:
        raise OptimizerDidNotConverge(
            f"Closest product state search stopped at |h'_1|={abs(h1):.3e}"
        )
    overlap = float(abs(_product_overlap(s, t, phi)))
    return bloch_ray(t, phi), min(overlap, 1.0)


def to_magic_basis(s: SymmetricState) -> Tuple[SymmetricState, np.ndarray]:
    """
    Rotate s so that its closest product state becomes |0_I>.

    Returns the rotated state and the single-qubit unitary R with s' = R^{(x)n} s.
    """
    ray, overlap = closest_product_state(s)
    rotation = magic_rotation(ray)
    rotated = symmetric_part(apply_local_unitary(dicke_expand(s), rotation))
    if abs(rotated.h[0]) == 0 or abs(rotated.h[1]) > STATIONARITY_TOL:
        raise OptimizerDidNotConverge(
            f"Magic basis conditions failed: h0={rotated.h[0]}, h1={rotated.h[1]}"
        )
    logger.debug(f"Magic basis found with overlap {overlap:.10f}")
    return rotated, rotation


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_random_pure(n: int, seed: SeedLike) -> PureState:
    """Haar-random pure state: complex Gaussian amplitudes, normalized."""
    _check_party_count(n)
    rng = _rng(seed)
    amps = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return PureState.from_amplitudes(amps, n)


def haar_random_symmetric(n: int, seed: SeedLike) -> SymmetricState:
    """Uniformly random state of the symmetric subspace."""
    _check_party_count(n)
    rng = _rng(seed)
    dicke = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    dicke /= np.linalg.norm(dicke)
    return SymmetricState.from_coefficients(dicke / np.sqrt(binomials(n)))


def schmidt_coefficients(psi: PureState, cut: Bipartition) -> np.ndarray:
    if cut.n != psi.n:
        raise InvalidState(f"Cut over {cut.n} parties applied to an {psi.n}-party state")
    axes = [k - 1 for k in cut.alpha] + [k - 1 for k in cut.complement]
    matrix = np.transpose(psi.tensor, axes).reshape(2 ** len(cut.alpha), -1)
    return np.linalg.svd(matrix, compute_uv=False)


def weakest_cut(psi: PureState) -> Tuple[Bipartition, float]:
    """Cut with the smallest second Schmidt coefficient."""
    return min(
        ((cut, float(schmidt_coefficients(psi, cut)[1])) for cut in all_bipartitions(psi.n)),
        key=lambda item: item[1],
    )


def genuine_entanglement_check(psi: PureState, eps: float = 1e-8) -> bool:
    """True iff psi is entangled across every bipartition."""
    _, second = weakest_cut(psi)
    return second > eps
