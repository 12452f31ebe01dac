import numpy as np
import pytest

from nonlocality.measure import MeasurementSettings, Ray, born_distribution
from nonlocality.qstate import PureState, SymmetricState, dicke_expand
from nonlocality.symmetric import solve_settings

GHZ_X = 2j
GHZ_P_SUCCESS = 72 / 6425
W_P_SUCCESS = 1 / 408

# (a, b) rays, identical for every party, of a standard Hardy test passed by GHZ(pi/4)
GHZ_STANDARD_RAYS = {
    3: (Ray(1 + 0j, 1j), Ray(1 + 0j, 1 + 0j)),
    4: (Ray(1 + 0j, np.exp(11j * np.pi / 12)), Ray(1 + 0j, np.exp(1j * np.pi / 4))),
}
GHZ_STANDARD_P_SUCCESS = {3: 1 / 8, 4: 3 / 32}


def real_ray(theta: float) -> Ray:
    """cos(theta/2)|0> + sin(theta/2)|1>"""
    return Ray(np.cos(theta / 2) + 0j, np.sin(theta / 2) + 0j)


@pytest.fixture
def ghz3():
    return SymmetricState.ghz(3, np.pi / 4)


@pytest.fixture
def w3():
    return SymmetricState.w(3)


@pytest.fixture
def ghz_solution(ghz3):
    return solve_settings(ghz3, GHZ_X)


@pytest.fixture
def ghz_hardy_distribution(ghz3, ghz_solution):
    return born_distribution(dicke_expand(ghz3), ghz_solution.settings)


@pytest.fixture
def z_settings3():
    """a = |0>, b = |+> for every party"""
    return MeasurementSettings.uniform(3, Ray(1 + 0j, 0j), real_ray(np.pi / 2))


@pytest.fixture
def ghz_standard_settings3():
    return MeasurementSettings.uniform(3, *GHZ_STANDARD_RAYS[3])


@pytest.fixture
def product3():
    return PureState.product([[1, 0]] * 3)


@pytest.fixture
def product_distribution(product3, z_settings3):
    return born_distribution(product3, z_settings3)


@pytest.fixture
def bell_chsh_distribution():
    """Bell pair on parties 1, 2 with CHSH-optimal settings, party 3 in |0>"""
    psi = PureState.from_amplitudes([1, 0, 0, 0, 0, 0, 1, 0], 3)
    settings = MeasurementSettings(
        3,
        (
            (real_ray(0.0), real_ray(np.pi / 2)),
            (real_ray(np.pi / 4), real_ray(-np.pi / 4)),
            (Ray(1 + 0j, 0j), real_ray(np.pi / 2)),
        ),
    )
    return born_distribution(psi, settings)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
