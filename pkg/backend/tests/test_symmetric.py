import numpy as np
import pytest

from nonlocality.exceptions import (
    DegenerateX,
    IdenticallyZeroPolynomial,
    InvalidState,
    NotEntangled,
    SingularDenominator,
)
from nonlocality.qstate import SymmetricState, dicke_expand, haar_random_symmetric
from nonlocality.search import SearchConfig, SettingsFound, find_settings
from nonlocality.symmetric import (
    EXCLUSION_TOL,
    c_coeffs,
    degenerate_x_roots,
    excluded_moduli,
    f_poly_roots,
    ghz_closed_form,
    ghz_parameters,
    phase_diagnostics,
    phase_pick,
    scan_p_success,
    solve_auto,
    solve_settings,
    w_closed_form,
    w_parameters,
)

from .conftest import GHZ_P_SUCCESS, GHZ_X, W_P_SUCCESS


def admissible(s: SymmetricState, x: complex) -> bool:
    """False when x sits on a degenerate root or on a root of F."""
    try:
        roots = degenerate_x_roots(s)
    except IdenticallyZeroPolynomial:
        return False
    if roots.size and np.min(np.abs(roots - x)) < 10 * EXCLUSION_TOL:
        return False
    f_roots = f_poly_roots(s, float(np.angle(x)))
    return not (f_roots.size and np.min(np.abs(f_roots - abs(x))) < 10 * EXCLUSION_TOL)


class TestCoefficients:
    def test_ghz(self, ghz3):
        c = c_coeffs(ghz3, GHZ_X)
        assert c.c0 == pytest.approx(1 / np.sqrt(2))
        assert c.c1 == pytest.approx(0)
        assert c.c2 == pytest.approx(GHZ_X / np.sqrt(2))

    def test_w(self, w3):
        c = c_coeffs(w3, 0.5)
        assert c.c0 == pytest.approx(0.5 / np.sqrt(3))
        assert c.c1 == pytest.approx(1 / np.sqrt(3))
        assert c.c2 == pytest.approx(0)

    def test_matrix_is_symmetric(self, rng):
        c = c_coeffs(haar_random_symmetric(4, rng), 0.3 - 0.2j)
        m = c.matrix()
        assert m[0, 1] == m[1, 0]


class TestRoots:
    def test_ghz_degenerate_at_zero(self, ghz3):
        np.testing.assert_allclose(degenerate_x_roots(ghz3), [0], atol=1e-12)

    def test_w_has_no_degenerate_x(self, w3):
        assert degenerate_x_roots(w3).size == 0

    def test_product_state(self):
        with pytest.raises(IdenticallyZeroPolynomial):
            degenerate_x_roots(SymmetricState.product(3))
        with pytest.raises(NotEntangled):
            excluded_moduli(SymmetricState.product(3), np.pi / 2)

    def test_ghz_f_root_at_unit_modulus(self, ghz3):
        roots = f_poly_roots(ghz3, np.pi / 2)
        assert np.min(np.abs(roots - 1.0)) < 1e-8

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_w_f_roots(self, n):
        s = SymmetricState.w(n)
        roots = f_poly_roots(s, phase_pick(s))
        assert np.min(np.abs(roots)) < 1e-8
        assert np.min(np.abs(roots - 1 / np.sqrt(n - 1))) < 1e-8


class TestSolveSettings:
    def test_ghz_fixture(self, ghz_solution):
        assert ghz_solution.y1 == pytest.approx(0.25)
        assert ghz_solution.y == pytest.approx(8j)
        assert ghz_solution.x1 == pytest.approx(1 / 16)
        assert ghz_solution.p_success == pytest.approx(GHZ_P_SUCCESS, rel=1e-12)
        assert ghz_solution.residual < 1e-10
        assert ghz_solution.report.passed

    def test_w_fixture(self, w3):
        solution = solve_settings(w3, 1.0)
        assert solution.y1 == pytest.approx(-2)
        assert solution.y == pytest.approx(2 / 3)
        assert solution.x1 == pytest.approx(-5 / 3)
        assert solution.p_success == pytest.approx(W_P_SUCCESS, rel=1e-12)
        assert solution.residual < 1e-10

    def test_ghz_unit_x_is_excluded(self):
        with pytest.raises(DegenerateX, match="excluded x"):
            solve_settings(SymmetricState.ghz(3, 0.7854), 1.0)

    def test_w_root_is_excluded(self, w3):
        with pytest.raises(DegenerateX, match="excluded x"):
            solve_settings(w3, 1 / np.sqrt(2))

    def test_infinite_x(self, ghz3):
        with pytest.raises(DegenerateX):
            solve_settings(ghz3, complex(np.inf, 0))

    def test_random_states(self):
        solved = 0
        for seed in range(12):
            s = haar_random_symmetric(3 + seed % 3, seed)
            x = 1.3 * np.exp(0.4j)
            if not admissible(s, x):
                continue
            try:
                solution = solve_settings(s, x)
            except (DegenerateX, SingularDenominator):
                continue
            assert solution.residual < 1e-10
            solved += 1
        assert solved >= 8


GHZ_GRID = [
    (n, theta, modulus * np.exp(1j * phase))
    for n in (3, 4, 5)
    for theta in (0.3, np.pi / 4, 1.2)
    for modulus in (0.5, 1.5, 2.0)
    for phase in (0.3, np.pi / 2, 2.0)
] + [(4, np.pi / 3, 1 + 1j)]


class TestClosedForms:
    def test_ghz_fixture(self):
        assert ghz_closed_form(3, np.pi / 4, GHZ_X) == pytest.approx(GHZ_P_SUCCESS, rel=1e-12)

    def test_w_fixture(self):
        assert w_closed_form(3, 1.0) == pytest.approx(W_P_SUCCESS, rel=1e-12)

    def test_invalid_ghz_arguments(self):
        with pytest.raises(InvalidState):
            ghz_closed_form(2, 0.5, 1.0)
        with pytest.raises(InvalidState):
            ghz_closed_form(3, 0.0, 1.0)
        with pytest.raises(InvalidState):
            ghz_closed_form(3, 0.5, 0)

    @pytest.mark.parametrize("n,theta,x", GHZ_GRID)
    def test_ghz_matches_general_solver(self, n, theta, x):
        s = SymmetricState.ghz(n, theta)
        if not admissible(s, x) or ghz_closed_form(n, theta, x) < 1e-9:
            pytest.skip("excluded parameter")
        solution = solve_settings(s, x)
        np.testing.assert_allclose(
            [solution.y1, solution.y, solution.x1], ghz_parameters(n, theta, x), rtol=1e-9
        )
        assert solution.p_success == pytest.approx(ghz_closed_form(n, theta, x), rel=1e-9)

    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("x", [0.3j, 1 + 1j, 2.0 * np.exp(0.7j), 0.8])
    def test_w_matches_general_solver(self, n, x):
        if abs(abs(x) - 1 / np.sqrt(n - 1)) < 1e-3:
            pytest.skip("root of F")
        solution = solve_settings(SymmetricState.w(n), x)
        np.testing.assert_allclose(
            [solution.y1, solution.y, solution.x1], w_parameters(n, x), rtol=1e-9, atol=1e-12
        )
        assert solution.p_success == pytest.approx(w_closed_form(n, x), rel=1e-9)



def tensor_success(amplitudes: np.ndarray, params) -> float:
    """|<a_I|psi>|^2 / prod ||a_k||^2 with |a_k> = |0> + x_k* |1>."""
    bra = np.ones(1, dtype=complex)
    for x in params:
        bra = np.kron(bra, [1, np.conj(x)])
    return abs(np.vdot(bra, amplitudes)) ** 2 / np.prod([1 + abs(x) ** 2 for x in params])


def ghz_amplitudes(n: int, theta: float) -> np.ndarray:
    amplitudes = np.zeros(2**n, dtype=complex)
    amplitudes[0], amplitudes[-1] = np.cos(theta), np.sin(theta)
    return amplitudes


def w_amplitudes(n: int) -> np.ndarray:
    amplitudes = np.zeros(2**n, dtype=complex)
    amplitudes[[2**k for k in range(n)]] = 1 / np.sqrt(n)
    return amplitudes


class TestTensorOracle:
    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    @pytest.mark.parametrize("theta", [np.pi / 8, np.pi / 6, np.pi / 4, np.pi / 3])
    @pytest.mark.parametrize("x", [2j, 0.5 * np.exp(1j * np.pi / 3)])
    def test_ghz(self, n, theta, x):
        _, _, x1 = ghz_parameters(n, theta, x)
        oracle = tensor_success(ghz_amplitudes(n, theta), [x1] + [x] * (n - 1))
        assert ghz_closed_form(n, theta, x) == pytest.approx(oracle, abs=1e-10)

    @pytest.mark.parametrize("n", [3, 4, 5])
    @pytest.mark.parametrize("x", [1.0, 0.3j, 2 - 1j])
    def test_w(self, n, x):
        _, _, x1 = w_parameters(n, x)
        oracle = tensor_success(w_amplitudes(n), [x1] + [x] * (n - 1))
        assert w_closed_form(n, x) == pytest.approx(oracle, abs=1e-10)

    def test_fixtures(self):
        _, _, x1 = ghz_parameters(3, np.pi / 4, GHZ_X)
        oracle = tensor_success(ghz_amplitudes(3, np.pi / 4), [x1, GHZ_X, GHZ_X])
        assert oracle == pytest.approx(GHZ_P_SUCCESS, abs=1e-10)
        assert tensor_success(w_amplitudes(3), [-5 / 3, 1.0, 1.0]) == pytest.approx(W_P_SUCCESS, abs=1e-10)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    @pytest.mark.parametrize("theta", [np.pi / 8, np.pi / 4, np.pi / 3])
    def test_ghz_zero_modulus(self, n, theta):
        x = (1 / np.tan(theta)) ** (1 / (n - 2)) * np.exp(0.4j)
        assert ghz_closed_form(n, theta, x) <= 1e-12

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_w_zero_modulus(self, n):
        assert w_closed_form(n, np.exp(0.7j) / np.sqrt(n - 1)) <= 1e-12


class TestPhase:
    def test_no_h2(self, ghz3):
        assert phase_pick(ghz3) == pytest.approx(np.pi / 2)

    def test_picked_phase_is_admissible(self, rng):
        for _ in range(5):
            s = haar_random_symmetric(4, rng)
            diagnostics = phase_diagnostics(s, phase_pick(s))
            assert diagnostics["double_phase_admissible"]
            assert abs(diagnostics["double_phase_value"].real) < 1e-12


class TestSolveAuto:
    def test_ghz(self, ghz3):
        solution = solve_auto(ghz3)
        assert solution.report.passed
        assert solution.p_success > 0
        assert solution.residual < 1e-8

    def test_w(self):
        solution = solve_auto(SymmetricState.w(4))
        assert solution.report.passed

    @pytest.mark.parametrize("seed", range(10))
    def test_random_states(self, seed):
        s = haar_random_symmetric(3 + seed % 4, seed)
        solution = solve_auto(s)
        assert solution.report.passed
        assert solution.residual < 1e-8
        assert solution.rotation is not None

    @pytest.mark.slow
    def test_many_random_states(self):
        rng = np.random.default_rng(7)
        for index in range(200):
            s = haar_random_symmetric(int(rng.integers(3, 7)), rng)
            assert solve_auto(s).report.passed, f"state {index} failed"

    def test_product_state(self):
        with pytest.raises(NotEntangled):
            solve_auto(SymmetricState.product(4))


class TestScan:
    def test_skips_excluded_modulus(self, ghz3):
        rows = scan_p_success(ghz3, np.array([0.5, 1.0, 2.0]), w=np.pi / 2)
        assert [row[0] for row in rows] == [0.5, 2.0]
        assert rows[1][2] == pytest.approx(GHZ_P_SUCCESS, rel=1e-9)

    def test_default_phase(self, w3):
        rows = scan_p_success(w3, np.linspace(0.1, 3.0, 30))
        assert rows
        assert all(row[1] == pytest.approx(np.pi / 2) for row in rows)
        assert all(row[2] > 0 for row in rows)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5))
def test_numerical_search_agrees_with_closed_form(seed):
    s = haar_random_symmetric(3, seed)
    assert solve_auto(s).report.passed
    outcome = find_settings(dicke_expand(s), SearchConfig(seed=seed))
    assert isinstance(outcome, SettingsFound)
    assert outcome.report.passed
