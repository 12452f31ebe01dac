import numpy as np
import pytest
from pydantic import ValidationError

from nonlocality.exceptions import InvalidState
from nonlocality.hardy import hardy_conditions
from nonlocality.measure import born_distribution
from nonlocality.qstate import dicke_expand
from nonlocality.search import (
    NoSettingsFound,
    SearchConfig,
    SettingsFound,
    derive_seed,
    find_settings,
    hardy_two_qubit_optimum,
    random_experiment,
    settings_from_angles,
)

HARDY_TWO_QUBIT_OPTIMUM = (5 * np.sqrt(5) - 11) / 2


@pytest.fixture
def quick_cfg():
    return SearchConfig(multistarts=12, max_iters=2000, seed=3)


def test_config_rejects_nonpositive_values():
    with pytest.raises(ValidationError):
        SearchConfig(multistarts=0)
    with pytest.raises(ValidationError):
        SearchConfig(penalty=-1.0)


def test_angles_give_normalized_rays():
    found = settings_from_angles(3, np.linspace(0.1, 2.0, 12))
    assert found.n == 3
    for a, b in found.pairs:
        assert np.linalg.norm(a.normalized()) == pytest.approx(1.0)
        assert np.linalg.norm(b.normalized()) == pytest.approx(1.0)


def test_derived_seeds():
    assert derive_seed(7, 3) == derive_seed(7, 3)
    assert len({derive_seed(7, index) for index in range(50)}) == 50
    assert derive_seed(7, 0) != derive_seed(8, 0)


class TestFindSettings:
    def test_ghz(self, ghz3, quick_cfg):
        psi = dicke_expand(ghz3)
        outcome = find_settings(psi, quick_cfg)
        assert isinstance(outcome, SettingsFound)
        assert outcome.report.passed
        assert outcome.p_success > quick_cfg.delta_pos
        report = hardy_conditions(born_distribution(psi, outcome.settings), eps_zero=1e-9)
        assert report.passed

    def test_product_state_has_no_settings(self, product3):
        cfg = SearchConfig(multistarts=2, max_iters=200, seed=1)
        outcome = find_settings(product3, cfg)
        assert isinstance(outcome, NoSettingsFound)
        assert outcome.iterations > 0


class TestRandomExperiment:
    def test_small_run(self, quick_cfg):
        summary = random_experiment(3, 3, seed=5, cfg=quick_cfg, lp_subsample=1, jobs=1)
        assert summary.count == 3
        assert [r.index for r in summary.records] == [0, 1, 2]
        assert summary.lp_checked == 1
        assert summary.passed >= 2
        for record in summary.records:
            if record.passed:
                assert record.max_residual < quick_cfg.eps_zero
                assert record.p_success > quick_cfg.delta_pos
            if record.lp_checked and record.passed:
                assert record.lp_infeasible

    def test_reproducible(self, quick_cfg):
        first = random_experiment(3, 2, seed=11, cfg=quick_cfg, lp_subsample=0)
        second = random_experiment(3, 2, seed=11, cfg=quick_cfg, lp_subsample=0)
        assert first.records == second.records

    def test_worker_count_does_not_change_results(self, quick_cfg):
        serial = random_experiment(3, 2, seed=13, cfg=quick_cfg, lp_subsample=0, jobs=1)
        parallel = random_experiment(3, 2, seed=13, cfg=quick_cfg, lp_subsample=0, jobs=2)
        assert serial.records == parallel.records

    def test_rejects_unsupported_sizes(self):
        with pytest.raises(InvalidState):
            random_experiment(5, 1, seed=0)
        with pytest.raises(InvalidState):
            random_experiment(3, 0, seed=0)

    @pytest.mark.slow
    def test_three_parties(self):
        summary = random_experiment(3, 500, seed=2024, lp_subsample=20, jobs=4)
        assert summary.failed == 0
        assert summary.lp_infeasible == summary.lp_checked == 20

    @pytest.mark.slow
    def test_four_parties(self):
        summary = random_experiment(4, 100, seed=2024, jobs=4)
        assert summary.failed == 0


def test_two_qubit_optimum():
    optimum = hardy_two_qubit_optimum(SearchConfig(multistarts=8, max_iters=4000, seed=0))
    assert optimum.p_success <= HARDY_TWO_QUBIT_OPTIMUM + 1e-6
    assert optimum.p_success == pytest.approx(HARDY_TWO_QUBIT_OPTIMUM, abs=1e-3)
    assert optimum.state.n == 2
