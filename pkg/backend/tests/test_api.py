import numpy as np
import pytest
from fastapi.testclient import TestClient

from main import app
from models.records import DistributionRecord, SettingsRecord, StateRecord, SymmetricRecord
from nonlocality.qstate import PureState, SymmetricState, dicke_expand

from .conftest import GHZ_P_SUCCESS, W_P_SUCCESS


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def dump(record) -> dict:
    return record.model_dump(mode="json")


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


class TestStates:
    def test_ghz_is_entangled(self, client, ghz3):
        body = {"state": dump(StateRecord.from_state(dicke_expand(ghz3)))}
        response = client.post("/api/states/entanglement", json=body)
        assert response.status_code == 200
        assert response.json()["entangled"]
        assert response.json()["second_schmidt"] == pytest.approx(1 / np.sqrt(2))

    def test_biseparable_state(self, client):
        psi = PureState.from_amplitudes([1, 0, 0, 0, 0, 0, 1, 0], 3)
        response = client.post("/api/states/entanglement", json={"state": dump(StateRecord.from_state(psi))})
        assert not response.json()["entangled"]
        assert response.json()["weakest_cut"] == "3|12"

    def test_unnormalizable_state(self, client):
        body = {"state": {"n": 3, "amplitudes": [[0.0, 0.0]] * 8}}
        assert client.post("/api/states/entanglement", json=body).status_code == 400

    def test_closest_product(self, client, w3):
        body = {"state": dump(SymmetricRecord.from_state(w3))}
        response = client.post("/api/states/closest-product", json=body)
        assert response.status_code == 200
        assert response.json()["overlap"] == pytest.approx(2 / 3, abs=1e-8)
        assert abs(complex(*response.json()["magic_h"][1])) < 1e-8


class TestHardy:
    def test_distribution_then_report(self, client, ghz3, ghz_solution):
        body = {
            "state": dump(StateRecord.from_state(dicke_expand(ghz3))),
            "settings": dump(SettingsRecord.from_settings(ghz_solution.settings)),
        }
        response = client.post("/api/hardy/distribution", json=body)
        assert response.status_code == 200

        report = client.post("/api/hardy/report", json={"distribution": response.json()})
        assert report.status_code == 200
        assert report.json()["passed"]
        assert report.json()["p_success"] == pytest.approx(GHZ_P_SUCCESS)

    def test_mismatched_settings(self, client, ghz3, z_settings3):
        two_party = SettingsRecord.from_settings(z_settings3).model_copy(
            update={"n": 2, "rays": SettingsRecord.from_settings(z_settings3).rays[:2]}
        )
        body = {"state": dump(StateRecord.from_state(dicke_expand(ghz3))), "settings": dump(two_party)}
        assert client.post("/api/hardy/distribution", json=body).status_code == 400

    def test_bad_pivot(self, client, product_distribution):
        body = {"distribution": dump(DistributionRecord.from_distribution(product_distribution)), "pivot": 5}
        assert client.post("/api/hardy/report", json=body).status_code == 400

    def test_unknown_variant(self, client, product_distribution):
        body = {
            "distribution": dump(DistributionRecord.from_distribution(product_distribution)),
            "variant": "bogus",
        }
        assert client.post("/api/hardy/report", json=body).status_code == 400


class TestSymmetric:
    def test_w_with_x(self, client):
        response = client.post("/api/symmetric/solve", json={"w": 3, "x": [1.0, 0.0]})
        assert response.status_code == 200
        assert response.json()["p_success"] == pytest.approx(W_P_SUCCESS)

    def test_auto_ghz(self, client):
        response = client.post("/api/symmetric/solve", json={"ghz": {"n": 4, "theta": 0.6}})
        assert response.status_code == 200
        assert response.json()["residual"] < 1e-8

    def test_excluded_x(self, client):
        response = client.post(
            "/api/symmetric/solve", json={"ghz": {"n": 3, "theta": 0.7854}, "x": [1.0, 0.0]}
        )
        assert response.status_code == 422
        assert "excluded x" in response.json()["detail"]

    def test_product_state(self, client):
        body = {"state": dump(SymmetricRecord.from_state(SymmetricState.product(3)))}
        assert client.post("/api/symmetric/solve", json=body).status_code == 422

    def test_needs_exactly_one_source(self, client):
        assert client.post("/api/symmetric/solve", json={}).status_code == 400
        assert client.post("/api/symmetric/solve", json={"w": 3, "ghz": {"n": 3, "theta": 0.5}}).status_code == 400


class TestPolytope:
    def test_classify(self, client, ghz_hardy_distribution):
        body = {"distribution": dump(DistributionRecord.from_distribution(ghz_hardy_distribution))}
        response = client.post("/api/polytope/classify", json=body)
        assert response.status_code == 200
        assert response.json()["label"] == "genuinely-nonlocal"
        assert not response.json()["outcome"]["feasible"]

    def test_classify_wrong_party_count(self, client):
        body = {"distribution": {"n": 2, "p": [[0.25] * 4] * 4}}
        assert client.post("/api/polytope/classify", json=body).status_code == 400

    def test_vertex_check(self, client):
        response = client.get("/api/polytope/vertex-check")
        assert response.status_code == 200
        assert response.json()["holds"]
        assert response.json()["vertex_count"] == 288
