"""HTTP service endpoints (in-process)."""

import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore", DeprecationWarning)
    from fastapi.testclient import TestClient

from relmotion.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_simulate_endpoint(client):
    resp = client.post("/simulate", json={
        "config": {"grid": {"t_end_ns": 1.0}, "system": {"n_max": 2}}})
    assert resp.status_code == 200
    series = resp.json()["series"]
    assert len(series["times_ns"]) == len(series["n_ph"]) > 1
    assert series["p_e"][0] == 0.0
    assert series["times_ns"][-1] == pytest.approx(1.0)


def test_simulate_rejects_extra_fields(client):
    resp = client.post("/simulate", json={"config": {"system": {"zzz": 1}}})
    assert resp.status_code == 422


def test_simulate_maps_runtime_failures_to_422(client, monkeypatch):
    def boom(cfg):
        raise RuntimeError("integration aborted")
    import importlib
    app_module = importlib.import_module("relmotion.service.app")
    monkeypatch.setattr(app_module, "run_simulate", boom)
    resp = client.post("/simulate", json={"config": {}})
    assert resp.status_code == 422
    assert "integration aborted" in resp.json()["detail"]


def test_perturbative_endpoint(client):
    resp = client.post("/perturbative", json={
        "config": {"drive": {"type": "uniform_accel", "accel_m_s2": 1e15,
                             "duration_ns": 0.9}}})
    assert resp.status_code == 200
    result = resp.json()["result"]
    assert 0.0 <= result["r_em"] < 1.0
    assert result["sigma_z_pert"] == pytest.approx(1.0 - result["r_em"])


def test_fig3_requires_a_branch(client):
    resp = client.post("/reproduce/fig3",
                       json={"unitary": False, "dissipative": False})
    assert resp.status_code == 422


def test_accel_endpoint_reports_check(client):
    resp = client.post("/reproduce/accel", json={})
    assert resp.status_code == 200
    payload = resp.json()
    assert payload["scenario"] == "uniform_accel"
    assert [c["name"] for c in payload["checks"]] == ["r_em_in_expected_order"]
    assert "uniform_accel" in payload["perturbative"]


def test_sweep_endpoint(client):
    resp = client.post("/sweep", json={
        "config": {"grid": {"t_end_ns": 1.0}, "system": {"n_max": 2}},
        "axis": "system.g0_over_omega", "values": [0.0, 0.01]})
    assert resp.status_code == 200
    rows = resp.json()["rows"]
    assert len(rows) == 2
    assert rows[0]["config"]["system"]["g0_over_omega"] == 0.0
    assert max(rows[0]["results"]["simulate"]["n_ph"]) == 0.0


def test_sweep_unknown_axis(client):
    resp = client.post("/sweep", json={
        "config": {}, "axis": "system.bogus", "values": [1.0]})
    assert resp.status_code == 422


def test_converge_endpoint(client):
    resp = client.post("/converge", json={
        "config": {"grid": {"t_end_ns": 1.0}}, "n_max_list": [2, 3, 4]})
    assert resp.status_code == 200
    payload = resp.json()
    assert payload["extras"]["recommendation"] == 2
    assert payload["all_passed"] is True


def test_converge_rejects_unsorted(client):
    resp = client.post("/converge", json={
        "config": {}, "n_max_list": [4, 2]})
    assert resp.status_code == 422
