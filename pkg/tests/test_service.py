import pytest
from fastapi.testclient import TestClient

from nfbm import __version__, point_analysis, rows_to_csv, run_snr_sweep
from nfbm.service import create_app
from nfbm.service.models import ExperimentRequest


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


TINY = dict(
    tx_num_elements=8,
    rx_num_elements=8,
    distance=0.3,
    snr_points=[0.0, 10.0],
    distance_points=[0.3, 3.0],
    frequency_points=[30e9],
    mc_samples=0,
    seed=11,
)


def tiny_config():
    return ExperimentRequest(**TINY).to_config()


def test_health(client):
    data = client.get("/health").json()
    assert data == {"status": "ok", "version": __version__}


def test_capacity_matches_library(client):
    response = client.post("/analysis/capacity", json=TINY)
    assert response.status_code == 200
    data = response.json()
    point = point_analysis(tiny_config())
    assert data["dof"] == point.decomposition.dof
    assert data["k"] == len(point.candidates)
    assert data["c_bm_asymptotic"] == pytest.approx(point.c_bm_asymptotic, rel=1e-12)
    assert data["c_bbs"] == pytest.approx(point.c_bbs, rel=1e-12)
    assert data["gap"] == pytest.approx(point.gap, rel=1e-12)
    assert data["snr_db"] == 10.0
    probs = [entry["probability"] for entry in data["top_probabilities"]]
    assert probs == sorted(probs, reverse=True)
    assert len(probs) == min(5, data["k"])


def test_dof_endpoint(client):
    response = client.post("/analysis/dof", json=TINY)
    assert response.status_code == 200
    data = response.json()
    point = point_analysis(tiny_config())
    assert data["dof"] == point.decomposition.dof
    assert data["fraunhofer_distance_m"] == pytest.approx(point.fraunhofer_distance)
    assert data["within_near_field"] == (0.3 < point.fraunhofer_distance)
    assert data["leading_relative_amplitudes"][0] == pytest.approx(1.0)


def test_snr_sweep_rows_match_library(client):
    response = client.post("/sweeps/snr", json=TINY)
    assert response.status_code == 200
    body = response.json()
    rows = run_snr_sweep(tiny_config())
    assert body["kind"] == "snr"
    assert body["row_count"] == len(rows)
    first = body["rows"][0]
    assert first["distance_m"] == rows[0].distance_m
    assert first["c_bm_asymptotic"] == pytest.approx(rows[0].c_bm_asymptotic, rel=1e-12)
    assert first["se_mc_mean"] is None


def test_csv_format_is_byte_identical_to_library(client):
    response = client.post("/sweeps/snr", params={"format": "csv"}, json=TINY)
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/csv")
    assert response.text == rows_to_csv(run_snr_sweep(tiny_config()))


def test_invalid_geometry_is_400(client):
    bad = dict(TINY, scatterer_offset_axial=5.0)  # outside the 0.3 m link
    response = client.post("/analysis/capacity", json=bad)
    assert response.status_code == 400
    assert "scatterer" in response.json()["detail"]


def test_unknown_field_is_422(client):
    response = client.post("/analysis/capacity", json=dict(TINY, bogus=1))
    assert response.status_code == 422


def test_bad_format_param_rejected(client):
    response = client.post("/sweeps/snr", params={"format": "xml"}, json=TINY)
    assert response.status_code == 422


def test_complex_reflection_string(client):
    payload = dict(TINY, reflection_coefficient="0.3+0.2j")
    response = client.post("/analysis/capacity", json=payload)
    assert response.status_code == 200
    too_big = dict(TINY, reflection_coefficient="3.0")
    assert client.post("/analysis/capacity", json=too_big).status_code == 400
