import warnings

import numpy as np
import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from covcalc.service.app import app

MAT = {"dimension": 2, "entries": [[[0.3, 0], [0.2, 0]], [[0, 0], [-0.4, 0.1]]]}


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200 and r.json()["status"] == "ok"


def test_transform_hardy_is_monomial(client):
    r = client.post("/transform", json={"theory": "hardy", "coeffs": ["0", "0", "0", "1"]})
    assert r.status_code == 200
    body = r.json()
    d = body["data"]
    a = np.array(d["node_re"]) + 1j * np.array(d["node_im"])
    v = np.array(d["value_re"]) + 1j * np.array(d["value_im"])
    inner = np.abs(a) <= 0.9
    assert np.max(np.abs(v[inner] - a[inner] ** 3)) <= 1e-10
    assert body["record"]["ok"] and body["envelope"]["calibrated"]
    assert "wall_time" not in body["record"]


def test_transform_raw_sb(client):
    r = client.post("/transform", json={"theory": "sb", "coeffs": [1]})
    body = r.json()
    assert r.status_code == 200 and not body["envelope"]["calibrated"]


def test_verify_groups(client):
    r = client.post("/verify", json={"suite": "groups"})
    rec = r.json()["record"]
    assert r.status_code == 200 and rec["ok"]
    assert rec["parameters"]["suite"] == "groups"


def test_funcalc_constant_is_identity(client):
    r = client.post("/funcalc", json={"f": "1", "matrix": MAT})
    assert r.status_code == 200
    entries = r.json()["record"]["outputs"]["result"]["entries"]
    assert np.allclose([[complex(*e) for e in row] for row in entries], np.eye(2), atol=1e-12)


@pytest.mark.parametrize(
    "path, body, code, kind",
    [
        ("/funcalc", {"f": "1/(z-0.5)", "matrix": MAT}, 4, None),
        ("/funcalc", {"f": "z", "matrix": [[0.97, 0], [0, 0]]}, 3, None),
        ("/funcalc", {"f": "1/(1-w)", "matrix": MAT}, 2, None),
        ("/funcalc", {"f": "z", "matrix": {"dimension": 3, "entries": [[1]]}}, 2, None),
        ("/verify", {"suite": "nope"}, 2, "suite"),
    ],
)
def test_command_errors_map_to_exit_codes(client, path, body, code, kind):
    r = client.post(path, json=body)
    assert r.status_code == 400
    err = r.json()["error"]
    assert err["exit_code"] == code
    if kind:
        assert err["kind"] == kind


def test_syntax_error_reports_position(client):
    r = client.post("/funcalc", json={"f": "z + * 2", "matrix": MAT})
    err = r.json()["error"]
    assert r.status_code == 400 and err["exit_code"] == 2 and err["position"] == 4


@pytest.mark.parametrize(
    "path, body",
    [
        ("/transform", {"theory": "fock"}),
        ("/transform", {"theory": "bergman", "m": 1}),
        ("/verify", {"tolerance_scale": 0}),
        ("/funcalc", {"f": "z", "matrix": MAT, "nodes": 4}),
    ],
)
def test_validation_errors(client, path, body):
    assert client.post(path, json=body).status_code == 422
