import json

import numpy as np
import pytest
from click.testing import CliRunner

from covcalc.cli import cli
from covcalc.io import read_grid_csv

MAT = json.dumps({"dimension": 2, "entries": [[[0.3, 0], [0.2, 0]], [[0, 0], [-0.4, 0.1]]]})


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.delenv("COVCALC_URL", raising=False)
    monkeypatch.chdir(tmp_path)

    def invoke(*args):
        return CliRunner().invoke(cli, list(args))

    return invoke


def test_transform_hardy(run, tmp_path):
    res = run("transform", "hardy", "--fourier", "0,0,0,1", "--out", str(tmp_path / "h.csv"))
    assert res.exit_code == 0, res.output
    f = read_grid_csv(tmp_path / "h.csv")
    a, v = f["nodes"], f["values"]
    inner = np.abs(a) <= 0.9
    assert np.max(np.abs(v[inner] - a[inner] ** 3)) <= 1e-10
    assert np.max(np.abs(v - a**3)) <= 1e-5
    env = json.loads((tmp_path / "h.csv.json").read_text())
    assert env["record"]["ok"] and env["checksum"]


def test_transform_sb_first_hermite(run, tmp_path):
    res = run("transform", "sb", "--hermite", "0,1", "--format", "json", "--out", str(tmp_path / "s.json"))
    assert res.exit_code == 0, res.output
    d = json.loads((tmp_path / "s.json").read_text())["data"]
    z = np.array(d["node_re"]) + 1j * np.array(d["node_im"])
    v = np.array(d["value_re"]) + 1j * np.array(d["value_im"])
    shape = z * np.exp(-np.abs(z) ** 2 / 2)
    k = np.argmax(np.abs(shape))
    ratio = v[k] / shape[k]
    assert np.max(np.abs(v - ratio * shape)) <= 1e-10 * abs(ratio)


def test_transform_empty_coefficients(run, tmp_path):
    res = run("transform", "bergman", "--monomial", "", "--out", str(tmp_path / "b.csv"))
    assert res.exit_code == 0, res.output
    assert np.all(read_grid_csv(tmp_path / "b.csv")["values"] == 0)


def test_transform_rejects_two_lists(run):
    assert run("transform", "hardy", "--fourier", "1", "--hermite", "1").exit_code == 2


def test_transform_wrong_basis(run):
    res = run("transform", "hardy", "--hermite", "1")
    assert res.exit_code == 2 and "fourier" in res.output


def test_out_dir_from_environment(run, tmp_path, monkeypatch):
    monkeypatch.setenv("COVCALC_OUT_DIR", str(tmp_path / "reports"))
    assert run("verify", "groups").exit_code == 0
    assert (tmp_path / "reports" / "verify_groups.json").is_file()


def test_verify_groups_includes_weyl_check(run, tmp_path):
    res = run("verify", "groups", "--out", str(tmp_path / "g.json"))
    assert res.exit_code == 0, res.output
    rec = json.loads((tmp_path / "g.json").read_text())
    assert rec["ok"] and any("weyl" in c["name"] for c in rec["residuals"])


def test_verify_qplane(run):
    assert run("verify", "qplane").exit_code == 0


def test_verify_csv(run, tmp_path):
    assert run("verify", "qplane", "--format", "csv", "--out", str(tmp_path / "q.csv")).exit_code == 0
    lines = (tmp_path / "q.csv").read_text().splitlines()
    assert lines[0] == "name,value,tolerance,ok" and len(lines) > 1


def test_verify_fails_under_impossible_tolerance(run):
    res = run("verify", "groups", "--tolerance", "1e-30")
    assert res.exit_code == 1 and "FAILED" in res.output


@pytest.mark.parametrize(
    "f, matrix, code",
    [
        ("1", MAT, 0),
        ("1/(z-0.5)", MAT, 4),
        ("z", "[[0.97, 0], [0, 0]]", 3),
        ("1/(1-w)", MAT, 2),
        ("z", "[[1, 2]", 2),
        ("z", "missing.json", 2),
    ],
)
def test_funcalc_exit_codes(run, f, matrix, code):
    assert run("funcalc", f, "--matrix", matrix).exit_code == code


def test_funcalc_from_file_csv(run, tmp_path):
    (tmp_path / "t.json").write_text(MAT)
    res = run("funcalc", "1/(2-z)", "--matrix", str(tmp_path / "t.json"), "--format", "csv", "--out", "r.csv")
    assert res.exit_code == 0, res.output
    rows = (tmp_path / "r.csv").read_text().splitlines()
    assert rows[0] == "row,col,re,im" and len(rows) == 5
    t = np.array([[0.3, 0.2], [0, -0.4 + 0.1j]])
    want = np.linalg.inv(2 * np.eye(2) - t)
    got = np.zeros((2, 2), complex)
    for line in rows[1:]:
        i, j, re, im = line.split(",")
        got[int(i), int(j)] = complex(float(re), float(im))
    assert np.max(np.abs(got - want)) <= 1e-8


def test_funcalc_weyl(run, tmp_path):
    h = json.dumps([[1.0, [0, 0.5]], [[0, -0.5], -0.3]])
    res = run("funcalc", "z^2 - 1", "--matrix", h, "--method", "weyl", "--out", "w.json")
    assert res.exit_code == 0, res.output
    assert json.loads((tmp_path / "w.json").read_text())["ok"]
    # non-Hermitian input is rejected
    assert run("funcalc", "z^2", "--matrix", MAT, "--method", "weyl").exit_code == 2
