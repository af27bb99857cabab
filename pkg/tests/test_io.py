import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covcalc.grids import FourierSeries, circle_grid, disk_grid
from covcalc.io import Check, RunRecord, dumps, fmt_float, read_grid_csv, write_sampled


@pytest.mark.parametrize(
    "x, text",
    [(0.0, "0.0"), (-0.0, "0.0"), (1.0, "1"), (0.1, "0.10000000000000001"), (math.inf, '"Infinity"'), (math.nan, '"NaN"')],
)
def test_fmt_float(x, text):
    assert fmt_float(x) == text


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_text_round_trips(x):
    assert float(fmt_float(x)) == x


def test_dumps_is_sorted_and_parseable():
    obj = {"b": [1.5, 2], "a": {"z": np.float64(0.25), "y": 1 + 2j, "x": np.arange(3)}, "c": True}
    text = dumps(obj)
    assert text == dumps(dict(reversed(list(obj.items()))))
    back = json.loads(text)
    assert list(back) == ["a", "b", "c"]
    assert back["a"]["y"] == [1.0, 2.0]
    assert back["a"]["x"] == [0, 1, 2]


def test_csv_round_trip(tmp_path):
    f = FourierSeries({2: 1 / 3, -1: 0.1j}).sample(circle_grid(16))
    d = FourierSeries({0: 1.0}).sample(disk_grid(4, 8, "weighted", 1.0, 3))
    for func in (f, d):
        out = tmp_path / "f.csv"
        written = write_sampled(func, out, "csv", note="test")
        assert [p.name for p in written] == ["f.csv", "f.csv.json"]
        back = read_grid_csv(out)
        assert np.array_equal(back["nodes"], func.grid.nodes)
        assert np.array_equal(back["weights"], func.grid.weights)
        assert np.array_equal(back["values"], func.values)
        env = json.loads(written[1].read_text())
        assert env["checksum"] == func.grid.checksum and env["N"] == len(func.grid) and env["note"] == "test"
    with pytest.raises(ValueError):
        write_sampled(f, tmp_path / "x", "xml")


def test_json_output_has_data(tmp_path):
    f = FourierSeries({1: 1.0}).sample(circle_grid(8))
    (path,) = write_sampled(f, tmp_path / "f.json", "json")
    obj = json.loads(path.read_text())
    assert obj["domain"] == "circle" and len(obj["data"]["value_re"]) == 8


def test_run_record_omits_wall_time_and_reports_counterexample():
    good = Check("a", 1e-12, 1e-10)
    bad = Check("b", 1e-3, 1e-6, detail={"where": 2})
    rec = RunRecord("verify", {"seed": 0}, residuals=[good, bad], wall_time=12.5)
    d = rec.to_dict()
    assert "wall_time" not in dumps(d)
    assert not d["ok"] and rec.first_failure() is bad
    assert d["counterexample"]["name"] == "b"
    assert RunRecord("verify", {}, residuals=[good]).to_dict().get("counterexample") is None


def test_check_treats_nan_as_failure():
    assert not Check("n", math.nan, 1.0).ok
    assert Check("z", 0.0, 0.0).ok
