import json
import math

import numpy as np
import pytest

from qfound._optimize import golden_max
from qfound.report import jsonable, to_json, write_csv


def test_jsonable_rounds_and_splits_complex():
    out = jsonable({"x": math.pi, "z": 1 + 2j, "a": np.array([0.1, 0.2]), "n": np.int64(3), "b": np.bool_(True)})
    assert out == {"x": 3.14159265358979, "z": [1.0, 2.0], "a": [0.1, 0.2], "n": 3, "b": True}


def test_non_finite_becomes_null():
    assert json.loads(to_json({"x": float("nan")})) == {"x": None}


def test_unknown_type_rejected():
    with pytest.raises(TypeError):
        jsonable({"x": object()})


def test_csv_lf_and_header(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(path, ["a", "b"], [(1, 0.5), ("x,y", 2.0)])
    assert path.read_bytes() == b'a,b\n1,0.5\n"x,y",2.0\n'


def test_golden_max_finds_peak():
    x, fx = golden_max(lambda t: -(t - 0.3) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-8) and fx == pytest.approx(0.0, abs=1e-15)


def test_golden_max_keeps_endpoint():
    x, _ = golden_max(lambda t: t, 0.0, 1.0)
    assert x == 1.0
