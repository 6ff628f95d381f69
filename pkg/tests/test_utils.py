import math
import pytest
import numpy as np
import pandas as pd
from loguru import logger
from lyacert.oracle import Verdict
from lyacert.utils import (
    atomic_write,
    collect_discrepancies,
    finite_or_none,
    read_json,
    write_csv,
    write_json,
)


def test_collect_discrepancies():
    with collect_discrepancies() as found:
        logger.bind(discrepancy="exp_bound").warning("Oracle value exceeds the bound.")
        logger.warning("Not a discrepancy.")
    logger.bind(discrepancy="exp_bound").warning("Logged after the block.")
    assert found == [{"name": "exp_bound", "message": "Oracle value exceeds the bound."}]


def test_collect_discrepancies_by_name():
    with collect_discrepancies(names=["rho_threshold"]) as found:
        logger.bind(discrepancy="exp_bound").warning("Skipped.")
        logger.bind(discrepancy="rho_threshold").warning("Kept.")
    assert [record["name"] for record in found] == ["rho_threshold"]


def test_write_json_converts_numpy_types(tmp_path):
    path = tmp_path / "nested" / "report.json"
    data = {
        "value": np.float64(1.5),
        "count": np.int64(3),
        "passed": np.bool_(True),
        "bounds": np.array([1.0, 2.0]),
        "verdict": Verdict.FINITE,
        "table": pd.DataFrame({"n": [0, 1]}),
    }
    write_json(path, data)
    assert read_json(path) == {
        "value": 1.5,
        "count": 3,
        "passed": True,
        "bounds": [1.0, 2.0],
        "verdict": "finite",
        "table": {"n": [0, 1]},
    }


def test_atomic_write_replaces_file(tmp_path):
    path = tmp_path / "table.csv"
    atomic_write(path, "old")
    write_csv(path, pd.DataFrame({"i": [1, 2], "mu": [0.5, 0.25]}))
    assert path.read_text(encoding="utf-8") == "i,mu\n1,0.5\n2,0.25\n"
    assert [item.name for item in tmp_path.iterdir()] == ["table.csv"]


@pytest.mark.parametrize("value, expected", [(1.0, 1.0), (math.inf, None), (math.nan, None)])
def test_finite_or_none(value, expected):
    assert finite_or_none(value) == expected
    assert finite_or_none(None) is None
