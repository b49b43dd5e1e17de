import csv
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from centralmeasure import ErgodicParams, cayley, convergence_run, minor, new_sample
from centralmeasure.cli import RunConfig, emit_plotdata, main
from centralmeasure.errors import ConfigInvalid
from centralmeasure.io import (
    fmt,
    format_matrix,
    parse_matrix,
    read_matrix,
    read_measure_csv,
    write_matrix,
    write_measure_csv,
)
from centralmeasure.measures import PROJECTION, AtomicMeasure


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_text_round_trip(x):
    assert float(fmt(x)) == x


def test_fmt_bools_and_ints():
    assert fmt(True) == "true" and fmt(np.bool_(False)) == "false" and fmt(np.int64(7)) == "7"


def test_matrix_round_trip(tmp_path):
    m = minor(new_sample(ErgodicParams(0.5, 1.0, (2.0, -1.0)), 4), 6).entries
    back, tag = read_matrix(write_matrix(tmp_path / "m.txt", m))
    assert tag is None and np.array_equal(back, m)
    u = cayley(m).entries
    back, tag = parse_matrix(format_matrix(u, "unitary"))
    assert tag == "unitary" and np.array_equal(back, u)


def test_matrix_parse_errors():
    with pytest.raises(ValueError):
        parse_matrix("m 1\n0:0\n")
    with pytest.raises(ValueError):
        parse_matrix("n 2\n0:0 0:0\n")


def test_measure_csv_round_trip(tmp_path):
    m = AtomicMeasure(np.array([-1 / 3, 0.1, 2.0]), np.array([1 + 2j, -0.5j, math.pi]), PROJECTION)
    back = read_measure_csv(write_measure_csv(tmp_path / "s.csv", m))
    assert np.array_equal(back.locations, m.locations) and np.array_equal(back.weights, m.weights)


def test_plotdata_row_counts(tmp_path):
    rep = convergence_run(ErgodicParams(0, 0, (2.0, -1.0)), 1,
                          intervals=["[1.5, 2.5]", "(-1.5, -0.5)"], pairs=[(1, 2)])
    with open(emit_plotdata(rep, tmp_path / "p.csv"), newline="") as fh:
        rows = list(csv.DictReader(fh))
    series = [r["series"] for r in rows]
    assert series.count("lambda") == 10 and series.count("sigma") == 10
    assert {r["a"] for r in rows if r["series"] == "lambda"} == {""}
    assert all(float(r["error"]) >= 0 for r in rows)


def test_config_rejects_bad_input():
    with pytest.raises(ConfigInvalid):
        RunConfig.from_dict({"params": {"gamma2": -1}})
    with pytest.raises(ConfigInvalid):
        RunConfig.from_dict({"experiments": []})
    with pytest.raises(ConfigInvalid):
        RunConfig.from_dict({"params": {"points": [2.0]}, "intervals": ["[1.9999999999, 3]"]})
    with pytest.raises(ConfigInvalid):
        RunConfig.from_dict({"experiments": ["bogus"]})


def test_config_tail_block():
    cfg = RunConfig.from_dict({"params": {"points": [3.0], "tail": {"c": 1, "exponent": 1, "tol": 0.01}}})
    assert cfg.params.p == 101 and cfg.params.points[0] == 3.0
    assert cfg.params.tail_bound == pytest.approx(0.01)


def _write_cfg(tmp_path, **extra):
    cfg = {"params": {"gamma1": 0, "gamma2": 0, "points": [2.0, -1.0]}, "seed": 5,
           "n_grid": [16, 32], "intervals": ["[1.5, 2.5]", "(-1.5, -0.5)"], "pairs": [[1, 1], [1, 2]],
           "replicas": 3, "moments": {"n": [10], "r": [2], "replicas": 20000},
           "cayley": {"n": 16}, "split": {"n": 64}, "estimate": {"n": 64}}
    cfg.update(extra)
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return p


def test_cli_moments_exit_zero(tmp_path):
    out = tmp_path / "out"
    assert main(["moments", "--config", str(_write_cfg(tmp_path)), "--out", str(out), "--verbosity", "0"]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["all_passed"] and list(summary["experiments"]) == ["moments"]
    assert (out / "moments.csv").read_text().startswith("n,r,empirical,oracle,z\n")


def test_cli_config_errors(tmp_path):
    assert main(["all", "--config", str(_write_cfg(tmp_path, experiments=[])), "--verbosity", "0"]) == 1
    assert main(["all", "--config", str(tmp_path / "missing.json"), "--verbosity", "0"]) == 1


def test_cli_sample_writes_minor(tmp_path):
    out = tmp_path / "o"
    assert main(["sample", "--config", str(_write_cfg(tmp_path)), "--out", str(out), "--verbosity", "0"]) == 0
    m, _ = read_matrix(out / "minor.txt")
    assert m.shape == (16, 16) and np.array_equal(m, m.conj().T)


def test_cli_failed_check_exit_three(tmp_path):
    # a bound slack of -1 cannot be met
    cfg = _write_cfg(tmp_path, norm={"slack": -1.0})
    assert main(["norm", "--config", str(cfg), "--out", str(tmp_path / "o"), "--verbosity", "0"]) == 3


def _csv_bytes(d):
    return {p.name: p.read_bytes() for p in sorted(d.glob("*.csv"))}


def test_cli_outputs_deterministic(tmp_path):
    cfg = _write_cfg(tmp_path)
    runs = []
    for tag, threads in (("a", 1), ("b", 1), ("c", 8)):
        out = tmp_path / tag
        assert main(["all", "--config", str(cfg), "--out", str(out), "--threads", str(threads),
                     "--verbosity", "0"]) in (0, 3)
        runs.append(_csv_bytes(out))
    assert len(runs[0]) == 8
    assert runs[0] == runs[1] == runs[2]
