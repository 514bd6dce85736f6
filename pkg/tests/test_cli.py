import json
import subprocess
import sys

import pytest

from qinfo import cli, information
from qinfo.information import MeanInfoResult

SQRT_HALF = 2**-0.5


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def zero_plus(tmp_path):
    path = tmp_path / "zero_plus.json"
    path.write_text(json.dumps({
        "dim": 2,
        "states": [[[1, 0], [0, 0]], [[SQRT_HALF, 0], [SQRT_HALF, 0]]],
        "probs": [0.5, 0.5],
    }))
    return str(path)


def test_accessible(capsys):
    code, out, _ = run(capsys, "accessible", "--dim", "2")
    assert code == 0
    (rec,) = json.loads(out)
    assert rec == {"quantity": "J", "dim": 2, "value_bits": 0.278652, "method": "closed"}


def test_avg_info_closed_and_full_precision(capsys):
    code, out, _ = run(capsys, "avg-info", "--dim", "3")
    assert code == 0
    assert json.loads(out)[0]["value_bits"] == 1.20225
    _, out, _ = run(capsys, "avg-info", "--dim", "3", "--full-precision")
    assert json.loads(out)[0]["value_bits"] == pytest.approx(5 / 6 / 0.6931471805599453, abs=1e-11)


def test_avg_info_mc(capsys):
    code, out, _ = run(capsys, "avg-info", "--dim", "2", "--mc", "--samples", "20000", "--seed", "3")
    assert code == 0
    closed, mc = json.loads(out)
    assert mc["method"] == "mc" and mc["stderr_bits"] > 0
    assert abs(mc["value_bits"] - closed["value_bits"]) <= 4 * mc["stderr_bits"]


def test_avg_info_consistency_failure_exits_1(capsys, monkeypatch):
    def broken(D, samples, rng, **kw):
        return MeanInfoResult(D, information.mean_measurement_info_closed(D), 0.0, 1e-3, samples)

    monkeypatch.setattr(information, "mean_measurement_info_mc", broken)
    code, _, err = run(capsys, "avg-info", "--dim", "2", "--mc", "--samples", "100")
    assert code == 1
    assert "consistency" in err


def test_clone_check(capsys, zero_plus):
    code, out, _ = run(capsys, "clone-check", "--ensemble", zero_plus, "--copies", "1")
    assert code == 0
    verdict = json.loads(out)
    assert verdict["clonable"] is False
    (pair,) = verdict["violating_pairs"]
    assert (pair["j"], pair["k"]) == (0, 1)
    assert pair["violation"] == pytest.approx(0.207107, abs=1e-6)
    code, out, _ = run(capsys, "clone-check", "--ensemble", zero_plus, "--apparatus", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "j,k,overlap,violation"


def test_entropy(capsys, zero_plus):
    code, out, _ = run(capsys, "entropy", "--ensemble", zero_plus)
    assert code == 0
    recs = {r["quantity"]: r["value_bits"] for r in json.loads(out)}
    assert recs["I"] == 1.0
    assert recs["S"] == pytest.approx(0.600876, abs=1e-6)


def test_schmidt_bell(capsys, tmp_path):
    path = tmp_path / "bell.json"
    path.write_text(json.dumps({"dim": 4, "amplitudes": [[SQRT_HALF, 0], [0, 0], [0, 0], [SQRT_HALF, 0]]}))
    code, out, _ = run(capsys, "schmidt", "--state", str(path), "--dims", "2,2")
    assert code == 0
    res = json.loads(out)
    assert res["coefficients"] == [0.5, 0.5]
    assert res["entanglement_entropy_bits"] == 1.0
    code, _, _ = run(capsys, "schmidt", "--state", str(path), "--dims", "2,3")
    assert code == 2


def test_volumes_and_microstates(capsys):
    code, out, _ = run(capsys, "volumes", "--dim", "3", "--phi", "0.1")
    assert code == 0
    recs = {r["quantity"]: r["value"] for r in json.loads(out)}
    assert recs["projective_volume"] == pytest.approx(9.8696 / 2, rel=1e-4)
    code, out, _ = run(capsys, "microstates", "--dim", "16", "--phi", str(2**-5))
    assert code == 0
    assert json.loads(out)[0]["value_bits"] == 150
    code, out, _ = run(capsys, "microstates", "--classical", "--dof", "2", "--area-ratio", "1024")
    assert code == 0
    assert json.loads(out)[0]["value_bits"] == 20
    assert run(capsys, "microstates", "--dim", "4")[0] == 2


def test_commsim_configs(capsys, tmp_path, zero_plus):
    ens = json.loads(open(zero_plus).read())
    cfg = tmp_path / "cfg.json"
    counts = tmp_path / "counts.csv"
    cfg.write_text(json.dumps({"ensemble": ens, "basis": "computational", "trials": 2000, "seed": 7}))
    code, out, _ = run(capsys, "commsim", "--config", str(cfg), "--counts-csv", str(counts))
    assert code == 0
    payload = json.loads(out)
    assert payload["counts"][0][1] == 0
    assert sum(map(sum, payload["counts"])) == 2000
    assert counts.read_text().startswith("input,outcome,count\n")
    code, out, _ = run(capsys, "commsim", "--config", str(cfg), "--format", "csv")
    assert out.splitlines()[0] == "input,outcome,count"

    cfg.write_text(json.dumps({"ensemble": "uniform", "dim": 2, "basis": "random", "trials": 20000, "seed": 1}))
    code, out, _ = run(capsys, "commsim", "--config", str(cfg))
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["accessible_closed_bits"] == pytest.approx(0.278652)

    cfg.write_text(json.dumps({"ensemble": {"cells": 8, "probs": [0.125] * 8}}))
    code, out, _ = run(capsys, "commsim", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["report"]["mutual_info_bits"] == 3.0


@pytest.mark.parametrize("argv", [
    ["accessible", "--dim", "2", "--bogus"],
    ["accessible", "--dim", "0"],
    ["avg-info", "--dim", "2", "--seed", "-1"],
    ["schmidt", "--state", "x.json", "--dims", "2"],
])
def test_flag_validation_exits_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_malformed_inputs_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "entropy", "--ensemble", str(bad))[0] == 2
    assert run(capsys, "entropy", "--ensemble", str(tmp_path / "missing.json"))[0] == 2
    unnormalized = tmp_path / "u.json"
    unnormalized.write_text(json.dumps({"dim": 2, "states": [[[1, 0], [1, 0]]], "probs": [1]}))
    assert run(capsys, "clone-check", "--ensemble", str(unnormalized))[0] == 2
    assert run(capsys, "accessible", "--dim", "1")[0] == 2


def test_output_file_and_repeatability(capsys, tmp_path):
    path = tmp_path / "out.json"
    argv = ["avg-info", "--dim", "3", "--mc", "--samples", "5000", "--seed", "42", "-o", str(path)]
    assert cli.main(argv) == 0
    first = path.read_bytes()
    assert cli.main(argv) == 0
    assert path.read_bytes() == first
    assert capsys.readouterr().out == ""


def test_module_entry_point_is_byte_identical():
    argv = [sys.executable, "-m", "qinfo", "avg-info", "--dim", "5", "--mc", "--samples", "2000",
            "--seed", "11", "--format", "csv"]
    a = subprocess.run(argv, capture_output=True, check=True)
    b = subprocess.run(argv, capture_output=True, check=True)
    assert a.stdout == b.stdout
    assert a.stdout.decode().splitlines()[0] == "quantity,dim,value_bits,value,stderr_bits,method"
