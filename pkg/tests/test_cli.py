import json

import pytest

from bqfcorr.cli import EXIT_ERROR, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def config(tmp_path):
    def write(forms, linear, constant, box):
        path = tmp_path / "system.json"
        path.write_text(json.dumps({"forms": forms, "linear": linear, "constant": constant, "box": box}))
        return str(path)

    return write


def test_unit(capsys):
    code, out, _ = call(capsys, "unit", "--disc", "8")
    data = json.loads(out)
    assert code == EXIT_OK and data["t0"] == 6 and data["u0"] == 2
    assert data["log_eps"] == pytest.approx(1.7627, abs=1e-4)


def test_rep_pointwise_and_table(capsys, tmp_path):
    code, out, _ = call(capsys, "rep", "--form", "1,0,1", "--n", "5")
    assert code == 0 and json.loads(out)["r"] == 2
    target = tmp_path / "table.csv"
    code, out, _ = call(capsys, "rep", "--form", "1,0,1", "--limit", "10", "--out", str(target))
    lines = target.read_text().splitlines()
    assert code == 0 and lines[0] == "n,count" and lines[6] == "5,2" and len(lines) == 12
    assert json.loads(out)["total"] == 9


def test_rho(capsys):
    code, out, _ = call(capsys, "rho", "--form", "1,0,1", "--mod", "4", "--res", "1")
    assert code == 0 and json.loads(out)["rho"] == 8


def test_reduce(capsys):
    code, out, _ = call(capsys, "reduce", "--form", "3,8,8")
    assert json.loads(out)["reduced"] == "3,2,3"
    code, out, _ = call(capsys, "reduce", "--form", "1,3,1")
    assert json.loads(out)["reduced"] == "1,1,-1"
    code, _, _ = call(capsys, "reduce", "--form=-1,0,-1")
    assert code == EXIT_VALIDATION


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["nonsense"])
    assert exc.value.code == EXIT_USAGE
    code, _, err = call(capsys, "rep", "--form", "2,0,2", "--n", "3")
    assert code == EXIT_USAGE and "primitive" in err
    code, _, _ = call(capsys, "rep", "--form", "1,0,1")
    assert code == EXIT_USAGE


def test_internal_error_exit_code(capsys):
    code, _, err = call(capsys, "unit", "--disc", "9")
    assert code == EXIT_ERROR and "ValueError" in err


def test_betap_and_betainf(capsys, config):
    path = config(["1,0,1"], [[2]], [1], [[0, 1]])
    code, out, _ = call(capsys, "betap", "--config", path, "--p", "2", "--mmax", "4")
    data = json.loads(out)
    assert code == 0 and data["value"] == "1/1" and data["stabilized"]
    code, out, _ = call(capsys, "betainf", "--config", path, "--N", "100")
    assert json.loads(out)["beta_inf"] == pytest.approx(25 * 3.14159265358979, rel=1e-11)


def test_correlate_writes_report_and_is_reproducible(capsys, config, tmp_path):
    path = config(["1,0,1", "1,0,-2"], [[1, 0], [1, 1]], [0, 0], [[0, 1], [0, 1]])
    out_path = tmp_path / "report.json"
    code, out1, _ = call(capsys, "correlate", "--config", path, "--N", "200", "--pmax", "13", "--out", str(out_path))
    code2, out2, _ = call(capsys, "correlate", "--config", path, "--N", "200", "--pmax", "13")
    assert code == code2 == 0
    assert out1 == out2
    report = json.loads(out_path.read_text())
    assert report["singular_series"] == "1/1"
    assert set(report) >= {"empirical_sum", "predicted", "relative_error", "N", "p_max", "factors"}
    assert list(report) == sorted(report)


def test_correlate_validation_failure(capsys, config):
    path = config(["1,0,1", "1,0,1"], [[1], [1]], [0, 1], [[0, 1]])
    code, _, err = call(capsys, "correlate", "--config", path, "--N", "10")
    assert code == EXIT_VALIDATION and "proportional" in err


def test_bad_config(capsys, config):
    path = config(["1,0,1"], [[1, 0]], [0], [[0, 1]])
    code, _, _ = call(capsys, "correlate", "--config", path, "--N", "10")
    assert code == EXIT_USAGE


def test_apavg(capsys):
    code, out, _ = call(capsys, "apavg", "--form", "1,0,-2", "--mod", "3", "--res", "1", "--N", "10000")
    data = json.loads(out)
    assert code == 0 and data["rho"] == 4 and data["predicted"] == pytest.approx(0.830967, abs=1e-5)


def test_wtrick(capsys):
    code, out, _ = call(capsys, "wtrick", "--w", "5", "--threshold", "10")
    data = json.loads(out)
    assert data["W"] == 432 and data["alphas"] == {"2": 4, "3": 3} and data["admissible"]
    code, out, _ = call(capsys, "wtrick", "--w", "5", "--threshold", "10", "--form", "1,0,-2", "--M", "2000")
    assert 0.9 < json.loads(out)["mean"] < 1.1


def test_float_format(capsys):
    _, out, _ = call(capsys, "unit", "--disc", "5")
    assert '"log_eps": 0.962423650119' in out


def test_selftest(capsys):
    code, out, _ = call(capsys, "selftest")
    assert code == 0
    assert all(v["ok"] for v in json.loads(out).values())
