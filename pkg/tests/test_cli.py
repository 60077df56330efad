import csv
import io
import json
import time

import pytest

from bayes_skeptic.cli import main
from bayes_skeptic.tables import ROW_KEYS, TABLE_RHOS

# rho columns of `table pi`, used to drive one `run` invocation per cell.
RHO_ARGS = ["1/2", "2/3", "2/5"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def final_log_capital(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return rows, float(rows[-1]["log_capital"])


def test_run_pi_beta_100(capsys):
    code, out, _ = run_cli(capsys, "run", "--rho", "0.5", "--strategy", "beta:a=100,b=100",
                           "--reality", "file:pi500.txt", "--n", "500")
    assert code == 0
    rows, final = final_log_capital(out)
    assert len(rows) == 500
    assert list(rows[0]) == ["n", "nu", "x", "log_capital"]
    assert final == pytest.approx(-0.2810085, abs=5e-8)


def test_run_pi_positive_part_freezes(capsys):
    code, out, _ = run_cli(capsys, "run", "--rho", "0.5", "--strategy", "beta:a=100,b=100:+",
                           "--reality", "file:pi500.txt", "--n", "500")
    assert code == 0
    rows, final = final_log_capital(out)
    assert final == pytest.approx(-0.1820164, abs=5e-8)
    # the positive-part capital stops moving once the running mean stays below rho
    last_move = max(int(r["n"]) for r in rows if float(r["nu"]) != 0)
    assert 120 <= last_move <= 160
    assert all(float(r["log_capital"]) == final for r in rows[last_move:])


def test_run_zero_bet(capsys):
    code, out, _ = run_cli(capsys, "run", "--rho", "0.5", "--strategy", "const:p=0.5",
                           "--reality", "iid:p=0.5,seed=1", "--n", "10")
    assert code == 0
    rows, _ = final_log_capital(out)
    assert [float(r["log_capital"]) for r in rows] == [0.0] * 10


def test_run_json_and_out_file(capsys, tmp_path):
    target = tmp_path / "trace.json"
    code, out, _ = run_cli(capsys, "--format", "json", "run", "--rho", "2/3", "--strategy", "hyper:M=1,N=4",
                           "--reality", "pattern:HH", "--n", "3", "--out", str(target))
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    assert doc["n_rounds"] == 3
    assert [r["x"] for r in doc["records"]] == ["H", "H", "H"]
    assert doc["records"][-1]["log_capital"] is None


def test_run_precision(capsys):
    _, out, _ = run_cli(capsys, "run", "--rho", "0.5", "--strategy", "beta:a=1,b=1",
                        "--reality", "file:pi500.txt", "--n", "500", "--precision", "4")
    assert out.strip().splitlines()[-1] == "500,-0.08383,T,-2.4"


def test_run_is_deterministic(capsys):
    argv = ["run", "--rho", "0.4", "--strategy", "beta:a=2,b=3:-", "--reality", "iid:p=0.3", "--seed", "11", "--n", "300"]
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second


def test_table_pi_cells_agree_with_run(capsys):
    code, out, _ = run_cli(capsys, "--format", "csv", "--precision", "12", "table", "pi")
    assert code == 0
    cells = list(csv.DictReader(io.StringIO(out)))
    assert len(cells) == len(ROW_KEYS) * len(TABLE_RHOS)
    for cell in cells:
        rho = RHO_ARGS[[f"{r.numerator}/{r.denominator}" for r in TABLE_RHOS].index(cell["rho"])]
        if cell["row"] == "HG":
            strategy = "hyper:M=239,N=500"
        else:
            a, b = cell["row"].split(",")
            strategy = f"beta:a={a},b={b}" + {"full": "", "PP": ":+", "NP": ":-"}[cell["variant"]]
        _, trace, _ = run_cli(capsys, "run", "--rho", rho, "--strategy", strategy,
                              "--reality", "file:pi500.txt", "--n", "500")
        _, final = final_log_capital(trace)
        assert final == pytest.approx(float(cell["log_capital"]), abs=1e-6), cell


def test_table_pi_text(capsys):
    code, out, _ = run_cli(capsys, "table", "pi")
    assert code == 0
    assert "3.816784" in out and "40.88716" in out and "9.562166" in out
    assert "-0.6115032" in out


def test_table_nikkei_counts(capsys):
    code, out, _ = run_cli(capsys, "table", "nikkei_counts")
    assert code == 0
    assert "0.9195455" in out
    assert "n/a" in out


def test_table_json(capsys):
    _, out, _ = run_cli(capsys, "table", "nikkei_counts", "--format", "json")
    doc = json.loads(out)
    assert (doc["n"], doc["heads"]) == (500, 221)
    pp = [c for c in doc["cells"] if c["variant"] == "PP"]
    assert pp and all(c["log_capital"] is None for c in pp)


def test_table_from_source(capsys, tmp_path):
    src = tmp_path / "prices.csv"
    src.write_text("label,open\n" + "".join(f"d{i},{100 + (i * 7) % 5}\n" for i in range(41)))
    code, out, _ = run_cli(capsys, "table", "nikkei_counts", "--source", str(src))
    assert code == 0
    assert "n/a" not in out


def test_verify_fast(capsys):
    start = time.perf_counter()
    code, out, _ = run_cli(capsys, "verify", "fast")
    assert code == 0, out
    assert time.perf_counter() - start < 60
    assert "13/13 properties passed" in out


def corrupted_digits(tmp_path, pi_digits):
    bad = pi_digits[:200] + ("3" if pi_digits[200] != "3" else "4") + pi_digits[201:]
    path = tmp_path / "pi_bad.txt"
    path.write_text(bad + "\n")
    return path


def test_verify_fast_detects_corrupted_digits(capsys, tmp_path, pi_digits):
    code, out, _ = run_cli(capsys, "verify", "fast", "--digits", str(corrupted_digits(tmp_path, pi_digits)))
    assert code == 1
    assert "FAIL  pi-digit-oracle" in out


@pytest.mark.slow
def test_verify_all_detects_corrupted_digits(capsys, tmp_path, pi_digits):
    code, out, _ = run_cli(capsys, "verify", "all", "--digits", str(corrupted_digits(tmp_path, pi_digits)))
    assert code == 1
    assert "FAIL  pi-digit-oracle" in out
    assert "position(s) [200]" in out


def sweep_config(tmp_path, **extra):
    cfg = {"rho": [0.5, "2/3"], "strategy": ["beta:a=1,b=1", "beta:a=100,b=100:+"],
           "reality": ["file:pi500.txt", "iid:p=0.6,seed=4"], "n": 200}
    cfg.update(extra)
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(cfg))
    return path


def test_sweep_jobs_do_not_change_output(capsys, tmp_path):
    cfg = sweep_config(tmp_path)
    _, serial, _ = run_cli(capsys, "sweep", str(cfg), "--jobs", "1")
    _, parallel, _ = run_cli(capsys, "sweep", str(cfg), "--jobs", "2")
    assert serial == parallel
    rows = list(csv.DictReader(io.StringIO(serial)))
    assert len(rows) == 8
    assert float(rows[0]["min_log_capital"]) <= float(rows[0]["log_capital"]) <= float(rows[0]["max_log_capital"])


def test_sweep_trace_matches_run(capsys, tmp_path):
    cfg = sweep_config(tmp_path, rho=[0.5], strategy=["beta:a=100,b=100"], reality=["file:pi500.txt"], n=500, trace=True)
    _, out, _ = run_cli(capsys, "sweep", str(cfg))
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 500
    assert float(rows[-1]["log_capital"]) == pytest.approx(-0.2810085, abs=5e-8)


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--rho", "0.5", "--strategy", "beta:a=1", "--reality", "adversary", "--n", "5"],
        ["run", "--rho", "1.5", "--strategy", "beta:a=1,b=1", "--reality", "adversary", "--n", "5"],
        ["run", "--rho", "0.5", "--strategy", "beta:a=1,b=1", "--reality", "iid:p=0.5", "--n", "5"],
        ["run", "--rho", "0.5", "--strategy", "beta:a=1,b=1", "--reality", "file:/no/such/file", "--n", "5"],
        ["run", "--rho", "0.5", "--strategy", "beta:a=1,b=1", "--reality", "adversary", "--n", "0"],
        ["table", "pi", "--source", "/no/such/digits.txt"],
    ],
)
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_sweep_config_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rho": [0.5], "strategy": ["beta:a=1,b=1"], "reality": ["adversary"]}))
    assert run_cli(capsys, "sweep", str(bad))[0] == 2
    bad.write_text("{not json")
    assert run_cli(capsys, "sweep", str(bad))[0] == 2
    assert run_cli(capsys, "sweep", str(tmp_path / "missing.json"))[0] == 2


def test_short_move_file_exits_3(capsys, tmp_path):
    moves = tmp_path / "moves.txt"
    moves.write_text("H\nT\nH\n")
    code, _, err = run_cli(capsys, "run", "--rho", "0.5", "--strategy", "beta:a=1,b=1",
                           "--reality", f"file:{moves}", "--n", "10")
    assert code == 3
    assert "RealityExhausted" in err


def test_urn_horizon_exits_3(capsys):
    code, _, _ = run_cli(capsys, "run", "--rho", "0.5", "--strategy", "hyper:M=2,N=4",
                         "--reality", "pattern:HT", "--n", "6")
    assert code == 3
