import json
import sqlite3

import pytest

from config.config import Config
from core.commands import (
    EXIT_ERROR,
    EXIT_NOT_COVERED,
    EXIT_OK,
    cmd_check,
    cmd_classify,
    cmd_exponents,
    cmd_run,
    cmd_sweep,
)
from ledger.database import DatabaseManager
from main import main

MODEL = """\
[model]
variant = local
tau = 0
chi = 0.1
xi = 0.1
lambda = 1
mu = 1
r = {r}
m1 = 1
m2 = 1
m3 = 1
k = 1
l = 1

[grid]
dimension = 1
lengths = 3.141592653589793
cells = 16

[time]
T = {T}

[init]
preset = gaussian
width = 0.3
amplitude = 1
floor = 1

[output]
dir = {out}
snapshot_every = {snapshot_every}
"""


def write_config(tmp_path, extra="", r=2.0, T=0.2, snapshot_every=0):
    out = tmp_path / "out"
    path = tmp_path / "run.cfg"
    path.write_text(MODEL.format(r=r, T=T, out=out, snapshot_every=snapshot_every) + extra)
    return path, out


def _rows(text):
    return [line.split(",") for line in text.strip().splitlines()]


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    monkeypatch.setattr(Config, "JOBS", None)


# ============ classify ============
def test_classify_bounded_row(capsys):
    code = cmd_classify(0, "local", 1, 1, 1, 1, 2, 1.5, 2, header=True)
    assert code == EXIT_OK
    assert capsys.readouterr().out == (
        "a1,a2,a3,a4,a5,verdict,witness\ntrue,false,false,false,false,Bounded,A1\n"
    )


def test_classify_not_covered(capsys):
    code = cmd_classify(0, "nonlocal", 1, 1, 1, 2, 1, 1.5, 2)
    assert code == EXIT_NOT_COVERED
    assert capsys.readouterr().out == "false,false,false,false,false,NotCovered,\n"


def test_classify_pairs(capsys):
    assert cmd_classify(1, "local", -1, 0, 0, 1, 1, 2, 1) == EXIT_OK
    assert _rows(capsys.readouterr().out)[0][-1] == "A2+A4"


def test_classify_rejects_invalid_models(capsys):
    assert cmd_classify(0, "local", 1, 1, 1, 1, 1, 1.0, 1) == EXIT_ERROR
    assert capsys.readouterr().out == ""


# ============ exponents ============
def test_exponent_row(capsys):
    assert cmd_exponents(2, 1, 0.5, 0.5, 1, 1, p=2.0, q=2.0, header=True) == EXIT_OK
    header, row = _rows(capsys.readouterr().out)
    values = dict(zip(header, row))
    assert float(values["theta"]) == pytest.approx(0.6)
    assert float(values["sigma_theta_half"]) == pytest.approx(0.75)
    assert values["theta2"] == ""
    assert values["flag_sigma_theta"] == "true"
    assert values["flag_theta_tilde"] == "true"
    assert values["flag_theta"] == "true"
    assert len(header) == len(set(header))


def test_exponents_default_q(capsys):
    assert cmd_exponents(1, 1, 1, 1, 1, 2, p=3.0) == EXIT_OK
    row = _rows(capsys.readouterr().out)[0]
    assert float(row[1]) == pytest.approx(3.0)


def test_pbar_search_row(capsys):
    code = cmd_exponents(2, 1, 0.5, 0.5, 1, 1, q=2.0, search=True, header=True)
    assert code == EXIT_OK
    header, row = _rows(capsys.readouterr().out)
    assert header == ["p_bar", "q", "required"]
    assert float(row[0]) == pytest.approx(2.01)
    assert "theta_hat" not in row[2].split(";")


def test_exponents_need_p():
    assert cmd_exponents(2, 1, 0.5, 0.5, 1, 1) == EXIT_ERROR


def test_pbar_not_found_is_an_error(capsys):
    code = cmd_exponents(2, 1, 1, 0.5, 1, 1, search=True, require=["sigma_theta"])
    assert code == EXIT_ERROR
    assert capsys.readouterr().out == ""


# ============ run / check ============
def test_run_writes_its_outputs(tmp_path):
    path, out = write_config(tmp_path, snapshot_every=20)
    assert cmd_run(path) == EXIT_OK

    assert (out / "timeseries.csv").exists()
    assert (out / "final.txt").read_text().startswith("# t=0.2")
    assert (out / "snapshot_00000.txt").exists()

    sidecar = json.loads((out / "regime_report.json").read_text())
    assert sidecar["regime"]["verdict"] == "Bounded"
    assert sidecar["regime"]["witness"] == "A3"
    assert sidecar["run_verdict"] == "Completed"
    assert sidecar["consistency"]["mass_bound"] > 0
    assert sidecar["consistency"]["regime"] == "Bounded"
    assert sidecar["regime"]["a3"] is True
    assert sidecar["model"]["k"] == 1.0
    assert sidecar["model"]["variant"] == "local"


def test_run_with_a_broken_config(tmp_path):
    path, _ = write_config(tmp_path, r=1.0)
    assert cmd_run(path) == EXIT_ERROR
    assert cmd_run(tmp_path / "missing.cfg") == EXIT_ERROR


def test_check_does_not_simulate(tmp_path, capsys):
    path, out = write_config(tmp_path)
    assert cmd_check(path) == EXIT_OK
    assert "Bounded" in capsys.readouterr().out
    assert not (out / "timeseries.csv").exists()


def test_check_uses_the_configured_signals(tmp_path, capsys):
    path, _ = write_config(tmp_path)
    text = path.read_text().replace("tau = 0", "tau = 1").replace("preset = gaussian", "preset = gaussian\nsignals = zero")
    path.write_text(text)

    assert cmd_check(path) == EXIT_OK
    assert "zero, sup v=0, sup w=0" in capsys.readouterr().out


# ============ sweep / ledger ============
def test_sweep_over_k(tmp_path):
    path, out = write_config(tmp_path, extra="\n[sweep]\nk = 0.5:3:6\n", r=1.5)
    assert cmd_sweep(path, jobs=1) == EXIT_OK

    lines = (out / "regime_map.csv").read_text().splitlines()
    assert lines[0].startswith("# generated=")
    assert lines[1] == "k,a1,a2,a3,a4,a5,verdict,witness,status"
    rows = [line.split(",") for line in lines[2:]]
    assert [float(row[0]) for row in rows] == pytest.approx([0.5, 1.0, 1.5, 2.0, 2.5, 3.0])
    assert [row[6] for row in rows] == ["Bounded"] * 3 + ["NotCovered"] * 3

    db = DatabaseManager(str(out / "ledger.db"))
    stats = db.get_stats()
    db.close()
    assert stats["total_points"] == 6
    assert stats["verdicts"] == {"Bounded": 3, "NotCovered": 3}


def test_sweep_records_failed_points(tmp_path):
    path, out = write_config(tmp_path, extra="\n[sweep]\nr = 0.5:1.5:3\n", r=1.5)
    assert cmd_sweep(path, jobs=1) == EXIT_OK

    rows = [line.split(",") for line in (out / "regime_map.csv").read_text().splitlines()[2:]]
    assert [row[-1].startswith("error") for row in rows] == [True, True, False]

    db = DatabaseManager(str(out / "ledger.db"))
    assert db.get_stats()["failed_points"] == 2
    db.close()


def test_sweep_over_budget(tmp_path):
    path, out = write_config(tmp_path, extra="\n[sweep]\nk = 0.5:3:6\nbudget = 3\n")
    assert cmd_sweep(path) == EXIT_ERROR
    assert not (out / "regime_map.csv").exists()


def test_simulated_sweep_adds_run_columns(tmp_path):
    path, out = write_config(tmp_path, extra="\n[sweep]\nk = 1:1.5:2\nsimulate = true\n", T=0.1)
    assert cmd_sweep(path, jobs=1) == EXIT_OK

    lines = (out / "regime_map.csv").read_text().splitlines()
    assert lines[1] == "k,a1,a2,a3,a4,a5,verdict,witness,sup_u,mass_margin,run_verdict,status"
    assert (out / "point_0001" / "timeseries.csv").exists()


def test_ledger_points_roundtrip(tmp_path):
    db = DatabaseManager(str(tmp_path / "ledger.db"))
    sweep_id = db.create_sweep("sweep.cfg")
    db.save_point(sweep_id, {"idx": 0, "params": {"k": 1.0}, "verdict": "Bounded", "status": "ok"})
    db.save_point(sweep_id, {"idx": 1, "params": {"k": 2.0}, "status": "error: r>1 required"})
    db.end_sweep(sweep_id)

    points = db.get_sweep_points(sweep_id)
    assert [p["params"] for p in points] == [{"k": 1.0}, {"k": 2.0}]
    assert points[0]["verdict"] == "Bounded"
    assert db.get_stats() == {
        "total_sweeps": 1, "total_points": 2, "verdicts": {"Bounded": 1}, "failed_points": 1,
    }

    with pytest.raises(sqlite3.IntegrityError):
        db.save_point(sweep_id, {"idx": 0, "params": {}, "status": "ok"})
    db.close()


# ============ entry point ============
def test_main_dispatches(capsys):
    code = main(["classify", "--tau", "1", "--m1", "1", "--m2", "1", "--m3", "1",
                 "--k", "1", "--l", "1", "--r", "1.5", "--n", "1"])
    assert code == EXIT_OK
    assert capsys.readouterr().out.strip().endswith("Bounded,A3+A5")


def test_main_takes_single_letter_flags(capsys):
    code = main(["--log-level", "WARNING", "exponents", "--n", "2", "--m1", "1", "--m2", "0.5",
                 "--m3", "0.5", "--k", "1", "--l", "1", "--p", "2", "--q", "2"])
    assert code == EXIT_OK
    row = _rows(capsys.readouterr().out)[0]
    assert float(row[2]) == pytest.approx(0.6)
