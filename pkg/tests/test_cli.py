import subprocess
import sys

import pytest

from mqshbc import __version__
from mqshbc.cli import main
from mqshbc.results import read_csv
from mqshbc.scenario import shipped_scenarios


@pytest.mark.parametrize("name", shipped_scenarios())
def test_every_shipped_scenario_runs(name, tmp_path):
    out = tmp_path / f"{name}.csv"
    assert main(["run", "--scenario", name, "--out", str(out)]) == 0
    assert read_csv(out).scenario == name


def test_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["sweep-freq", "--scenario", "fig7b", "--points", "50", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r\n" in a.read_bytes()


def test_both_formats(tmp_path):
    out = tmp_path / "o"
    assert main(["sweep-offset", "--scenario", "fig9b", "--format", "both", "--out", str(out)]) == 0
    assert (tmp_path / "o.csv").exists()
    assert (tmp_path / "o.svg").read_text().startswith("<svg")


def test_stdout_csv(capsys):
    assert main(["regime", "--tissue", "muscle", "--body-dimension", "0.5", "--points", "5"]) == 0
    out = capsys.readouterr().out
    assert "regime [-]" in out
    rows = [line for line in out.splitlines() if line and not line.startswith("#")]
    assert len(rows) == 6 and rows[1].endswith(",MQS")


def test_svg_needs_out(capsys):
    assert main(["sweep-freq", "--scenario", "fig7a", "--format", "svg"]) == 1


@pytest.mark.parametrize("argv", [
    ["sweep-freq", "--scenario", "no-such"],
    ["sweep-freq"],
    ["sweep-distance", "--scenario", "fig7a"],
    ["tissue", "--tissue", "unobtainium"],
    ["sweep-freq", "--scenario", "fig7a", "--points", "1"],
])
def test_validation_exit_code(argv, capsys):
    assert main(argv) == 1
    assert "error:" in capsys.readouterr().err


def test_bad_tissue_db(tmp_path, capsys):
    db = tmp_path / "bad.tdb"
    db.write_text("[muscle]\neps_inf = x\n")
    assert main(["tissue", "--tissue-db", str(db)]) == 1


def test_numerical_exit_code(monkeypatch, capsys):
    import mqshbc.sweeps as sweeps
    from mqshbc.errors import SingularityError

    def boom(scenario):
        raise SingularityError("singular", 1e6)

    monkeypatch.setitem(sweeps.RUNNERS, "sweep-freq", boom)
    assert main(["sweep-freq", "--scenario", "fig7a"]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_reference_overlay(tmp_path):
    ref = tmp_path / "ref.csv"
    ref.write_text("frequency [Hz],gain [dB]\n1e5,-60\n1e8,-20\n")
    out = tmp_path / "o.csv"
    assert main(["sweep-freq", "--scenario", "fig7a", "--points", "30", "--reference", str(ref),
                 "--out", str(out)]) == 0
    assert "reference_difference" in read_csv(out).names
    svg = tmp_path / "o.svg"
    assert main(["sweep-freq", "--scenario", "fig7a", "--points", "30", "--reference", str(ref),
                 "--format", "svg", "--out", str(svg)]) == 0
    text = svg.read_text()
    assert ">vna_50_gain_db<" in text and ">reference<" in text


def test_version(capsys):
    assert main(["version"]) == 0
    assert capsys.readouterr().out.strip() == __version__


def test_coil(capsys):
    assert main(["coil", "--scenario", "fig7a"]) == 0
    out = capsys.readouterr().out
    assert "l_tx [H]: 2.6e-07" in out
    assert "np.float64" not in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mqshbc.cli", "version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == __version__
