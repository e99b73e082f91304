import math
import subprocess
import sys

import pytest

from spinweave.cli import main
from spinweave.couplings import assign_perfect_transfer
from spinweave.network import build_star, network_to_text
from spinweave.scenarios import PRESETS, ResultTable

SMALL = """\
[topology]
family = y
lengths = 1, 1, 1
[initial]
site = 1
[run]
T = 2*pi
n_samples = 201
[observables]
fidelity = plus
revivals = F_plus, 0.99
"""


def test_run_stdout(tmp_path, capsys):
    cfg = tmp_path / "small.cfg"
    cfg.write_text(SMALL)
    assert main(["run", str(cfg)]) == 0
    table = ResultTable.from_csv_text(capsys.readouterr().out)
    assert table.columns == ["F_plus"]
    assert table.metadata["scenario"] == "small"


def test_run_to_file(tmp_path):
    cfg = tmp_path / "small.cfg"
    cfg.write_text(SMALL)
    out = tmp_path / "r.csv"
    assert main(["run", str(cfg), "--out", str(out)]) == 0
    assert ResultTable.read_csv(out).data.shape == (201, 2)


def test_run_parse_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(SMALL.replace("site = 1", "site = 9"))
    assert main(["run", str(cfg)]) == 1
    assert "line 5" in capsys.readouterr().err


def test_run_missing_file(tmp_path):
    assert main(["run", str(tmp_path / "nope.cfg")]) == 1


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_unknown_preset():
    with pytest.raises(SystemExit) as info:
        main(["preset", "fig99"])
    assert info.value.code == 1


def test_preset_print(capsys):
    assert main(["preset", "fig4_333"]) == 0
    assert capsys.readouterr().out == PRESETS["fig4_333"]


def test_preset_group_run(tmp_path):
    out = tmp_path / "fig8.csv"
    assert main(["preset", "fig8_random_A_B", "--run", "--out", str(out)]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fig8_fig8_random_A.csv", "fig8_fig8_random_B.csv"]


def test_reduce(tmp_path, capsys):
    net = assign_perfect_transfer(build_star(2, 1, 3))
    path = tmp_path / "star.txt"
    path.write_text(network_to_text(net))
    assert main(["reduce", str(path)]) == 0
    lines = capsys.readouterr().out.split()
    assert int(lines[0]) == 4
    # perfect-transfer profile sqrt(i (L - i)) on the 4-site chain
    got = [float(x) for x in lines[1:]]
    assert got == pytest.approx([math.sqrt(3), 2.0, math.sqrt(3)], rel=1e-12)


def test_reduce_bad_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("sites 3 input 1\n1 2 1.0\n")
    assert main(["reduce", str(path)]) == 1


def test_check(capsys):
    assert main(["check", "--max-n", "6", "--times", "3"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_peaks(tmp_path, capsys):
    cfg = tmp_path / "small.cfg"
    cfg.write_text(SMALL)
    out = tmp_path / "r.csv"
    main(["run", str(cfg), "--out", str(out)])
    capsys.readouterr()
    assert main(["peaks", str(out), "--column", "F_plus"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0] == "time,value,fwhm"
    times = [float(r.split(",")[0]) for r in rows[1:]]
    assert times == pytest.approx([math.pi / 2, 3 * math.pi / 2], abs=1e-3)


def test_peaks_bad_column(tmp_path):
    out = tmp_path / "r.csv"
    out.write_text("t,a\n0,0\n1,1\n2,0\n")
    assert main(["peaks", str(out), "--column", "b"]) == 1


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "spinweave.cli", "preset", "fig9_bifurcation"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "[topology]" in res.stdout
