import runpy
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def _main(name):
    return runpy.run_path(str(SCRIPTS / name))["main"]


def test_rings_sweep(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert _main("rings_sweep.py")(["--n", "120", "--dispersions", "0", "0.05", "--methods", "M4_Ks F3",
                                     "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "dispersion,seed,method,nmi,failed,aggregation_edges" and len(lines) == 5


def test_run_set_u(tmp_path, capsys):
    assert _main("run_set_u.py")(["--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "81 runs" in out and (tmp_path / "set_U.md").exists()
