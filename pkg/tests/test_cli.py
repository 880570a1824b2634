import numpy as np

from simgraph import cli
from simgraph.dataset import load_csv


def test_list_methods(capsys):
    assert cli.main(["list-methods"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 27
    assert lines[0].startswith("F1 ") and lines[-1].startswith("M4_Ks ")


def test_gen_rings(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert cli.main(["gen", "rings", "--n", "40", "--dispersion", "0.01", "--seed", "3", "--out", str(out)]) == 0
    d = load_csv(out)
    assert (d.n, d.m, d.k) == (40, 3, 2)


def test_run(tmp_path, capsys):
    pts = np.r_[np.linspace(0, 1, 8), np.linspace(10, 11, 8)]
    (tmp_path / "line.csv").write_text("".join(f"{x},{1 + (x > 5)}\n" for x in pts))
    cfg = tmp_path / "c.ini"
    cfg.write_text("[experiment]\nmethods = M1_Kl F3\n\n[dataset line]\npath = line.csv\n")
    out = tmp_path / "out"
    assert cli.main(["run", str(cfg), "--out-dir", str(out), "--seed", "1", "--workers", "1",
                     "--eig-tol", "1e-9", "--normalize-diameter"]) == 0
    assert (out / "runs.csv").exists() and (out / "set_default.md").exists()
    assert "2 runs, 0 failed" in capsys.readouterr().err
