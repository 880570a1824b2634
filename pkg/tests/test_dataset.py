import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.spatial.distance import pdist

from simgraph import dataset as ds


def test_load_csv_remaps_labels(tmp_path):
    p = tmp_path / "four.csv"
    p.write_text("0,0,a\n1,0,a\n5,5,b\n6,5,b\n")
    d = ds.load_csv(p)
    assert (d.n, d.m, d.k) == (4, 2, 2)
    assert d.target_labels.tolist() == [1, 1, 2, 2]
    assert d.name == "four"


def test_load_csv_header_and_label_column(tmp_path):
    p = tmp_path / "h.csv"
    p.write_text("cls;x;y\nb;0;0\na;1;1\nb;2;0\n")
    d = ds.load_csv(p, label_column=0, header=True, delimiter=";")
    assert d.points.tolist() == [[0, 0], [1, 1], [2, 0]]
    assert d.target_labels.tolist() == [1, 2, 1]


def test_load_csv_rejects_duplicates(tmp_path):
    p = tmp_path / "dup.csv"
    p.write_text("0,0,a\n0,0,b\n1,1,b\n")
    with pytest.raises(ds.DatasetError, match="duplicate"):
        ds.load_csv(p)
    assert ds.load_csv(p, allow_duplicates=True).n == 3


@pytest.mark.parametrize(
    "text,match",
    [("0,0,a\n1,1\n", "expected 3 fields"), ("0,x,a\n1,1,b\n", "could not convert"), ("0,0,a\n1,1,a\n", "fewer than 2")],
)
def test_load_csv_errors(tmp_path, text, match):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(ds.DatasetError, match=match):
        ds.load_csv(p)


def test_dataset_invariants():
    with pytest.raises(ds.DatasetError):
        ds.Dataset(np.zeros((1, 2)), [1])
    with pytest.raises(ds.DatasetError):
        ds.Dataset(np.array([[0.0], [1.0]]), [1, 3])
    with pytest.raises(ds.DatasetError):
        ds.Dataset(np.array([[0.0], [np.nan]]), [1, 2])
    d = ds.Dataset(np.array([[0.0], [1.0]]), [2, 1])
    assert d.k == 2
    with pytest.raises(ValueError):
        d.points[0, 0] = 3.0


def test_iris():
    d = ds.load_iris()
    assert (d.n, d.m, d.k) == (150, 4, 3)
    assert np.bincount(d.target_labels).tolist() == [0, 50, 50, 50]


def test_wine():
    d = ds.load_wine()
    assert (d.n, d.m, d.k) == (178, 13, 3)
    assert np.bincount(d.target_labels).tolist() == [0, 59, 71, 48]


def test_vote_file():
    d = ds.load_vote()
    assert (d.n, d.m, d.k) == (435, 16, 2)
    assert np.bincount(d.target_labels).tolist() == [0, 168, 267]
    assert set(np.unique(d.points)) <= {0.0, 0.5, 1.0}


def test_encode_vote_records():
    ones = ds.encode_vote_record(["y"] * 16)
    assert ones.tolist() == [1.0] * 16
    assert ds.encode_vote_record(["?"] * 16).tolist() == [0.5] * 16
    assert ds.encode_vote_record(["missing"] * 16).tolist() == [0.5] * 16
    assert ds.encode_vote_record(["no"] * 16).tolist() == [0.0] * 16
    with pytest.raises(ds.DatasetError, match="unknown vote"):
        ds.encode_vote_record(["maybe"] * 16)
    d = ds.encode_vote([["democrat"] + ["y"] * 16, ["republican"] + ["n"] * 16])
    assert d.target_labels.tolist() == [2, 1]


def test_seeds_loader_reads_whitespace_layout(tmp_path):
    p = tmp_path / "seeds.txt"
    p.write_text("15.26\t14.84\t0.871\t5.763\t3.312\t2.221\t5.22\t1\n14.88 14.57 0.8811 5.554 3.333 1.018 4.956 2\n")
    d = ds.load_seeds(p)
    assert (d.n, d.m, d.k) == (2, 7, 2)


def test_unknown_uci_name():
    with pytest.raises(ds.DatasetError):
        ds.load_uci("glass")


def _circle_distance(p):
    x, y, z = p.T
    a = np.hypot(np.hypot(x, y) - 1.0, z)
    b = np.hypot(np.hypot(x - 1.0, z) - 1.0, y)
    return np.minimum(a, b)


def test_rings_noiseless_on_circles():
    d = ds.generate_rings(900, 0.0, 3)
    assert (d.n, d.m, d.k) == (900, 3, 2)
    assert _circle_distance(d.points).max() < 1e-12
    a, b = d.points[d.target_labels == 1], d.points[d.target_labels == 2]
    cross = np.sqrt(((a[:, None] - b[None]) ** 2).sum(-1))
    assert cross.min() > 0


def test_rings_four_points():
    d = ds.generate_rings(4, 0.0, 11)
    assert np.bincount(d.target_labels).tolist() == [0, 2, 2]
    assert _circle_distance(d.points).max() < 1e-12


def test_rings_deterministic():
    a = ds.generate_rings(900, 0.05, 7)
    b = ds.generate_rings(900, 0.05, 7)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, ds.generate_rings(900, 0.05, 8).points)


@pytest.mark.parametrize("n,disp", [(3, 0.0), (0, 0.0), (4, -0.1)])
def test_rings_preconditions(n, disp):
    with pytest.raises(ds.DatasetError):
        ds.generate_rings(n, disp)


def test_normalize_line():
    d = ds.normalize_diameter(ds.Dataset(np.array([[0.0], [2.0]]), [1, 2]))
    assert pdist(d.points).tolist() == [1.0]


def test_normalize_unit_square():
    sq = ds.Dataset(np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float), [1, 1, 2, 2])
    dist = sorted(pdist(ds.normalize_diameter(sq).points))
    assert np.allclose(dist[:4], 1 / np.sqrt(2), atol=1e-15)
    assert np.allclose(dist[4:], 1.0, atol=1e-15)


def test_normalize_unit_diameter_only_translates():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.5]])
    out = ds.normalize_diameter(ds.Dataset(pts, [1, 2, 2])).points
    assert np.allclose(out, pts - pts.mean(axis=0), atol=1e-15)


@given(arrays(np.float64, st.tuples(st.integers(2, 12), st.integers(1, 4)),
              elements=st.floats(-1e3, 1e3, allow_nan=False)))
def test_normalize_idempotent(pts):
    if pdist(pts).min(initial=np.inf) < 1e-6:
        return
    labels = np.r_[1, 2, np.ones(pts.shape[0] - 2, dtype=int)]
    once = ds.normalize_diameter(ds.Dataset(pts, labels))
    twice = ds.normalize_diameter(once)
    assert abs(pdist(once.points).max() - 1.0) < 1e-12
    assert np.max(np.abs(once.points - twice.points)) < 1e-12
