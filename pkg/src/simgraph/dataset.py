"""Labeled point sets: loaders, the interlacing-rings generator, normalization."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial.distance import pdist


class DatasetError(ValueError):
    """Raised when input data violates the Dataset invariants."""


@dataclass(frozen=True)
class Dataset:
    """n points in R^m with target labels in 1..k.

    ``allow_duplicates`` exists for the UCI adapters only: iris and vote ship
    with repeated rows and the published sizes (150, 435) count them.
    """

    points: np.ndarray
    target_labels: np.ndarray
    name: str = "dataset"
    allow_duplicates: bool = field(default=False, repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        labels = np.asarray(self.target_labels, dtype=int)
        if pts.ndim != 2:
            raise DatasetError("points must be an n x m matrix")
        if labels.shape != (pts.shape[0],):
            raise DatasetError("need exactly one label per point")
        if pts.shape[0] < 2:
            raise DatasetError("a dataset needs at least 2 points")
        if not np.all(np.isfinite(pts)):
            raise DatasetError("coordinates must be finite")
        ids = np.unique(labels)
        if ids[0] != 1 or not np.array_equal(ids, np.arange(1, ids.size + 1)):
            raise DatasetError("labels must cover 1..k with no gaps")
        if not self.allow_duplicates and has_duplicates(pts):
            raise DatasetError("duplicate points are not allowed")
        pts.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "target_labels", labels)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def m(self) -> int:
        return self.points.shape[1]

    @property
    def k(self) -> int:
        return int(self.target_labels.max())

    def with_points(self, points: np.ndarray) -> "Dataset":
        return Dataset(points, self.target_labels, self.name, self.allow_duplicates)


def has_duplicates(points: np.ndarray) -> bool:
    if points.shape[0] < 2:
        return False
    return bool(np.any(pdist(points) == 0.0))


def remap_labels(raw: Sequence) -> tuple[np.ndarray, list]:
    """Map arbitrary label tokens to 1..k in order of first appearance."""
    order: dict = {}
    out = np.empty(len(raw), dtype=int)
    for i, tok in enumerate(raw):
        if tok not in order:
            order[tok] = len(order) + 1
        out[i] = order[tok]
    return out, list(order)


def load_csv(
    path,
    *,
    label_column: int = -1,
    coord_columns: Sequence[int] | None = None,
    header: bool = False,
    delimiter: str = ",",
    name: str | None = None,
    allow_duplicates: bool = False,
) -> Dataset:
    """Read a labeled point set from a delimited text file.

    By default every column except the last is a coordinate and the last one
    is the label. Rows keep file order; labels are renumbered 1..k by first
    appearance.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh, delimiter=delimiter) if r and any(c.strip() for c in r)]
    if header:
        rows = rows[1:]
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    width = len(rows[0])
    lab = label_column % width
    cols = list(coord_columns) if coord_columns is not None else [c for c in range(width) if c != lab]
    coords, raw_labels = [], []
    for lineno, row in enumerate(rows, start=2 if header else 1):
        if len(row) != width:
            raise DatasetError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
        try:
            coords.append([float(row[c]) for c in cols])
        except ValueError as exc:
            raise DatasetError(f"{path}:{lineno}: {exc}") from None
        raw_labels.append(row[lab].strip())
    labels, _ = remap_labels(raw_labels)
    if labels.max() < 2:
        raise DatasetError(f"{path}: labels describe fewer than 2 clusters")
    return Dataset(np.array(coords), labels, name or path.stem, allow_duplicates)


VOTE_CODES = {"y": 1.0, "yes": 1.0, "n": 0.0, "no": 0.0, "?": 0.5, "missing": 0.5}


def encode_vote(records: Iterable[Sequence[str]], *, name: str = "vote") -> Dataset:
    """Encode congressional voting records: yes -> 1, no -> 0, missing -> 0.5.

    Each record is ``(party, v1, ..., v16)`` as in the UCI file. Party labels
    are mapped republican -> 1, democrat -> 2 when present, otherwise by first
    appearance.
    """
    coords, parties = [], []
    for rec in records:
        rec = [t.strip() for t in rec]
        if len(rec) != 17:
            raise DatasetError(f"vote record needs party + 16 votes, got {len(rec)} fields")
        coords.append(encode_vote_record(rec[1:]))
        parties.append(rec[0])
    if set(parties) == {"republican", "democrat"}:
        labels = np.array([1 if p == "republican" else 2 for p in parties])
    else:
        labels, _ = remap_labels(parties)
    return Dataset(np.array(coords), labels, name, allow_duplicates=True)


def encode_vote_record(votes: Sequence[str]) -> np.ndarray:
    if len(votes) != 16:
        raise DatasetError(f"expected 16 votes, got {len(votes)}")
    try:
        return np.array([VOTE_CODES[t.strip().lower()] for t in votes])
    except KeyError as exc:
        raise DatasetError(f"unknown vote token {exc.args[0]!r}") from None


def generate_rings(n_total: int, dispersion: float = 0.0, seed: int = 0, *, radius: float = 1.0) -> Dataset:
    """Two interlaced circles in R^3.

    Ring 1 lies in the xy-plane around the origin, ring 2 in the xz-plane
    around (radius, 0, 0). Each gets n_total/2 points at equally spaced
    angles plus isotropic Gaussian noise of std ``dispersion``.
    """
    if n_total < 2 or n_total % 2:
        raise DatasetError("n_total must be a positive even number")
    if dispersion < 0:
        raise DatasetError("dispersion must be nonnegative")
    half = n_total // 2
    theta = 2.0 * np.pi * np.arange(half) / half
    ring_a = np.column_stack([radius * np.cos(theta), radius * np.sin(theta), np.zeros(half)])
    ring_b = np.column_stack([radius + radius * np.cos(theta), np.zeros(half), radius * np.sin(theta)])
    pts = np.vstack([ring_a, ring_b])
    if dispersion > 0:
        rng = np.random.default_rng(seed)
        pts = pts + rng.normal(scale=dispersion, size=pts.shape)
    labels = np.repeat([1, 2], half)
    return Dataset(pts, labels, f"rings_{n_total}_{dispersion:g}_{seed}")


def normalize_diameter(d: Dataset) -> Dataset:
    """Center at the centroid and scale so the largest pairwise distance is 1."""
    centered = d.points - d.points.mean(axis=0)
    diam = pdist(centered).max()
    if diam == 0:
        raise DatasetError("all points coincide; diameter is zero")
    return d.with_points(centered / diam)


# --- UCI adapters -----------------------------------------------------------
#
# Raw files are bundled under simgraph/data in their original UCI layouts:
#   iris.data                 4 floats + class name, comma separated
#   wine.data                 class id + 13 floats, comma separated
#   house-votes-84.data       party + 16 of {y,n,?}, comma separated
#   seeds_dataset.txt         7 floats + class id, whitespace separated


def _data_path(fname: str) -> Path:
    return Path(str(resources.files("simgraph") / "data" / fname))


def load_iris(path=None) -> Dataset:
    return load_csv(path or _data_path("iris.data"), label_column=-1, name="iris", allow_duplicates=True)


def load_wine(path=None) -> Dataset:
    return load_csv(path or _data_path("wine.data"), label_column=0, name="wine", allow_duplicates=True)


def load_vote(path=None) -> Dataset:
    path = Path(path or _data_path("house-votes-84.data"))
    with path.open(newline="") as fh:
        records = [r for r in csv.reader(fh) if r]
    return encode_vote(records, name="vote")


def load_seeds(path=None) -> Dataset:
    path = Path(path or _data_path("seeds_dataset.txt"))
    rows = [line.split() for line in path.read_text().splitlines() if line.strip()]
    arr = np.array(rows, dtype=float)
    labels, _ = remap_labels(arr[:, -1].astype(int).tolist())
    return Dataset(arr[:, :-1], labels, "seeds", allow_duplicates=True)


UCI_LOADERS = {"iris": load_iris, "wine": load_wine, "vote": load_vote, "seeds": load_seeds}


def load_uci(name: str, path=None) -> Dataset:
    try:
        loader = UCI_LOADERS[name]
    except KeyError:
        raise DatasetError(f"unknown UCI dataset {name!r}; choose from {sorted(UCI_LOADERS)}") from None
    return loader(path)
