"""Experiment runner: every (method, dataset) pair, aggregated per dataset set."""

from __future__ import annotations

import configparser
import csv
import io
import logging
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import dataset as ds
from . import graph as graphs
from . import metric
from .evaluation import all_indices
from .similarity import MethodSpec, build_W, catalog, sparse_graph, sparsity_level
from .spectral import normalized_laplacian, spectral_cluster

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatasetSource:
    """Where a dataset comes from: a UCI adapter, a CSV file, or the rings generator."""

    name: str
    source: str = "csv"
    set: str = "default"
    path: str | None = None
    uci: str | None = None
    k: int | None = None
    label_column: int = -1
    header: bool = False
    delimiter: str = ","
    allow_duplicates: bool = False
    normalize_diameter: bool | None = None
    n: int = 900
    dispersion: float = 0.0
    seed: int = 0

    def load(self) -> ds.Dataset:
        if self.source == "uci":
            d = ds.load_uci(self.uci or self.name, self.path)
        elif self.source == "csv":
            if self.path is None:
                raise ValueError(f"dataset {self.name}: csv source needs a path")
            d = ds.load_csv(
                self.path,
                label_column=self.label_column,
                header=self.header,
                delimiter=self.delimiter,
                name=self.name,
                allow_duplicates=self.allow_duplicates,
            )
        elif self.source == "rings":
            d = ds.generate_rings(self.n, self.dispersion, self.seed)
            d = ds.Dataset(d.points, d.target_labels, self.name)
        else:
            raise ValueError(f"dataset {self.name}: unknown source {self.source!r}")
        return d


@dataclass
class ExperimentConfig:
    datasets: list[DatasetSource]
    methods: list[MethodSpec] = field(default_factory=catalog)
    seed: int = 0
    out_dir: str = "results"
    workers: int = 1
    eig_tol: float = 1e-9
    normalize_diameter: bool = False
    discretizer: str = "rotation"
    eigensolver: str = "auto"
    check_invariants: bool = False

    def __post_init__(self):
        if not self.datasets:
            raise ValueError("config lists no datasets")
        if not self.methods:
            raise ValueError("config lists no methods")


@dataclass
class RunRecord:
    set: str
    dataset: str
    n: int
    m: int
    k: int
    method: str
    K: int | None = None
    epsilon: float | None = None
    sigma: float | None = None
    sigma_i_min: float | None = None
    sigma_i_mean: float | None = None
    sigma_i_max: float | None = None
    delta_edges: int | None = None
    aggregation_edges: int = 0
    theta: float | None = None
    nmi: float | None = None
    purity: float | None = None
    rand: float | None = None
    ce: float | None = None
    nc: int | None = None
    failed: bool = True
    error: str = ""
    seconds: float = field(default=0.0, metadata={"csv": False})
    violations: list[str] = field(default_factory=list, metadata={"csv": False})

    @property
    def alpha(self) -> float:
        """NMI used for averaging; failed runs count as 0."""
        return 0.0 if self.failed or self.nmi is None else self.nmi


CSV_FIELDS = [f.name for f in fields(RunRecord) if f.metadata.get("csv", True)]


@dataclass
class MethodSummary:
    set: str
    method: str
    theta_mean: float
    alpha_mean: float
    rank: int
    failures: int


@dataclass
class EvaluationReport:
    runs: list[RunRecord]
    summaries: list[MethodSummary]

    def sets(self) -> list[str]:
        return list(dict.fromkeys(r.set for r in self.runs))

    def summary(self, set_name: str) -> list[MethodSummary]:
        return [s for s in self.summaries if s.set == set_name]


def rank_methods(alphas, decimals: int | None = None) -> list[int]:
    """Competition ("1224") ranking: 1 + number of strictly larger values.

    With ``decimals`` the values are rounded first, so methods that agree to
    that many places share a rank.
    """
    a = np.asarray(alphas, dtype=float)
    if a.size == 0:
        raise ValueError("nothing to rank")
    if decimals is not None:
        a = np.round(a, decimals)
    return [1 + int(np.sum(a > x)) for x in a]


# --- single run ---------------------------------------------------------------


def check_structure(W, result, delta: graphs.SparseGraph | None) -> list[str]:
    """Structural checks on one run; returns human-readable violations."""
    out = []
    A = W.matrix
    if A.nnz and abs(A - A.T).max() != 0:
        out.append("W not symmetric")
    if np.any(A.diagonal() != 0):
        out.append("W has nonzero diagonal")
    if A.nnz and (A.data.min() <= 0 or A.data.max() > 1):
        out.append("W entries outside (0, 1]")
    L = normalized_laplacian(W)
    ev = np.linalg.eigvalsh(L.toarray())
    if ev.min() < -1 - 1e-10 or ev.max() > 1 + 1e-10:
        out.append(f"L_N eigenvalues outside [-1, 1]: [{ev.min()}, {ev.max()}]")
    if result.embedding is not None:
        norms = np.linalg.norm(result.embedding.Y, axis=1)
        if np.max(np.abs(norms - 1)) > 1e-10:
            out.append("embedding rows not unit norm")
    if delta is not None and not graphs.is_connected(delta):
        out.append("aggregated graph disconnected")
    return out


def run_one(spec: MethodSpec, d: ds.Dataset, set_name: str, dm: metric.DistanceModel | None = None,
            *, k: int | None = None, seed: int = 0, eig_tol: float = 1e-9, discretizer: str = "rotation",
            eigensolver: str = "auto", check_invariants: bool = False) -> RunRecord:
    k = k or d.k
    rec = RunRecord(set_name, d.name, d.n, d.m, k, spec.name)
    t0 = time.perf_counter()
    try:
        dm = dm or metric.build(d)
        W, diag = build_W(spec, dm)
        for key in ("K", "epsilon", "sigma", "sigma_i_min", "sigma_i_mean", "sigma_i_max",
                    "delta_edges", "aggregation_edges"):
            setattr(rec, key, getattr(diag, key))
        rec.theta = sparsity_level(W)
        result = spectral_cluster(W, k, seed, tol=eig_tol, eigensolver=eigensolver, discretizer=discretizer)
        rec.nc = result.nc
        rec.failed = result.failed
        idx = all_indices(result, d.target_labels)
        rec.nmi, rec.purity, rec.rand, rec.ce = idx["nmi"], idx["purity"], idx["rand"], idx["ce"]
        if check_invariants:
            delta = None if spec.family == "F" else sparse_graph(spec, dm)[0]
            rec.violations = check_structure(W, result, delta)
    except Exception as exc:  # a bad run is recorded, never fatal
        log.warning("%s on %s failed: %s", spec.name, d.name, exc)
        rec.failed = True
        rec.error = f"{type(exc).__name__}: {exc}"
    rec.seconds = time.perf_counter() - t0
    return rec


def _run_dataset(args) -> list[RunRecord]:
    d, set_name, k, specs, opts = args
    dm = metric.build(d)
    return [run_one(s, d, set_name, dm, k=k, **opts) for s in specs]


# --- whole experiment -----------------------------------------------------------


def load_datasets(cfg: ExperimentConfig) -> list[tuple[ds.Dataset, str, int]]:
    """(dataset, set name, cluster count) per configured source."""
    out = []
    for src in cfg.datasets:
        d = src.load()
        if src.k is not None and src.k != d.k:
            log.info("dataset %s: using k=%d from config (labels have %d)", src.name, src.k, d.k)
        norm = cfg.normalize_diameter if src.normalize_diameter is None else src.normalize_diameter
        if norm:
            d = ds.normalize_diameter(d)
        out.append((d, src.set, src.k or d.k))
    return out


def aggregate(runs: list[RunRecord], methods: list[str]) -> list[MethodSummary]:
    by_set: dict[str, dict[str, list[RunRecord]]] = defaultdict(lambda: defaultdict(list))
    for r in runs:
        by_set[r.set][r.method].append(r)
    out = []
    for set_name, per_method in by_set.items():
        names = [m for m in methods if m in per_method]
        thetas = [float(np.mean([r.theta if r.theta is not None else np.nan for r in per_method[m]])) for m in names]
        alphas = [float(np.mean([r.alpha for r in per_method[m]])) for m in names]
        ranks = rank_methods(alphas, decimals=2)
        for m, th, al, rk in zip(names, thetas, alphas, ranks):
            fails = sum(r.failed for r in per_method[m])
            out.append(MethodSummary(set_name, m, th, al, rk, fails))
    return out


def run_experiment(cfg: ExperimentConfig) -> EvaluationReport:
    data = load_datasets(cfg)
    opts = dict(seed=cfg.seed, eig_tol=cfg.eig_tol, discretizer=cfg.discretizer,
                eigensolver=cfg.eigensolver, check_invariants=cfg.check_invariants)
    tasks = [(d, set_name, k, cfg.methods, opts) for d, set_name, k in data]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_run_dataset, tasks))
    else:
        chunks = [_run_dataset(t) for t in tasks]
    runs = [r for chunk in chunks for r in chunk]
    return EvaluationReport(runs, aggregate(runs, [m.name for m in cfg.methods]))


# --- reports --------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def runs_csv(runs: list[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in runs:
        row = asdict(r)
        w.writerow([_fmt(row[f]) for f in CSV_FIELDS])
    return buf.getvalue()


def summary_from_csv(text: str) -> list[MethodSummary]:
    """Rebuild per-set summaries from runs.csv content."""
    runs = []
    for row in csv.DictReader(io.StringIO(text)):
        r = RunRecord(row["set"], row["dataset"], int(row["n"]), int(row["m"]), int(row["k"]), row["method"])
        r.theta = float(row["theta"]) if row["theta"] else None
        r.nmi = float(row["nmi"]) if row["nmi"] else None
        r.failed = row["failed"] == "1"
        runs.append(r)
    return aggregate(runs, list(dict.fromkeys(r.method for r in runs)))


def _family_key(name: str) -> tuple[str, str]:
    spec = MethodSpec.parse(name)
    return spec.family, spec.k_rule or ""


def markdown_tables(report: EvaluationReport, set_name: str) -> str:
    rows = report.summary(set_name)
    nds = len({r.dataset for r in report.runs if r.set == set_name})
    lines = [f"# Set {set_name} ({nds} datasets)", "", "## Averaged sparsity level", "",
             "| method | theta |", "|---|---|"]
    lines += [f"| {s.method} | {100 * s.theta_mean:.0f}% |" for s in rows]
    lines += ["", "## Averaged accuracy (NMI) and rank", "", "| method | alpha | rank | failed runs |",
              "|---|---|---|---|"]
    lines += [f"| {s.method} | {s.alpha_mean:.2f} | {s.rank} | {s.failures} |" for s in rows]
    return "\n".join(lines) + "\n"


def plot_data(report: EvaluationReport, set_name: str) -> str:
    """Whitespace table: one line per (K rule, subscript), one column per family."""
    acc = {s.method: s.alpha_mean for s in report.summary(set_name)}
    lines = ["# k_rule variant E N M"]
    for rule in ("Kl", "Ks"):
        for v in (1, 2, 3, 4):
            vals = [acc.get(f"{fam}{v}_{rule}") for fam in "ENM"]
            if all(x is None for x in vals):
                continue
            lines.append(" ".join([rule, str(v)] + ["nan" if x is None else f"{x:.6f}" for x in vals]))
    return "\n".join(lines) + "\n"


def emit_reports(report: EvaluationReport, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name: str, text: str):
        p = out / name
        p.write_text(text)
        written.append(p)

    put("runs.csv", runs_csv(report.runs))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["set", "method", "theta_mean", "alpha_mean", "rank", "failures"])
    for s in report.summaries:
        w.writerow([s.set, s.method, _fmt(s.theta_mean), _fmt(s.alpha_mean), s.rank, s.failures])
    put("summary.csv", buf.getvalue())
    timing = ["dataset,method,seconds"] + [f"{r.dataset},{r.method},{r.seconds:.6f}" for r in report.runs]
    put("timings.csv", "\n".join(timing) + "\n")
    for set_name in report.sets():
        safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in set_name)
        put(f"set_{safe}.md", markdown_tables(report, set_name))
        put(f"accuracy_{safe}.dat", plot_data(report, set_name))
    return written


# --- config files -----------------------------------------------------------------

_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def _bool(s: str) -> bool:
    try:
        return _BOOL[s.strip().lower()]
    except KeyError:
        raise ValueError(f"not a boolean: {s!r}") from None


def parse_methods(text: str) -> list[MethodSpec]:
    text = text.strip()
    if text.lower() in ("", "all"):
        return catalog()
    return [MethodSpec.parse(tok) for tok in text.replace(",", " ").split()]


def load_config(path) -> ExperimentConfig:
    """Read an INI-style config: one [experiment] section and one [dataset NAME] per dataset."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    path = Path(path)
    with path.open() as fh:
        cp.read_file(fh)
    exp = cp["experiment"] if cp.has_section("experiment") else {}
    sources = []
    for section in cp.sections():
        if not section.startswith("dataset"):
            continue
        name = section[len("dataset"):].strip() or f"dataset{len(sources) + 1}"
        sec = cp[section]
        kw = {"name": sec.get("name", name), "source": sec.get("source", "csv"), "set": sec.get("set", "default")}
        if "uci" in sec:
            kw["uci"] = sec["uci"]
        if "path" in sec:
            p = Path(sec["path"])
            kw["path"] = str(p if p.is_absolute() else path.parent / p)
        for key, conv in (("k", int), ("label_column", int), ("n", int), ("seed", int), ("dispersion", float),
                          ("header", _bool), ("allow_duplicates", _bool), ("normalize_diameter", _bool)):
            if key in sec:
                kw[key] = conv(sec[key])
        if "delimiter" in sec:
            kw["delimiter"] = "\t" if sec["delimiter"] == "tab" else sec["delimiter"]
        sources.append(DatasetSource(**kw))
    out_dir = exp.get("out_dir", "results")
    if not Path(out_dir).is_absolute():
        out_dir = str(path.parent / out_dir)
    return ExperimentConfig(
        datasets=sources,
        methods=parse_methods(exp.get("methods", "all")),
        seed=int(exp.get("seed", 0)),
        out_dir=out_dir,
        workers=int(exp.get("workers", 1)),
        eig_tol=float(exp.get("eig_tol", 1e-9)),
        normalize_diameter=_bool(exp.get("normalize_diameter", "false")),
        discretizer=exp.get("discretizer", "rotation"),
        eigensolver=exp.get("eigensolver", "auto"),
    )
