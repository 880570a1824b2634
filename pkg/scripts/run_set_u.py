#!/usr/bin/env python3
"""Run all 27 methods on the UCI set and compare with the published averages.

    python3 scripts/run_set_u.py --out results/set_u [--seeds PATH]
"""

from __future__ import annotations

import argparse
import sys
import time

from simgraph.harness import DatasetSource, ExperimentConfig, emit_reports, run_experiment
from simgraph.similarity import MethodSpec

REFERENCE_ALPHA = {
    "F1": 0.52, "F2": 0.58, "F3": 0.58,
    "E1_Kl": 0.56, "E2_Kl": 0.56, "E3_Kl": 0.56, "E4_Kl": 0.56,
    "N1_Kl": 0.57, "N2_Kl": 0.57, "N3_Kl": 0.57, "N4_Kl": 0.58,
    "M1_Kl": 0.55, "M2_Kl": 0.56, "M3_Kl": 0.56, "M4_Kl": 0.56,
    "E1_Ks": 0.54, "E2_Ks": 0.55, "E3_Ks": 0.55, "E4_Ks": 0.55,
    "N1_Ks": 0.58, "N2_Ks": 0.58, "N3_Ks": 0.58, "N4_Ks": 0.57,
    "M1_Ks": 0.56, "M2_Ks": 0.56, "M3_Ks": 0.56, "M4_Ks": 0.55,
}
REFERENCE_THETA = {"F1": 0.44, "F2": 0.24, "F3": 0.18, "E_Kl": 0.94, "N_Kl": 0.95, "M_Kl": 0.97,
                   "E_Ks": 0.91, "N_Ks": 0.91, "M_Ks": 0.95}


def reference_theta(name: str) -> float:
    spec = MethodSpec.parse(name)
    if spec.family == "F":
        return REFERENCE_THETA[name]
    return REFERENCE_THETA[f"{spec.family}_{name.split('_')[1]}"]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/set_u")
    ap.add_argument("--seeds", help="path to seeds_dataset.txt (not bundled)")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    sources = [DatasetSource(n, "uci", "U") for n in ("iris", "wine", "vote")]
    if args.seeds:
        sources.append(DatasetSource("seeds", "uci", "U", path=args.seeds))
    else:
        print("note: seeds not given, averaging over iris/wine/vote only", file=sys.stderr)

    cfg = ExperimentConfig(sources, seed=args.seed, workers=args.workers, out_dir=args.out)
    t0 = time.perf_counter()
    report = run_experiment(cfg)
    elapsed = time.perf_counter() - t0
    emit_reports(report, args.out)

    print(f"{'method':7s} {'alpha':>6s} {'ref':>5s} {'diff':>6s} {'theta':>6s} {'ref':>5s} {'rank':>4s}")
    for s in report.summary("U"):
        ra, rt = REFERENCE_ALPHA[s.method], reference_theta(s.method)
        print(f"{s.method:7s} {s.alpha_mean:6.3f} {ra:5.2f} {s.alpha_mean - ra:+6.3f} "
              f"{100 * s.theta_mean:5.1f}% {100 * rt:4.0f}% {s.rank:4d}")
    print(f"{len(report.runs)} runs in {elapsed:.1f}s; reports in {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
