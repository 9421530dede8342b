#!/usr/bin/env python3
"""End-to-end demo experiment: generate a synthetic corridor timetable,
sweep a bounds grid, then derive fronts, clusters and an improvement report.

Writes everything under --out and prints a short summary. With --grid paper
the full built-in preset runs (30576 combinations; expect minutes, not
seconds)."""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from rakelink.demo_data import GeneratorConfig, generate
from rakelink.model import timetable_csv, topology_csv
from rakelink.objectives import ObjectiveVector, density_profile, peak_density
from rakelink.pareto import find_clusters, front_minima_csv, fronts_csv, clusters_csv, sort_fronts
from rakelink.sweep import (
    BoundsGrid,
    improvement_csv,
    improvement_report,
    reference_grid,
    run_sweep,
)

INF = float("inf")

DEMO_GRID = BoundsGrid(
    w_min_values=(0, 60, 120, 180, 240, 300),
    w_max_values=(600, 1200, 1800, 2400, 3000, 3600),
    d_max_values=(0, 10, 25, INF),
    v_values=(20, 40, 60, INF),
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="demo_run", help="output directory")
    ap.add_argument("--services", type=int, default=887)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("--grid", choices=("demo", "paper"), default="demo")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    tt, topo = generate(GeneratorConfig(services_target=args.services, seed=args.seed))
    (out / "timetable.csv").write_text(timetable_csv(tt))
    (out / "topology.csv").write_text(topology_csv(topo))
    peak = peak_density(density_profile(tt))
    print(f"generated {len(tt)} services over {len(topo.stations)} stations; peak live density {peak}")

    grid = DEMO_GRID if args.grid == "demo" else reference_grid()
    t0 = time.perf_counter()
    manifest = run_sweep(tt, topo, grid, jobs=args.jobs, out_dir=out / "sweeps",
                         progress=lambda d, t: print(f"\rsolved {d}/{t}", end="", file=sys.stderr))
    print(file=sys.stderr)
    elapsed = time.perf_counter() - t0
    solved = [r for r in manifest.records if r.ok]
    f1s = [r.objectives.f1 for r in solved]
    print(f"sweep {manifest.run_id}: {len(solved)} records in {elapsed:.1f}s; fleet range {min(f1s)}..{max(f1s)}")
    assert all(f >= peak for f in f1s), "live-density lower bound violated"

    vectors = [r.objectives.as_tuple() for r in solved]
    fa = sort_fronts(vectors)
    (out / "fronts.csv").write_text(fronts_csv(fa))
    (out / "front_minima.csv").write_text(front_minima_csv(fa, vectors))
    clusters = find_clusters(fa, vectors, 0)
    (out / "clusters.csv").write_text(clusters_csv(clusters, solved))
    print(f"{len(fa.fronts)} fronts; {len(clusters)} exact clusters over {len(set(vectors))} unique vectors")

    # incumbent stand-in: a weak-ish quantile per objective, so the report is non-trivial
    per = lambda d: sorted(v[d] for v in vectors)[int(len(vectors) * 0.7)]
    baseline = ObjectiveVector(f1=int(per(0)), f2=int(per(1)), f3=per(2), f4=per(3), f5=per(4))
    report = improvement_report(manifest, baseline)
    (out / "improvement.csv").write_text(improvement_csv(report))
    wins = dict(report.subset_counts)[("f1", "f2", "f3", "f4", "f5")]
    print(f"baseline {baseline.as_tuple()}: {wins} records beat it on every objective")
    return 0


if __name__ == "__main__":
    sys.exit(main())
