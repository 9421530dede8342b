"""Command-line interface: one subcommand per pipeline stage.

Machine-readable output goes to stdout or files; progress and log lines go
to stderr only. Exit codes: 0 ok, 1 rejected input (validation, usage),
2 unexpected runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import demo_data, pareto, sweep
from .feasgraph import build_graph, graph_csv, graph_json
from .model import (
    Bounds,
    Timetable,
    Topology,
    ValidationError,
    read_timetable_csv,
    read_topology_csv,
    timetable_csv,
    topology_csv,
)
from .objectives import ObjectiveVector, density_csv, density_profile
from .pathcover import cover_csv, cover_json, min_fleet


class CliError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we own exit codes
        raise CliError(message)


def _num(text: str) -> float:
    if text == "inf":
        return float("inf")
    try:
        return float(text)
    except ValueError:
        raise CliError(f"expected a number or 'inf', got {text!r}") from None


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--timetable", required=True, help="timetable CSV path")
    p.add_argument("--topology", required=True, help="topology CSV path")


def _add_bounds_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--w-min", type=_num, required=True, help="minimum waiting time, seconds or inf")
    p.add_argument("--w-max", type=_num, required=True, help="maximum waiting time, seconds or inf")
    p.add_argument("--d-max", type=_num, required=True, help="maximum deadhead distance, km or inf")
    p.add_argument("--v-max", type=_num, required=True, help="maximum average deadhead speed, km/h or inf")


def build_parser() -> _Parser:
    parser = _Parser(prog="rakelink", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic timetable and topology")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--services", type=int, default=887)
    p.add_argument("--stations", type=int, default=26)
    p.add_argument("--corridor-km", type=float, default=50.0)
    p.add_argument("--out", required=True, help="directory receiving timetable.csv and topology.csv")

    p = sub.add_parser("graph", help="export the link feasibility graph")
    _add_data_args(p)
    _add_bounds_args(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("solve", help="minimum fleet size and rake-links for one bounds tuple")
    _add_data_args(p)
    _add_bounds_args(p)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", help="write the cover to this file")

    p = sub.add_parser("sweep", help="solve every combination of a bounds grid")
    _add_data_args(p)
    p.add_argument("--grid", required=True, help="grid JSON file, or the name 'paper' for the built-in preset")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: cpu count)")
    p.add_argument("--out", required=True, help="directory receiving <run_id>/manifest.jsonl and solutions")

    p = sub.add_parser("pareto", help="front assignment and per-front minima for a sweep")
    p.add_argument("--sweep", required=True, help="sweep run directory (the one holding manifest.jsonl)")
    p.add_argument("--out", required=True, help="directory receiving fronts.csv and front_minima.csv")
    p.add_argument("--finite-v-only", action="store_true", help="drop records with an unbounded speed cap first")

    p = sub.add_parser("clusters", help="objective-space clusters per front")
    p.add_argument("--sweep", required=True)
    p.add_argument("--out", required=True, help="directory receiving clusters.csv")
    p.add_argument("--eps", default="0", help="tolerance: scalar or five comma-separated values")
    p.add_argument("--finite-v-only", action="store_true")

    p = sub.add_parser("density", help="per-second live-service profile")
    p.add_argument("--timetable", required=True)
    p.add_argument("--rle", action="store_true", help="emit change points only")
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("report", help="count sweep records beating a baseline per objective subset")
    p.add_argument("--sweep", required=True)
    p.add_argument("--baseline", required=True, help="f1,f2,f3,f4,f5 of the incumbent rake-link")
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("serve", help="start the HTTP audit service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--ui-dir", default=None, help="static UI assets to serve under /ui")

    return parser


def _load_data(args) -> tuple[Timetable, Topology]:
    tt = read_timetable_csv(args.timetable)
    topo = read_topology_csv(args.topology, tt)
    return tt, topo


def _bounds(args) -> Bounds:
    return Bounds(w_min=args.w_min, w_max=args.w_max, d_max=args.d_max, v_avg_max=args.v_max)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    cfg = demo_data.GeneratorConfig(
        station_count=args.stations,
        corridor_length_km=args.corridor_km,
        services_target=args.services,
        seed=args.seed,
    )
    tt, topo = demo_data.generate(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "timetable.csv").write_text(timetable_csv(tt), encoding="utf-8")
    (out / "topology.csv").write_text(topology_csv(topo), encoding="utf-8")
    print(f"wrote {len(tt)} services to {out}/timetable.csv", file=sys.stderr)
    return 0


def _cmd_graph(args) -> int:
    tt, topo = _load_data(args)
    g = build_graph(tt, topo, _bounds(args))
    text = graph_csv(g, tt) if args.format == "csv" else graph_json(g, tt) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_solve(args) -> int:
    tt, topo = _load_data(args)
    sol = min_fleet(tt, topo, _bounds(args))
    if args.out:
        text = cover_csv(sol, tt) if args.format == "csv" else cover_json(sol, tt) + "\n"
        Path(args.out).write_text(text, encoding="utf-8")
    print(f"fleet={sol.fleet_size}")
    return 0


def _load_grid(spec_text: str) -> sweep.BoundsGrid:
    if spec_text == "paper":
        return sweep.reference_grid()
    path = Path(spec_text)
    if not path.exists():
        raise CliError(f"grid file {spec_text!r} not found (or use the name 'paper')")
    return sweep.BoundsGrid.from_dict(json.loads(path.read_text(encoding="utf-8")))


def _cmd_sweep(args) -> int:
    tt, topo = _load_data(args)
    grid = _load_grid(args.grid)

    def progress(done: int, total: int) -> None:
        if done % 200 == 0 or done == total:
            print(f"solved {done}/{total}", file=sys.stderr)

    manifest = sweep.run_sweep(tt, topo, grid, jobs=args.jobs, out_dir=args.out, progress=progress)
    print(f"run_id={manifest.run_id}")
    print(f"records={len(manifest.records)}")
    return 0


def _manifest_vectors(args) -> tuple[list[sweep.SweepRecord], list[int], list[tuple[float, ...]]]:
    """Solved records to analyze, plus their original manifest row ids."""
    manifest = sweep.load_manifest(args.sweep)
    keep_inf = not getattr(args, "finite_v_only", False)
    picked = [
        (i, r)
        for i, r in enumerate(manifest.records)
        if r.ok and (keep_inf or r.bounds.v_avg_max != float("inf"))
    ]
    records = [r for _, r in picked]
    ids = [i for i, _ in picked]
    return records, ids, [r.objectives.as_tuple() for r in records]


def _cmd_pareto(args) -> int:
    _, ids, vectors = _manifest_vectors(args)
    fa = pareto.sort_fronts(vectors)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "fronts.csv").write_text(pareto.fronts_csv(fa, record_ids=ids), encoding="utf-8")
    (out / "front_minima.csv").write_text(pareto.front_minima_csv(fa, vectors), encoding="utf-8")
    print(f"fronts={len(fa.fronts)}")
    return 0


def _cmd_clusters(args) -> int:
    records, ids, vectors = _manifest_vectors(args)
    parts = args.eps.split(",")
    eps = float(parts[0]) if len(parts) == 1 else [float(p) for p in parts]
    fa = pareto.sort_fronts(vectors)
    clusters = pareto.find_clusters(fa, vectors, eps)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "clusters.csv").write_text(pareto.clusters_csv(clusters, records, record_ids=ids), encoding="utf-8")
    print(f"clusters={len(clusters)}")
    return 0


def _cmd_density(args) -> int:
    tt = read_timetable_csv(args.timetable)
    _emit(density_csv(density_profile(tt), rle=args.rle), args.out)
    return 0


def _cmd_report(args) -> int:
    manifest = sweep.load_manifest(args.sweep)
    parts = args.baseline.split(",")
    if len(parts) != 5:
        raise CliError(f"--baseline wants f1,f2,f3,f4,f5, got {args.baseline!r}")
    baseline = ObjectiveVector(
        f1=int(float(parts[0])), f2=int(float(parts[1])), f3=float(parts[2]), f4=float(parts[3]), f5=float(parts[4])
    )
    report = sweep.improvement_report(manifest, baseline)
    _emit(sweep.improvement_csv(report), args.out)
    print(f"dominating_records={len(report.dominating_records)}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(Path(args.data_dir), ui_dir=Path(args.ui_dir) if args.ui_dir else None)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "graph": _cmd_graph,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "pareto": _cmd_pareto,
    "clusters": _cmd_clusters,
    "density": _cmd_density,
    "report": _cmd_report,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("run 'rakelink --help' for usage", file=sys.stderr)
        return 1
    except (ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except Exception as exc:  # runtime failure, not an input problem
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
