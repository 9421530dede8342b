"""Bounds-grid sweeps: enumerate admissible decision tuples, solve each one,
and persist the records.

Results live in plain files under <out>/<run_id>/: manifest.jsonl holds one
record per grid combination in grid order, solutions/ holds the covers
content-addressed by hash (identical covers stored once), meta.json holds
run metadata. Record bytes depend only on the inputs, never on worker count
or scheduling, so manifests can be diffed; a partially written manifest is
resumed, not recomputed.
"""

from __future__ import annotations

import json
import multiprocessing
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .feasgraph import PairTable
from .model import (
    INF,
    Bounds,
    Timetable,
    Topology,
    ValidationError,
    canon_num,
    canonical_json,
    content_hash,
    num_from_wire,
    timetable_json,
    topology_json,
)
from .objectives import OBJECTIVE_NAMES, ObjectiveVector, evaluate
from .pathcover import cover_json, min_fleet


@dataclass(frozen=True)
class BoundsGrid:
    """Explicit value lists per bound; each strictly ascending, inf last."""

    w_min_values: tuple[float, ...]
    w_max_values: tuple[float, ...]
    d_max_values: tuple[float, ...]
    v_values: tuple[float, ...]

    def __post_init__(self) -> None:
        for name, values in (
            ("w_min", self.w_min_values),
            ("w_max", self.w_max_values),
            ("d_max", self.d_max_values),
            ("v_avg_max", self.v_values),
        ):
            if not values:
                raise ValidationError(f"{name} grid axis is empty")
            for a, b in zip(values, values[1:]):
                if not a < b:
                    raise ValidationError(f"{name} grid axis must be strictly ascending, got {values}")
            if any(v == INF for v in values[:-1]):
                raise ValidationError(f"{name} grid axis may hold inf only in last position, got {values}")

    def as_dict(self) -> dict:
        return {
            "w_min": [canon_num(v) for v in self.w_min_values],
            "w_max": [canon_num(v) for v in self.w_max_values],
            "d_max": [canon_num(v) for v in self.d_max_values],
            "v_avg_max": [canon_num(v) for v in self.v_values],
        }

    @classmethod
    def from_dict(cls, d) -> "BoundsGrid":
        try:
            return cls(
                w_min_values=tuple(num_from_wire(v) for v in d["w_min"]),
                w_max_values=tuple(num_from_wire(v) for v in d["w_max"]),
                d_max_values=tuple(num_from_wire(v) for v in d["d_max"]),
                v_values=tuple(num_from_wire(v) for v in d["v_avg_max"]),
            )
        except KeyError as exc:
            raise ValidationError(f"grid missing axis {exc.args[0]!r}") from None


def reference_grid() -> BoundsGrid:
    """Built-in preset (CLI name 'paper'): waiting floors 0..300 s by 60
    plus inf, waiting caps 360..3600 s by 60 plus inf, deadhead caps
    0..50 by 5 then 51 plus inf, speed caps 10..60 by 10 plus inf."""
    return BoundsGrid(
        w_min_values=(0, 60, 120, 180, 240, 300, INF),
        w_max_values=tuple(range(360, 3601, 60)) + (INF,),
        d_max_values=(0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 51, INF),
        v_values=(10, 20, 30, 40, 50, 60, INF),
    )


def generate_grid(grid: BoundsGrid) -> list[Bounds]:
    """Cartesian product in (w_min, w_max, d_max, v) lexicographic order,
    keeping only admissible tuples (w_max > w_min). Nothing survives for
    w_min = inf since no cap exceeds inf."""
    out: list[Bounds] = []
    for w_min in grid.w_min_values:
        for w_max in grid.w_max_values:
            if not w_max > w_min:
                continue
            for d_max in grid.d_max_values:
                for v in grid.v_values:
                    out.append(Bounds(w_min=w_min, w_max=w_max, d_max=d_max, v_avg_max=v))
    return out


@dataclass(frozen=True)
class SweepRecord:
    """One grid combination: its bounds, and either the objective vector
    plus a content hash of the stored cover, or an error string."""

    bounds: Bounds
    objectives: ObjectiveVector | None
    solution_ref: str | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class SweepManifest:
    run_id: str
    records: tuple[SweepRecord, ...]
    created_at: str


def record_line(rec: SweepRecord) -> str:
    if rec.error is not None:
        return canonical_json({"bounds": rec.bounds.as_dict(), "error": rec.error})
    return canonical_json(
        {
            "bounds": rec.bounds.as_dict(),
            "objectives": rec.objectives.as_dict(),
            "solution_ref": rec.solution_ref,
        }
    )


def record_from_line(line: str) -> SweepRecord:
    doc = json.loads(line)
    bounds = Bounds.from_dict(doc["bounds"])
    if "error" in doc:
        return SweepRecord(bounds=bounds, objectives=None, solution_ref=None, error=doc["error"])
    return SweepRecord(
        bounds=bounds,
        objectives=ObjectiveVector.from_dict(doc["objectives"]),
        solution_ref=doc["solution_ref"],
    )


def sweep_run_id(tt: Timetable, topo: Topology, grid: BoundsGrid) -> str:
    """Content hash of the inputs; identical inputs always share a run."""
    doc = {"timetable": timetable_json(tt), "topology": topology_json(topo), "grid": grid.as_dict()}
    return content_hash(canonical_json(doc))[:16]


# worker-process state, set once per process by the pool initializer
_WORK: dict = {}


def _init_worker(tt: Timetable, topo: Topology) -> None:
    _WORK["tt"] = tt
    _WORK["topo"] = topo
    _WORK["table"] = PairTable(tt, topo)


def _solve_combo(bounds: Bounds) -> tuple[dict, str | None, str | None]:
    """Solve one combination; returns (record fields, solution hash, text)."""
    tt: Timetable = _WORK["tt"]
    topo: Topology = _WORK["topo"]
    try:
        sol = min_fleet(tt, topo, bounds, table=_WORK["table"])
        vec = evaluate(sol, tt, topo)
        text = cover_json(sol, tt)
        ref = content_hash(text)
        rec = {"bounds": bounds.as_dict(), "objectives": vec.as_dict(), "solution_ref": ref}
        return rec, ref, text
    except ValidationError as exc:
        return {"bounds": bounds.as_dict(), "error": str(exc)}, None, None


def run_sweep(
    tt: Timetable,
    topo: Topology,
    grid: BoundsGrid,
    *,
    jobs: int | None = None,
    out_dir: str | Path | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> SweepManifest:
    """Solve every admissible grid combination and persist the records.

    jobs > 1 fans combinations out to worker processes; records are still
    written in grid order. With out_dir set, an existing partial manifest
    for the same run is extended instead of recomputed.
    """
    combos = generate_grid(grid)
    run_id = sweep_run_id(tt, topo, grid)
    total = len(combos)
    if jobs is None:
        jobs = os.cpu_count() or 1

    run_dir = solutions_dir = manifest_path = None
    existing: list[SweepRecord] = []
    if out_dir is not None:
        run_dir = Path(out_dir) / run_id
        solutions_dir = run_dir / "solutions"
        solutions_dir.mkdir(parents=True, exist_ok=True)
        manifest_path = run_dir / "manifest.jsonl"
        existing = _read_partial_manifest(manifest_path, combos)

    records: list[SweepRecord] = list(existing)
    pending = combos[len(existing):]
    if progress:
        progress(len(records), total)

    mode = "a" if existing else "w"
    fh = open(manifest_path, mode, encoding="utf-8") if manifest_path else None
    try:
        for rec_doc, ref, text in _solve_all(tt, topo, pending, jobs):
            if ref is not None and solutions_dir is not None:
                _write_solution(solutions_dir, ref, text)
            line = canonical_json(rec_doc)
            if fh:
                fh.write(line + "\n")
                fh.flush()
            records.append(record_from_line(line))
            if progress:
                progress(len(records), total)
    finally:
        if fh:
            fh.close()

    created_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if run_dir is not None:
        meta = {
            "run_id": run_id,
            "created_at": created_at,
            "grid": grid.as_dict(),
            "record_count": len(records),
            "timetable_hash": content_hash(timetable_json(tt)),
            "topology_hash": content_hash(topology_json(topo)),
        }
        (run_dir / "meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return SweepManifest(run_id=run_id, records=tuple(records), created_at=created_at)


def _solve_all(tt, topo, pending: Sequence[Bounds], jobs: int) -> Iterable[tuple[dict, str | None, str | None]]:
    if not pending:
        return
    if jobs <= 1:
        _init_worker(tt, topo)
        for b in pending:
            yield _solve_combo(b)
        return
    ctx = multiprocessing.get_context()
    with ctx.Pool(processes=jobs, initializer=_init_worker, initargs=(tt, topo)) as pool:
        yield from pool.imap(_solve_combo, pending, chunksize=8)


def _write_solution(solutions_dir: Path, ref: str, text: str) -> None:
    path = solutions_dir / f"{ref}.json"
    if path.exists():
        return
    tmp = path.with_suffix(".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


def _read_partial_manifest(manifest_path: Path, combos: Sequence[Bounds]) -> list[SweepRecord]:
    """Parse an existing manifest prefix and check it matches the grid; a
    trailing half-written line (crash artifact) is dropped."""
    if not manifest_path.exists():
        return []
    raw = manifest_path.read_text(encoding="utf-8")
    records: list[SweepRecord] = []
    for line in raw.splitlines():
        if not line.strip():
            continue
        try:
            records.append(record_from_line(line))
        except (json.JSONDecodeError, KeyError, ValidationError):
            break
    if len(records) > len(combos):
        raise ValidationError(f"existing manifest has {len(records)} records but the grid has {len(combos)}")
    for rec, expect in zip(records, combos):
        if rec.bounds != expect:
            raise ValidationError(
                f"existing manifest does not match this grid (found {rec.bounds}, expected {expect})"
            )
    canonical = "".join(record_line(r) + "\n" for r in records)
    if canonical != raw:
        manifest_path.write_text(canonical, encoding="utf-8")
    return records


def load_manifest(run_dir: str | Path) -> SweepManifest:
    run_dir = Path(run_dir)
    meta_path = run_dir / "meta.json"
    manifest_path = run_dir / "manifest.jsonl"
    if not manifest_path.exists():
        raise ValidationError(f"no manifest.jsonl under {run_dir}")
    records = tuple(
        record_from_line(line) for line in manifest_path.read_text(encoding="utf-8").splitlines() if line.strip()
    )
    run_id = run_dir.name
    created_at = ""
    if meta_path.exists():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        run_id = meta.get("run_id", run_id)
        created_at = meta.get("created_at", "")
    return SweepManifest(run_id=run_id, records=records, created_at=created_at)


def load_solution_text(run_dir: str | Path, ref: str) -> str:
    path = Path(run_dir) / "solutions" / f"{ref}.json"
    if not path.exists():
        raise ValidationError(f"no stored solution {ref}")
    return path.read_text(encoding="utf-8")


def filter_records(manifest: SweepManifest, predicate: Callable[[SweepRecord], bool]) -> list[SweepRecord]:
    """Stable-order subset of the manifest's records."""
    return [rec for rec in manifest.records if predicate(rec)]


# ---------------------------------------------------------------------------
# improvement accounting against an incumbent plan

@dataclass(frozen=True)
class ImprovementReport:
    """For each non-empty subset of objectives, how many records beat the
    baseline strictly on every objective in the subset."""

    baseline: ObjectiveVector
    subset_counts: tuple[tuple[tuple[str, ...], int], ...]
    dominating_records: tuple[int, ...]


def improvement_report(manifest: SweepManifest, baseline: ObjectiveVector) -> ImprovementReport:
    base = baseline.as_tuple()
    lower_masks: list[tuple[bool, ...]] = []
    for rec in manifest.records:
        if rec.ok:
            vec = rec.objectives.as_tuple()
            lower_masks.append(tuple(v < b for v, b in zip(vec, base)))
        else:
            lower_masks.append((False,) * len(base))

    subsets = [
        tuple(OBJECTIVE_NAMES[i] for i in idxs)
        for size in range(1, len(OBJECTIVE_NAMES) + 1)
        for idxs in combinations(range(len(OBJECTIVE_NAMES)), size)
    ]
    name_index = {name: i for i, name in enumerate(OBJECTIVE_NAMES)}
    counts = []
    for subset in subsets:
        idxs = [name_index[name] for name in subset]
        counts.append((subset, sum(1 for mask in lower_masks if all(mask[i] for i in idxs))))
    dominating = tuple(i for i, mask in enumerate(lower_masks) if all(mask))
    return ImprovementReport(baseline=baseline, subset_counts=tuple(counts), dominating_records=dominating)


def improvement_csv(report: ImprovementReport) -> str:
    lines = ["objectives,count"]
    for subset, count in report.subset_counts:
        lines.append(f"{'+'.join(subset)},{count}")
    return "\n".join(lines) + "\n"
