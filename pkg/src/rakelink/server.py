"""HTTP audit service backing the planner UI.

Upload a dataset once, then audit it repeatedly under different bounds,
launch grid sweeps, and query fronts, clusters and density profiles.
Datasets and sweeps are content-addressed: the hash of the inputs is the
identity, so duplicate uploads and repeated sweep requests resolve to the
existing artifact and restarts resume from the files on disk.

There is NO authentication: this is a planning tool meant to run inside an
operator's trusted network only. Do not expose it publicly.
"""

from __future__ import annotations

import json
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from fastapi import FastAPI, Request, UploadFile
from fastapi.responses import JSONResponse, PlainTextResponse, RedirectResponse

from .feasgraph import PairTable
from .model import (
    Bounds,
    Timetable,
    Topology,
    ValidationError,
    canon_num,
    canonical_json,
    content_hash,
    num_from_wire,
    parse_timetable_csv,
    parse_topology_csv,
    timetable_from_json,
    timetable_json,
    topology_from_json,
    topology_json,
)
from .objectives import density_profile, evaluate, peak_density
from .pareto import find_clusters, front_minima, sort_fronts
from .pathcover import min_fleet
from .sweep import (
    BoundsGrid,
    SweepRecord,
    load_manifest,
    load_solution_text,
    run_sweep,
    sweep_run_id,
)

_FILTER_OPS = ("<=", ">=", "!=", "==", "<", ">", "=")
_FILTER_FIELDS = ("f1", "f2", "f3", "f4", "f5", "w_min", "w_max", "d_max", "v_avg_max")


class _FieldErrors(ValueError):
    def __init__(self, errors: dict[str, str]):
        super().__init__(str(errors))
        self.errors = errors


class _Dataset:
    def __init__(self, dataset_id: str, tt: Timetable, topo: Topology):
        self.dataset_id = dataset_id
        self.tt = tt
        self.topo = topo
        self._table: PairTable | None = None
        self._peak: int | None = None
        self._lock = threading.Lock()

    def table(self) -> PairTable:
        with self._lock:
            if self._table is None:
                self._table = PairTable(self.tt, self.topo)
            return self._table

    def peak(self) -> int:
        with self._lock:
            if self._peak is None:
                self._peak = peak_density(density_profile(self.tt))
            return self._peak


class _SweepJob:
    def __init__(self, sweep_id: str, total: int):
        self.sweep_id = sweep_id
        self.status = "pending"
        self.completed = 0
        self.total = total
        self.error: str | None = None


class AuditServer:
    """All service state: datasets, sweep jobs, and their on-disk layout."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.datasets_dir = self.data_dir / "datasets"
        self.sweeps_dir = self.data_dir / "sweeps"
        self.datasets_dir.mkdir(parents=True, exist_ok=True)
        self.sweeps_dir.mkdir(parents=True, exist_ok=True)
        self._datasets: dict[str, _Dataset] = {}
        self._jobs: dict[str, _SweepJob] = {}
        self._lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=2, thread_name_prefix="sweep")
        self._load_existing()

    # -- datasets ---------------------------------------------------------

    def add_dataset(self, timetable_text: str, topology_text: str) -> tuple[str, bool]:
        """Parse, validate and store a dataset; returns (id, already_known)."""
        tt = parse_timetable_csv(timetable_text)
        topo = parse_topology_csv(topology_text, tt)
        tt_json = timetable_json(tt)
        topo_json = topology_json(topo)
        dataset_id = content_hash(canonical_json({"timetable": tt_json, "topology": topo_json}))[:16]
        with self._lock:
            if dataset_id in self._datasets:
                return dataset_id, True
            ds_dir = self.datasets_dir / dataset_id
            ds_dir.mkdir(parents=True, exist_ok=True)
            (ds_dir / "timetable.csv").write_text(timetable_text, encoding="utf-8")
            (ds_dir / "topology.csv").write_text(topology_text, encoding="utf-8")
            (ds_dir / "timetable.json").write_text(tt_json, encoding="utf-8")
            (ds_dir / "topology.json").write_text(topo_json, encoding="utf-8")
            self._datasets[dataset_id] = _Dataset(dataset_id, tt, topo)
            return dataset_id, False

    def dataset(self, dataset_id: str) -> _Dataset | None:
        with self._lock:
            return self._datasets.get(dataset_id)

    # -- sweeps -----------------------------------------------------------

    def start_sweep(self, ds: _Dataset, grid: BoundsGrid) -> tuple[str, bool]:
        from .sweep import generate_grid

        sweep_id = sweep_run_id(ds.tt, ds.topo, grid)
        with self._lock:
            if sweep_id in self._jobs:
                return sweep_id, True
            job = _SweepJob(sweep_id, total=len(generate_grid(grid)))
            self._jobs[sweep_id] = job
        run_dir = self.sweeps_dir / sweep_id
        run_dir.mkdir(parents=True, exist_ok=True)
        (run_dir / "job.json").write_text(
            json.dumps({"dataset_id": ds.dataset_id, "grid": grid.as_dict()}, indent=2) + "\n",
            encoding="utf-8",
        )
        self._pool.submit(self._run_job, job, ds, grid)
        return sweep_id, False

    def _run_job(self, job: _SweepJob, ds: _Dataset, grid: BoundsGrid) -> None:
        def progress(done: int, total: int) -> None:
            job.completed = done
            job.status = "running"

        job.status = "running"
        try:
            run_sweep(ds.tt, ds.topo, grid, jobs=1, out_dir=self.sweeps_dir, progress=progress)
            job.status = "done"
        except Exception as exc:  # job must report, not crash the pool
            job.error = str(exc)
            job.status = "failed"

    def job(self, sweep_id: str) -> _SweepJob | None:
        with self._lock:
            return self._jobs.get(sweep_id)

    def _load_existing(self) -> None:
        """Recover persisted datasets and resume unfinished sweeps."""
        for ds_dir in sorted(self.datasets_dir.iterdir()) if self.datasets_dir.exists() else []:
            tt_path = ds_dir / "timetable.json"
            topo_path = ds_dir / "topology.json"
            if not (tt_path.exists() and topo_path.exists()):
                continue
            tt = timetable_from_json(tt_path.read_text(encoding="utf-8"))
            topo = topology_from_json(topo_path.read_text(encoding="utf-8"), tt)
            self._datasets[ds_dir.name] = _Dataset(ds_dir.name, tt, topo)
        for run_dir in sorted(self.sweeps_dir.iterdir()) if self.sweeps_dir.exists() else []:
            job_path = run_dir / "job.json"
            if not job_path.exists():
                continue
            info = json.loads(job_path.read_text(encoding="utf-8"))
            ds = self._datasets.get(info.get("dataset_id", ""))
            try:
                grid = BoundsGrid.from_dict(info["grid"])
            except (ValidationError, KeyError):
                continue
            from .sweep import generate_grid

            job = _SweepJob(run_dir.name, total=len(generate_grid(grid)))
            self._jobs[run_dir.name] = job
            if (run_dir / "meta.json").exists():
                job.status = "done"
                job.completed = job.total
            elif ds is not None:
                self._pool.submit(self._run_job, job, ds, grid)  # resume partial run
            else:
                job.status = "failed"
                job.error = "dataset for this sweep is gone"

    def sweep_records(self, sweep_id: str) -> list[SweepRecord]:
        return list(load_manifest(self.sweeps_dir / sweep_id).records)


# ---------------------------------------------------------------------------
# request parsing helpers

def _parse_bounds_body(body) -> Bounds:
    if not isinstance(body, dict):
        raise _FieldErrors({"body": "expected a JSON object"})
    src = body.get("bounds", body)
    if not isinstance(src, dict):
        raise _FieldErrors({"bounds": "expected an object with w_min, w_max, d_max, v_avg_max"})
    errors: dict[str, str] = {}
    values: dict[str, float] = {}
    for field in ("w_min", "w_max", "d_max", "v_avg_max"):
        if field not in src:
            errors[field] = "missing"
            continue
        try:
            values[field] = num_from_wire(src[field])
        except ValidationError:
            errors[field] = f"expected a number or 'inf', got {src[field]!r}"
    if errors:
        raise _FieldErrors(errors)
    try:
        return Bounds(**values)
    except ValidationError as exc:
        raise _FieldErrors({"bounds": str(exc)}) from None


def _parse_filter(expr: str):
    """Tiny record filter: comma-separated `field op value` clauses over
    f1..f5 and the bounds fields; ops <= >= < > == != ="""
    clauses = []
    for raw in expr.split(","):
        part = raw.strip()
        if not part:
            continue
        for op in _FILTER_OPS:
            if op in part:
                field, value = part.split(op, 1)
                field = field.strip()
                if field not in _FILTER_FIELDS:
                    raise ValidationError(f"unknown filter field {field!r}")
                try:
                    target = num_from_wire(value.strip()) if value.strip() == "inf" else float(value)
                except (ValueError, ValidationError):
                    raise ValidationError(f"bad filter value in {part!r}") from None
                clauses.append((field, "==" if op == "=" else op, target))
                break
        else:
            raise ValidationError(f"cannot parse filter clause {part!r}")

    def record_value(rec: SweepRecord, field: str) -> float:
        if field.startswith("f"):
            return getattr(rec.objectives, field)
        return getattr(rec.bounds, field)

    ops = {
        "<=": lambda a, b: a <= b,
        ">=": lambda a, b: a >= b,
        "<": lambda a, b: a < b,
        ">": lambda a, b: a > b,
        "==": lambda a, b: a == b,
        "!=": lambda a, b: a != b,
    }

    def predicate(rec: SweepRecord) -> bool:
        if not rec.ok:
            return False
        return all(ops[op](record_value(rec, field), target) for field, op, target in clauses)

    return predicate


def _record_doc(index: int, rec: SweepRecord) -> dict:
    doc: dict = {"index": index, "bounds": rec.bounds.as_dict()}
    if rec.ok:
        doc["objectives"] = rec.objectives.as_dict()
        doc["solution_ref"] = rec.solution_ref
    else:
        doc["error"] = rec.error
    return doc


async def _json_body(request: Request):
    ctype = request.headers.get("content-type", "")
    if not ctype.startswith("application/json"):
        raise _FieldErrors({"content-type": f"expected application/json, got {ctype or 'none'}"})
    try:
        return await request.json()
    except json.JSONDecodeError:
        raise _FieldErrors({"body": "request body is not valid JSON"}) from None


def route_table(app: FastAPI) -> list[dict]:
    routes = []
    for route in app.routes:
        methods = sorted(m for m in getattr(route, "methods", set()) if m not in ("HEAD", "OPTIONS"))
        if methods and getattr(route, "path", "").strip("/"):
            routes.append({"methods": methods, "path": route.path})
    return sorted(routes, key=lambda r: (r["path"], r["methods"]))


# ---------------------------------------------------------------------------
# app factory

def create_app(data_dir: Path, ui_dir: Path | None = None) -> FastAPI:
    state = AuditServer(Path(data_dir))
    app = FastAPI(title="rake-link audit service", version="0.1.0")
    app.state.audit = state

    def err(status: int, payload) -> JSONResponse:
        return JSONResponse(status_code=status, content=payload)

    def need_dataset(dataset_id: str) -> _Dataset:
        ds = state.dataset(dataset_id)
        if ds is None:
            raise LookupError(dataset_id)
        return ds

    @app.exception_handler(_FieldErrors)
    async def field_errors(_, exc: _FieldErrors):
        return err(400, {"errors": exc.errors})

    @app.exception_handler(LookupError)
    async def lookup_errors(_, exc: LookupError):
        return err(404, {"detail": f"unknown id {exc.args[0]!r}"})

    @app.get("/")
    async def root():
        if ui_dir is not None:
            return RedirectResponse(url="/ui/")
        return {"service": "rake-link audit", "routes": route_table(app)}

    @app.post("/datasets")
    async def upload_dataset(timetable: UploadFile, topology: UploadFile):
        try:
            tt_text = (await timetable.read()).decode("utf-8")
            topo_text = (await topology.read()).decode("utf-8")
        except UnicodeDecodeError:
            return err(400, {"errors": {"files": "CSV uploads must be UTF-8 text"}})
        try:
            dataset_id, existed = state.add_dataset(tt_text, topo_text)
        except ValidationError as exc:
            return err(400, {"errors": {"dataset": str(exc)}})
        if existed:
            return err(409, {"dataset_id": dataset_id, "detail": "duplicate upload; dataset already stored"})
        return {"dataset_id": dataset_id}

    @app.get("/datasets/{dataset_id}")
    async def dataset_detail(dataset_id: str):
        ds = need_dataset(dataset_id)
        return {
            "dataset_id": dataset_id,
            "service_count": len(ds.tt),
            "stations": sorted(ds.topo.stations),
            "services": json.loads(timetable_json(ds.tt))["services"],
        }

    @app.post("/datasets/{dataset_id}/audit")
    async def audit(dataset_id: str, request: Request):
        ds = need_dataset(dataset_id)
        bounds = _parse_bounds_body(await _json_body(request))
        if not bounds.admissible:
            return err(422, {"detail": f"inadmissible bounds: w_max ({canon_num(bounds.w_max)}) must exceed w_min ({canon_num(bounds.w_min)})"})
        t0 = time.perf_counter()
        sol = min_fleet(ds.tt, ds.topo, bounds, table=ds.table())
        vec = evaluate(sol, ds.tt, ds.topo)
        solve_millis = (time.perf_counter() - t0) * 1000.0
        ids = ds.tt.service_ids()
        return {
            "fleet_size": sol.fleet_size,
            "objectives": vec.as_dict(),
            "links": [[ids[k] for k in link.services] for link in sol.links],
            "peak_density": ds.peak(),
            "solve_millis": round(solve_millis, 3),
            "bounds": bounds.as_dict(),
        }

    @app.get("/datasets/{dataset_id}/density")
    async def density(dataset_id: str):
        ds = need_dataset(dataset_id)
        dp = density_profile(ds.tt)
        return {"dataset_id": dataset_id, "peak": peak_density(dp), "counts": list(dp.counts)}

    @app.post("/datasets/{dataset_id}/sweeps")
    async def start_sweep(dataset_id: str, request: Request):
        ds = need_dataset(dataset_id)
        body = await _json_body(request)
        if not isinstance(body, dict) or "grid" not in body:
            return err(400, {"errors": {"grid": "missing"}})
        try:
            grid = BoundsGrid.from_dict(body["grid"])
        except ValidationError as exc:
            return err(400, {"errors": {"grid": str(exc)}})
        sweep_id, existed = state.start_sweep(ds, grid)
        payload = {"sweep_id": sweep_id}
        return JSONResponse(status_code=200 if existed else 202, content=payload)

    @app.get("/sweeps/{sweep_id}")
    async def sweep_status(sweep_id: str):
        job = state.job(sweep_id)
        if job is None:
            raise LookupError(sweep_id)
        doc = {
            "sweep_id": sweep_id,
            "status": job.status,
            "completed": job.completed,
            "total": job.total,
            "progress": round(job.completed / job.total, 6) if job.total else 1.0,
        }
        if job.error:
            doc["error"] = job.error
        return doc

    def need_done_sweep(sweep_id: str) -> list[SweepRecord]:
        job = state.job(sweep_id)
        if job is None:
            raise LookupError(sweep_id)
        if job.status != "done":
            raise _SweepNotDone(job.status)
        return state.sweep_records(sweep_id)

    class _SweepNotDone(Exception):
        def __init__(self, status: str):
            self.status = status

    @app.exception_handler(_SweepNotDone)
    async def sweep_not_done(_, exc: _SweepNotDone):
        return err(409, {"detail": f"sweep is not finished (status: {exc.status})"})

    @app.get("/sweeps/{sweep_id}/records")
    async def sweep_records(sweep_id: str, filter: str = "", offset: int = 0, limit: int = 500):
        records = need_done_sweep(sweep_id)
        if filter:
            try:
                predicate = _parse_filter(filter)
            except ValidationError as exc:
                return err(400, {"errors": {"filter": str(exc)}})
            picked = [(i, r) for i, r in enumerate(records) if predicate(r)]
        else:
            picked = list(enumerate(records))
        window = picked[offset : offset + max(0, limit)]
        return {
            "sweep_id": sweep_id,
            "total": len(picked),
            "offset": offset,
            "records": [_record_doc(i, r) for i, r in window],
        }

    def _front_inputs(sweep_id: str, finite_v_only: bool):
        records = need_done_sweep(sweep_id)
        indexed = [
            (i, r)
            for i, r in enumerate(records)
            if r.ok and (not finite_v_only or not math.isinf(r.bounds.v_avg_max))
        ]
        vectors = [r.objectives.as_tuple() for _, r in indexed]
        return indexed, vectors

    @app.get("/sweeps/{sweep_id}/fronts")
    async def sweep_fronts(sweep_id: str, finite_v_only: bool = False):
        indexed, vectors = _front_inputs(sweep_id, finite_v_only)
        fa = sort_fronts(vectors)
        return {
            "sweep_id": sweep_id,
            "finite_v_only": finite_v_only,
            "record_count": len(indexed),
            "fronts": [
                {"front": k, "size": len(members), "records": [indexed[i][0] for i in members]}
                for k, members in enumerate(fa.fronts, start=1)
            ],
        }

    @app.get("/sweeps/{sweep_id}/fronts/{front}/minima")
    async def sweep_front_minima(sweep_id: str, front: int, finite_v_only: bool = False):
        _, vectors = _front_inputs(sweep_id, finite_v_only)
        fa = sort_fronts(vectors)
        if not 1 <= front <= len(fa.fronts):
            raise LookupError(f"front {front}")
        mins = dict(front_minima(fa, vectors))[front]
        names = ("f1", "f2", "f3", "f4", "f5")
        return {"sweep_id": sweep_id, "front": front, "minima": {n: canon_num(float(v)) for n, v in zip(names, mins)}}

    @app.get("/sweeps/{sweep_id}/clusters")
    async def sweep_clusters(sweep_id: str, eps: str = "0", finite_v_only: bool = False):
        indexed, vectors = _front_inputs(sweep_id, finite_v_only)
        try:
            parts = [float(p) for p in eps.split(",")]
            epsilon = parts[0] if len(parts) == 1 else parts
            fa = sort_fronts(vectors)
            clusters = find_clusters(fa, vectors, epsilon)
        except (ValueError, ValidationError) as exc:
            return err(400, {"errors": {"eps": str(exc)}})
        return {
            "sweep_id": sweep_id,
            "eps": eps,
            "clusters": [
                {
                    "front": c.front,
                    "cluster_id": c.cluster_id,
                    "records": [indexed[i][0] for i in c.members],
                    "representative": {n: canon_num(float(v)) for n, v in zip(("f1", "f2", "f3", "f4", "f5"), c.representative)},
                }
                for c in clusters
            ],
        }

    @app.get("/sweeps/{sweep_id}/solutions/{ref}")
    async def sweep_solution(sweep_id: str, ref: str):
        job = state.job(sweep_id)
        if job is None:
            raise LookupError(sweep_id)
        try:
            text = load_solution_text(state.sweeps_dir / sweep_id, ref)
        except ValidationError:
            raise LookupError(ref) from None
        return PlainTextResponse(content=text, media_type="application/json")

    if ui_dir is not None and Path(ui_dir).exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
