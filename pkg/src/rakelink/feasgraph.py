"""Link feasibility graph: which service pairs one rake can serve back to back.

A directed edge i -> j exists when the waiting window, deadhead distance and
implied average deadhead speed all fit the decision bounds. Services have
strictly positive duration, so departure time strictly increases along every
edge and the graph is a DAG; with services sorted by departure time, index
order is a topological order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .model import (
    INF,
    Bounds,
    InadmissibleBounds,
    Service,
    Timetable,
    Topology,
    canon_num,
    canonical_json,
)


@dataclass(frozen=True, slots=True)
class LinkEdge:
    """Feasible consecutive pair: service index i hands its rake to index j."""

    i: int
    j: int
    headway_s: int
    deadhead_km: float


def link_metrics(si: Service, sj: Service, topo: Topology) -> tuple[int, float]:
    """Headway (seconds) and deadhead distance (km) of running j after i."""
    return sj.dep_time - si.arr_time, topo.distance(si.destination, sj.origin)


def edge_feasible(si: Service, sj: Service, topo: Topology, bounds: Bounds) -> tuple[int, float] | None:
    """Decide whether one rake can serve i then j under the given bounds.

    Returns the (headway_s, deadhead_km) pair when feasible, else None.
    All comparisons are closed (ties feasible) and an infinite bound never
    rejects, with two exceptions: a missing topology entry (infinite
    distance) always rejects, and a zero headway with a positive deadhead
    needs an unbounded average speed.
    """
    h, d = link_metrics(si, sj, topo)
    if not bounds.w_min <= h <= bounds.w_max:
        return None
    if not math.isfinite(d) or d > bounds.d_max:
        return None
    if d > 0.0:
        if h == 0:
            if not math.isinf(bounds.v_avg_max):
                return None
        elif d * 3600.0 > bounds.v_avg_max * h:
            return None
    return h, d


class PairTable:
    """Headway/deadhead matrices over every ordered service pair.

    Building the table costs O(N^2) once per (timetable, topology); each
    bounds evaluation is then a handful of elementwise array operations,
    which is what keeps full-grid sweeps cheap.
    """

    def __init__(self, tt: Timetable, topo: Topology):
        svcs = tt.services
        self.n = n = len(svcs)
        stations = sorted({s.origin for s in svcs} | {s.destination for s in svcs})
        s_index = {name: k for k, name in enumerate(stations)}
        dist = np.full((len(stations), len(stations)), INF)
        np.fill_diagonal(dist, 0.0)
        for (a, b), km in topo.deadhead_km.items():
            ia = s_index.get(a)
            ib = s_index.get(b)
            if ia is not None and ib is not None:
                dist[ia, ib] = km
        np.fill_diagonal(dist, 0.0)
        dep = np.fromiter((s.dep_time for s in svcs), dtype=np.int64, count=n)
        arr = np.fromiter((s.arr_time for s in svcs), dtype=np.int64, count=n)
        orig = np.fromiter((s_index[s.origin] for s in svcs), dtype=np.intp, count=n)
        dest = np.fromiter((s_index[s.destination] for s in svcs), dtype=np.intp, count=n)
        self.headway = dep[None, :] - arr[:, None]
        self.deadhead = dist[dest[:, None], orig[None, :]]
        self._finite = np.isfinite(self.deadhead)

    def feasible_mask(self, bounds: Bounds) -> np.ndarray:
        """Boolean N x N matrix mirroring edge_feasible over all pairs."""
        H, D = self.headway, self.deadhead
        mask = (H >= bounds.w_min) & (H <= bounds.w_max)
        mask &= self._finite
        mask &= D <= bounds.d_max
        with np.errstate(invalid="ignore"):
            speed_ok = D * 3600.0 <= bounds.v_avg_max * H
        speed_ok |= D == 0.0
        if math.isinf(bounds.v_avg_max):
            speed_ok |= (H == 0) & (D > 0.0)
        mask &= speed_ok
        return mask


@dataclass(frozen=True)
class FeasibilityGraph:
    """Edges stored as parallel arrays in canonical (from, to) order."""

    n: int
    edge_from: np.ndarray
    edge_to: np.ndarray
    headways: np.ndarray
    deadheads: np.ndarray
    bounds: Bounds

    @property
    def edge_count(self) -> int:
        return int(self.edge_from.size)

    def edges(self) -> Iterator[LinkEdge]:
        for i, j, h, d in zip(
            self.edge_from.tolist(), self.edge_to.tolist(), self.headways.tolist(), self.deadheads.tolist()
        ):
            yield LinkEdge(i, j, h, d)

    def edge_set(self) -> set[tuple[int, int]]:
        return set(zip(self.edge_from.tolist(), self.edge_to.tolist()))

    def successors(self) -> list[list[int]]:
        """Adjacency lists by source index; inner lists ascending."""
        starts = np.searchsorted(self.edge_from, np.arange(self.n + 1))
        to = self.edge_to.tolist()
        return [to[starts[k]:starts[k + 1]] for k in range(self.n)]


def build_graph(tt: Timetable, topo: Topology, bounds: Bounds, *, table: PairTable | None = None) -> FeasibilityGraph:
    """All feasible links of the timetable under the given bounds."""
    if not bounds.admissible:
        raise InadmissibleBounds(f"w_max ({bounds.w_max}) must exceed w_min ({bounds.w_min})")
    if table is None:
        table = PairTable(tt, topo)
    mask = table.feasible_mask(bounds)
    rows, cols = np.nonzero(mask)  # row-major scan: (from, to) ascending
    return FeasibilityGraph(
        n=table.n,
        edge_from=rows.astype(np.int32),
        edge_to=cols.astype(np.int32),
        headways=table.headway[rows, cols],
        deadheads=table.deadhead[rows, cols],
        bounds=bounds,
    )


def graph_csv(g: FeasibilityGraph, tt: Timetable) -> str:
    ids = tt.service_ids()
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["from_service", "to_service", "headway_s", "deadhead_km"])
    for e in g.edges():
        writer.writerow([ids[e.i], ids[e.j], e.headway_s, canon_num(e.deadhead_km)])
    return out.getvalue()


def graph_json(g: FeasibilityGraph, tt: Timetable) -> str:
    ids = tt.service_ids()
    doc = {
        "bounds": g.bounds.as_dict(),
        "n": g.n,
        "edges": [
            {"from": ids[e.i], "to": ids[e.j], "headway_s": e.headway_s, "deadhead_km": canon_num(e.deadhead_km)}
            for e in g.edges()
        ],
    }
    return canonical_json(doc)


def graph_from_json(text: str, tt: Timetable) -> FeasibilityGraph:
    doc = json.loads(text)
    index = {sid: k for k, sid in enumerate(tt.service_ids())}
    bounds = Bounds.from_dict(doc["bounds"])
    rows = sorted((index[e["from"]], index[e["to"]], e["headway_s"], float(e["deadhead_km"])) for e in doc["edges"])
    return FeasibilityGraph(
        n=doc["n"],
        edge_from=np.array([r[0] for r in rows], dtype=np.int32),
        edge_to=np.array([r[1] for r in rows], dtype=np.int32),
        headways=np.array([r[2] for r in rows], dtype=np.int64),
        deadheads=np.array([r[3] for r in rows], dtype=np.float64),
        bounds=bounds,
    )
